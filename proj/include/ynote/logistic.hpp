#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ynote/error.hpp"
#include "ynote/features.hpp"

namespace ynote {

struct SingleClassInput : Error {
  explicit SingleClassInput(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct UnknownClass : Error {
  explicit UnknownClass(const std::string& msg) : Error(msg) {}
};

enum class ClassWeight { Balanced, Uniform };

struct TrainConfig {
  double regularization_strength = 1.0;  // C, inverse-penalty convention
  int max_iter = 2000;
  double tol = 1e-6;  // gradient-norm convergence threshold
  ClassWeight class_weight = ClassWeight::Balanced;
  std::uint64_t seed = 42;

  void validate() const;
};

struct ClassFitReport {
  int label = 0;
  bool converged = false;
  int iterations = 0;
  double final_loss = 0.0;
  double grad_norm = 0.0;
};

struct TrainReport {
  std::vector<ClassFitReport> classes;
};

// One-vs-Rest L2-regularized logistic regression. coef is row-per-class over
// vocabulary columns; the intercept is not penalized.
struct OvrModel {
  std::vector<int> classes;  // ascending labels
  std::vector<std::vector<double>> coef;
  std::vector<double> intercept;
  std::string vocab_fingerprint;  // content hash of the fitted vocabulary
  TrainConfig train_config;

  std::size_t n_features() const { return coef.empty() ? 0 : coef[0].size(); }
};

// Per-class OvR probabilities: sigmoid scores normalized to sum to 1.
struct ClassScores {
  std::vector<double> probs;  // aligned with OvrModel::classes
};

// Balanced weights n_samples / (n_classes * class_count), computed from the
// multiclass labels and shared by every binary subproblem.
std::vector<double> balanced_sample_weights(const std::vector<int>& y);

// Weighted regularized negative log-likelihood for one binary subproblem.
// wb holds the weight vector followed by the intercept; targets are +-1.
// Exposed so tests can check the analytic gradient by finite differences.
double binary_logistic_loss(const FeatureMatrix& X,
                            const std::vector<double>& targets,
                            const std::vector<double>& sample_weights,
                            double c, const std::vector<double>& wb);
double binary_logistic_loss_grad(const FeatureMatrix& X,
                                 const std::vector<double>& targets,
                                 const std::vector<double>& sample_weights,
                                 double c, const std::vector<double>& wb,
                                 std::vector<double>& grad);

struct FitResult {
  bool converged = false;
  int iterations = 0;
  double final_loss = 0.0;
  double grad_norm = 0.0;
};

// L-BFGS fit of one binary subproblem. wb is initialized to zeros unless
// wb0 is given (tests use that to check the optimum is init-invariant).
FitResult fit_binary_logistic(const FeatureMatrix& X,
                              const std::vector<double>& targets,
                              const std::vector<double>& sample_weights,
                              double c, int max_iter, double tol,
                              std::vector<double>& wb,
                              const std::vector<double>* wb0 = nullptr);

// Trains one binary classifier per class (ascending label order).
// Deterministic given inputs and config. Throws SingleClassInput when fewer
// than two labels are present, DimensionMismatch when X and y disagree.
OvrModel train_ovr(const FeatureMatrix& X, const std::vector<int>& y,
                   const TrainConfig& config, TrainReport* report = nullptr);

// Throws DimensionMismatch when x references a column outside the model.
ClassScores predict_proba(const OvrModel& model, const SparseRow& x);

// Argmax of predict_proba; ties broken by lowest class index.
int predict(const OvrModel& model, const SparseRow& x);

std::vector<int> predict_batch(const OvrModel& model, const FeatureMatrix& X);
std::vector<ClassScores> predict_proba_batch(const OvrModel& model,
                                             const FeatureMatrix& X);

enum class CoefSign { Positive, Negative };

// The k n-grams with the largest (or most negative) coefficients for one
// class, descending by magnitude within the chosen sign, ties lexicographic.
// The vocabulary must be the one the model was fitted on.
std::vector<std::pair<std::string, double>> top_features(
    const OvrModel& model, const Vocabulary& vocab, int class_label,
    std::size_t k, CoefSign sign);

}  // namespace ynote
