#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ynote/error.hpp"
#include "ynote/logistic.hpp"

namespace ynote {

struct ClassTooSmallForSplit : Error {
  explicit ClassTooSmallForSplit(const std::string& msg) : Error(msg) {}
};
struct ClassSmallerThanK : Error {
  explicit ClassSmallerThanK(const std::string& msg) : Error(msg) {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};
struct DegenerateClass : Error {
  explicit DegenerateClass(const std::string& msg) : Error(msg) {}
};

struct SplitSpec {
  double train = 0.65;
  double val = 0.15;
  double test = 0.20;
  std::uint64_t seed = 42;
  bool stratified = true;

  void validate() const;  // ratios positive, summing to 1 +- 1e-9
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

// Normative per-class allocation: split sizes come from largest-remainder
// rounding of the global ratios, the test counts are allocated across
// classes by largest remainder first, then the train counts across what
// remains, and val takes the leftovers. Remainder ties go to the lowest
// class label. Exposed separately so tests can check it directly.
std::map<int, SplitCounts> allocate_split_counts(const std::vector<int>& y,
                                                 const SplitSpec& spec);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Disjoint, exhaustive, deterministic given the seed. Within a class the
// assignment order comes from a seeded shuffle. Every class needs >= 3
// samples (ClassTooSmallForSplit otherwise).
SplitIndices stratified_split(const std::vector<int>& y,
                              const SplitSpec& spec);

// k disjoint folds partitioning [0, n); per-class counts differ by <= 1
// across folds. Every class count must be >= k (ClassSmallerThanK).
std::vector<std::vector<std::size_t>> stratified_kfold(
    const std::vector<int>& y, std::size_t k, std::uint64_t seed);

// Raw counts, M[i][j] = count(true == labels[i], pred == labels[j]).
std::vector<std::vector<std::size_t>> confusion_matrix(
    const std::vector<int>& y_true, const std::vector<int>& y_pred,
    const std::vector<int>& labels);

// Row-normalized copy; an empty true-class row stays all-zero.
std::vector<std::vector<double>> normalize_confusion(
    const std::vector<std::vector<std::size_t>>& raw);

struct ClassMetrics {
  int label = 0;
  double precision = 0.0;  // 0 when TP+FP == 0
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationReport {
  std::vector<ClassMetrics> per_class;
  double weighted_precision = 0.0;  // support-weighted averages
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t n_samples = 0;
};

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred,
                                           const std::vector<int>& labels);

// Rank-statistic AUC (Mann-Whitney U with average ranks for ties).
// Throws DegenerateClass without at least one positive and one negative.
double roc_auc_binary(const std::vector<int>& is_positive,
                      const std::vector<double>& scores);

std::vector<double> roc_auc_per_class(const std::vector<int>& y_true,
                                      const std::vector<ClassScores>& scores,
                                      const std::vector<int>& labels);

// Macro: unweighted mean of per-class AUCs. Micro: one AUC over the
// flattened (n_samples x n_classes) indicator/score pairs.
double roc_auc_macro(const std::vector<int>& y_true,
                     const std::vector<ClassScores>& scores,
                     const std::vector<int>& labels);
double roc_auc_micro(const std::vector<int>& y_true,
                     const std::vector<ClassScores>& scores,
                     const std::vector<int>& labels);

// Everything the evaluation surface reports for one labeled set.
struct EvalReport {
  std::vector<int> labels;
  std::vector<std::string> class_names;
  ClassificationReport report;
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<std::vector<double>> confusion_normalized;
  std::vector<double> auc_per_class;
  double auc_micro = 0.0;
  double auc_macro = 0.0;
  std::size_t zero_feature_rows = 0;
};

EvalReport build_eval_report(const std::vector<int>& y_true,
                             const std::vector<int>& y_pred,
                             const std::vector<ClassScores>& scores,
                             const std::vector<int>& labels,
                             const std::vector<std::string>& class_names);

}  // namespace ynote
