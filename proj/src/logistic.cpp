#include "ynote/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ynote {

namespace {

// log(1 + exp(-m)) without overflow.
double softplus_neg(double m) {
  if (m >= 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

// sigma(-m) = 1 / (1 + exp(m)), stable on both tails.
double sigmoid_neg(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

double sigmoid(double z) { return sigmoid_neg(-z); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double row_margin(const SparseRow& row, const std::vector<double>& wb) {
  double m = wb.back();  // intercept
  for (const auto& [col, v] : row) m += wb[col] * v;
  return m;
}

}  // namespace

void TrainConfig::validate() const {
  if (regularization_strength <= 0.0) {
    throw Error("regularization strength C must be positive");
  }
  if (max_iter < 1) throw Error("max_iter must be >= 1");
  if (tol <= 0.0) throw Error("tol must be positive");
}

std::vector<double> balanced_sample_weights(const std::vector<int>& y) {
  std::map<int, std::size_t> counts;
  for (int label : y) ++counts[label];
  const double n = static_cast<double>(y.size());
  const double k = static_cast<double>(counts.size());
  std::vector<double> w(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    w[i] = n / (k * static_cast<double>(counts[y[i]]));
  }
  return w;
}

double binary_logistic_loss(const FeatureMatrix& X,
                            const std::vector<double>& targets,
                            const std::vector<double>& sample_weights,
                            double c, const std::vector<double>& wb) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.rows.size(); ++i) {
    loss += sample_weights[i] * softplus_neg(targets[i] * row_margin(X.rows[i], wb));
  }
  double sq = 0.0;
  for (std::size_t j = 0; j + 1 < wb.size(); ++j) sq += wb[j] * wb[j];
  return loss + sq / (2.0 * c);
}

double binary_logistic_loss_grad(const FeatureMatrix& X,
                                 const std::vector<double>& targets,
                                 const std::vector<double>& sample_weights,
                                 double c, const std::vector<double>& wb,
                                 std::vector<double>& grad) {
  grad.assign(wb.size(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < X.rows.size(); ++i) {
    const double margin = targets[i] * row_margin(X.rows[i], wb);
    loss += sample_weights[i] * softplus_neg(margin);
    // d/dm log(1+exp(-m)) = -sigma(-m)
    const double coeff = -sample_weights[i] * sigmoid_neg(margin) * targets[i];
    for (const auto& [col, v] : X.rows[i]) grad[col] += coeff * v;
    grad.back() += coeff;
  }
  // L2 penalty on the weights only; the intercept is free.
  double sq = 0.0;
  for (std::size_t j = 0; j + 1 < wb.size(); ++j) {
    sq += wb[j] * wb[j];
    grad[j] += wb[j] / c;
  }
  return loss + sq / (2.0 * c);
}

FitResult fit_binary_logistic(const FeatureMatrix& X,
                              const std::vector<double>& targets,
                              const std::vector<double>& sample_weights,
                              double c, int max_iter, double tol,
                              std::vector<double>& wb,
                              const std::vector<double>* wb0) {
  const std::size_t dim = X.n_cols + 1;
  if (wb0) {
    wb = *wb0;
  } else {
    wb.assign(dim, 0.0);
  }

  // L-BFGS with a fixed-size history and backtracking Armijo line search.
  // The objective is convex and smooth, so curvature pairs are safe to keep
  // whenever s.y is meaningfully positive.
  constexpr std::size_t kHistory = 10;
  constexpr double kArmijoC1 = 1e-4;

  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  std::vector<double> grad(dim), new_grad(dim);
  double loss = binary_logistic_loss_grad(X, targets, sample_weights, c, wb, grad);

  FitResult result;
  std::vector<double> direction(dim), trial(dim);
  std::vector<double> alpha(kHistory);

  for (int iter = 0; iter < max_iter; ++iter) {
    const double gnorm = norm2(grad);
    if (gnorm <= tol) {
      result.converged = true;
      result.iterations = iter;
      result.final_loss = loss;
      result.grad_norm = gnorm;
      return result;
    }

    // Two-loop recursion for -H * grad.
    direction = grad;
    const std::size_t h = s_hist.size();
    for (std::size_t idx = h; idx-- > 0;) {
      alpha[idx] = rho_hist[idx] * dot(s_hist[idx], direction);
      for (std::size_t j = 0; j < dim; ++j) {
        direction[j] -= alpha[idx] * y_hist[idx][j];
      }
    }
    if (h > 0) {
      const double yy = dot(y_hist[h - 1], y_hist[h - 1]);
      const double gamma = yy > 0.0 ? 1.0 / (rho_hist[h - 1] * yy) : 1.0;
      for (double& v : direction) v *= gamma;
    }
    for (std::size_t idx = 0; idx < h; ++idx) {
      const double beta = rho_hist[idx] * dot(y_hist[idx], direction);
      for (std::size_t j = 0; j < dim; ++j) {
        direction[j] += (alpha[idx] - beta) * s_hist[idx][j];
      }
    }
    for (double& v : direction) v = -v;

    double dir_deriv = dot(grad, direction);
    if (!(dir_deriv < 0.0)) {
      // Degenerate curvature estimate: fall back to steepest descent.
      direction = grad;
      for (double& v : direction) v = -v;
      dir_deriv = -gnorm * gnorm;
    }

    double step = 1.0;
    double new_loss = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < dim; ++j) {
        trial[j] = wb[j] + step * direction[j];
      }
      new_loss = binary_logistic_loss_grad(X, targets, sample_weights, c,
                                           trial, new_grad);
      if (new_loss <= loss + kArmijoC1 * step * dir_deriv) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Line search stalled at floating-point resolution.
      result.converged = false;
      result.iterations = iter;
      result.final_loss = loss;
      result.grad_norm = gnorm;
      return result;
    }

    std::vector<double> s(dim), yv(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      s[j] = trial[j] - wb[j];
      yv[j] = new_grad[j] - grad[j];
    }
    const double sy = dot(s, yv);
    if (sy > 1e-12 * norm2(s) * norm2(yv)) {
      if (s_hist.size() == kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }

    wb.swap(trial);
    grad.swap(new_grad);
    loss = new_loss;
    result.iterations = iter + 1;
  }

  result.converged = norm2(grad) <= tol;
  result.final_loss = loss;
  result.grad_norm = norm2(grad);
  return result;
}

OvrModel train_ovr(const FeatureMatrix& X, const std::vector<int>& y,
                   const TrainConfig& config, TrainReport* report) {
  config.validate();
  if (X.rows.size() != y.size()) {
    throw DimensionMismatch("X has " + std::to_string(X.rows.size()) +
                            " rows but y has " + std::to_string(y.size()));
  }
  std::map<int, std::size_t> counts;
  for (int label : y) ++counts[label];
  if (counts.size() < 2) {
    throw SingleClassInput("training requires at least two distinct labels");
  }

  std::vector<double> weights;
  if (config.class_weight == ClassWeight::Balanced) {
    weights = balanced_sample_weights(y);
  } else {
    weights.assign(y.size(), 1.0);
  }

  OvrModel model;
  model.train_config = config;
  for (const auto& [label, count] : counts) model.classes.push_back(label);

  TrainReport local_report;
  for (int label : model.classes) {
    std::vector<double> targets(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      targets[i] = y[i] == label ? 1.0 : -1.0;
    }
    std::vector<double> wb;
    const FitResult fit = fit_binary_logistic(
        X, targets, weights, config.regularization_strength, config.max_iter,
        config.tol, wb);

    model.intercept.push_back(wb.back());
    wb.pop_back();
    model.coef.push_back(std::move(wb));

    ClassFitReport cls;
    cls.label = label;
    cls.converged = fit.converged;
    cls.iterations = fit.iterations;
    cls.final_loss = fit.final_loss;
    cls.grad_norm = fit.grad_norm;
    local_report.classes.push_back(cls);
  }
  if (report) *report = std::move(local_report);
  return model;
}

ClassScores predict_proba(const OvrModel& model, const SparseRow& x) {
  const std::size_t n_features = model.n_features();
  ClassScores scores;
  scores.probs.resize(model.classes.size());
  double total = 0.0;
  for (std::size_t cls = 0; cls < model.classes.size(); ++cls) {
    double z = model.intercept[cls];
    for (const auto& [col, v] : x) {
      if (col >= n_features) {
        throw DimensionMismatch("feature index " + std::to_string(col) +
                                " is outside the model's " +
                                std::to_string(n_features) + " columns");
      }
      z += model.coef[cls][col] * v;
    }
    scores.probs[cls] = sigmoid(z);
    total += scores.probs[cls];
  }
  for (double& p : scores.probs) p /= total;
  return scores;
}

int predict(const OvrModel& model, const SparseRow& x) {
  const ClassScores scores = predict_proba(model, x);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.probs.size(); ++i) {
    if (scores.probs[i] > scores.probs[best]) best = i;
  }
  return model.classes[best];
}

std::vector<int> predict_batch(const OvrModel& model, const FeatureMatrix& X) {
  if (X.n_cols != model.n_features()) {
    throw DimensionMismatch("matrix has " + std::to_string(X.n_cols) +
                            " columns, model expects " +
                            std::to_string(model.n_features()));
  }
  std::vector<int> out;
  out.reserve(X.rows.size());
  for (const SparseRow& row : X.rows) out.push_back(predict(model, row));
  return out;
}

std::vector<ClassScores> predict_proba_batch(const OvrModel& model,
                                             const FeatureMatrix& X) {
  if (X.n_cols != model.n_features()) {
    throw DimensionMismatch("matrix has " + std::to_string(X.n_cols) +
                            " columns, model expects " +
                            std::to_string(model.n_features()));
  }
  std::vector<ClassScores> out;
  out.reserve(X.rows.size());
  for (const SparseRow& row : X.rows) out.push_back(predict_proba(model, row));
  return out;
}

std::vector<std::pair<std::string, double>> top_features(
    const OvrModel& model, const Vocabulary& vocab, int class_label,
    std::size_t k, CoefSign sign) {
  const auto it =
      std::find(model.classes.begin(), model.classes.end(), class_label);
  if (it == model.classes.end()) {
    throw UnknownClass("class " + std::to_string(class_label) +
                       " is not part of the model");
  }
  const std::size_t cls =
      static_cast<std::size_t>(it - model.classes.begin());
  if (vocab.size() != model.n_features()) {
    throw DimensionMismatch("vocabulary size does not match the model");
  }

  std::vector<std::pair<std::string, double>> picked;
  for (std::size_t col = 0; col < vocab.size(); ++col) {
    const double coeff = model.coef[cls][col];
    if (sign == CoefSign::Positive ? coeff > 0.0 : coeff < 0.0) {
      picked.emplace_back(vocab.entries[col].text, coeff);
    }
  }
  std::sort(picked.begin(), picked.end(),
            [sign](const auto& a, const auto& b) {
              if (a.second != b.second) {
                return sign == CoefSign::Positive ? a.second > b.second
                                                  : a.second < b.second;
              }
              return a.first < b.first;
            });
  if (picked.size() > k) picked.resize(k);
  return picked;
}

}  // namespace ynote
