#include "ynote/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ynote/rng.hpp"

namespace ynote {

namespace {

// Largest-remainder rounding: floor every quota, then hand the missing
// units to the largest fractional remainders, ties to the lowest index.
std::vector<std::size_t> largest_remainder(const std::vector<double>& quotas,
                                           std::size_t total) {
  std::vector<std::size_t> counts(quotas.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t allocated = 0;
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(quotas[i]));
    allocated += counts[i];
    remainders.emplace_back(quotas[i] - std::floor(quotas[i]), i);
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t i = 0; allocated < total; ++i, ++allocated) {
    counts[remainders[i].second] += 1;
  }
  return counts;
}

std::map<int, std::vector<std::size_t>> group_by_class(
    const std::vector<int>& y) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < y.size(); ++i) groups[y[i]].push_back(i);
  return groups;
}

// Average 1-based ranks with ties sharing the mean rank of their group.
// Tie-group means are exact halves, so rank sums carry no rounding error.
std::vector<double> average_ranks(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::vector<double> ranks(scores.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           scores[order[j + 1]] == scores[order[i]]) {
      ++j;
    }
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

void SplitSpec::validate() const {
  if (train <= 0.0 || val <= 0.0 || test <= 0.0) {
    throw Error("split ratios must all be positive");
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw Error("split ratios must sum to 1");
  }
}

std::map<int, SplitCounts> allocate_split_counts(const std::vector<int>& y,
                                                 const SplitSpec& spec) {
  spec.validate();
  const auto groups = group_by_class(y);
  const std::size_t n = y.size();

  // Global split sizes first.
  const auto global = largest_remainder(
      {spec.train * static_cast<double>(n), spec.val * static_cast<double>(n),
       spec.test * static_cast<double>(n)},
      n);
  const std::size_t n_train = global[0];
  const std::size_t n_test = global[2];

  std::vector<int> labels;
  std::vector<double> quotas;
  for (const auto& [label, idx] : groups) {
    labels.push_back(label);
    quotas.push_back(static_cast<double>(idx.size()) *
                     static_cast<double>(n_test) / static_cast<double>(n));
  }
  const auto test_counts = largest_remainder(quotas, n_test);

  // Train is allocated over what the test carve-out left behind; val takes
  // the per-class leftovers.
  std::size_t remaining_total = n - n_test;
  quotas.clear();
  std::vector<std::size_t> remaining(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    remaining[i] = groups.at(labels[i]).size() - test_counts[i];
    quotas.push_back(static_cast<double>(remaining[i]) *
                     static_cast<double>(n_train) /
                     static_cast<double>(remaining_total));
  }
  const auto train_counts = largest_remainder(quotas, n_train);

  std::map<int, SplitCounts> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    SplitCounts counts;
    counts.test = test_counts[i];
    counts.train = train_counts[i];
    counts.val = remaining[i] - train_counts[i];
    out[labels[i]] = counts;
  }
  return out;
}

SplitIndices stratified_split(const std::vector<int>& y,
                              const SplitSpec& spec) {
  spec.validate();
  if (y.empty()) throw Error("cannot split an empty label vector");

  SplitIndices out;
  if (!spec.stratified) {
    const auto global = largest_remainder(
        {spec.train * static_cast<double>(y.size()),
         spec.val * static_cast<double>(y.size()),
         spec.test * static_cast<double>(y.size())},
        y.size());
    std::vector<std::size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(spec.seed);
    rng.shuffle(idx);
    auto it = idx.begin();
    out.test.assign(it, it + global[2]);
    it += global[2];
    out.val.assign(it, it + global[1]);
    it += global[1];
    out.train.assign(it, idx.end());
  } else {
    const auto groups = group_by_class(y);
    for (const auto& [label, idx] : groups) {
      if (idx.size() < 3) {
        throw ClassTooSmallForSplit(
            "class " + std::to_string(label) + " has " +
            std::to_string(idx.size()) +
            " sample(s); a stratified three-way split needs >= 3");
      }
    }
    const auto counts = allocate_split_counts(y, spec);
    for (const auto& [label, idx] : groups) {
      std::vector<std::size_t> shuffled = idx;
      Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(label)));
      rng.shuffle(shuffled);
      const SplitCounts& c = counts.at(label);
      auto it = shuffled.begin();
      out.test.insert(out.test.end(), it, it + c.test);
      it += c.test;
      out.val.insert(out.val.end(), it, it + c.val);
      it += c.val;
      out.train.insert(out.train.end(), it, shuffled.end());
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(
    const std::vector<int>& y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("k-fold needs k >= 2");
  const auto groups = group_by_class(y);
  for (const auto& [label, idx] : groups) {
    if (idx.size() < k) {
      throw ClassSmallerThanK("class " + std::to_string(label) + " has " +
                              std::to_string(idx.size()) +
                              " sample(s), fewer than k=" + std::to_string(k));
    }
  }

  std::vector<std::vector<std::size_t>> folds(k);
  for (const auto& [label, idx] : groups) {
    std::vector<std::size_t> shuffled = idx;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
    rng.shuffle(shuffled);
    const std::size_t base = shuffled.size() / k;
    const std::size_t extra = shuffled.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t take = base + (f < extra ? 1 : 0);
      folds[f].insert(folds[f].end(), shuffled.begin() + pos,
                      shuffled.begin() + pos + take);
      pos += take;
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<std::vector<std::size_t>> confusion_matrix(
    const std::vector<int>& y_true, const std::vector<int>& y_pred,
    const std::vector<int>& labels) {
  if (y_true.size() != y_pred.size()) {
    throw LengthMismatch("y_true has " + std::to_string(y_true.size()) +
                         " labels, y_pred has " +
                         std::to_string(y_pred.size()));
  }
  std::map<int, std::size_t> label_row;
  for (std::size_t i = 0; i < labels.size(); ++i) label_row[labels[i]] = i;

  std::vector<std::vector<std::size_t>> m(
      labels.size(), std::vector<std::size_t>(labels.size(), 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto r = label_row.find(y_true[i]);
    const auto c = label_row.find(y_pred[i]);
    if (r == label_row.end() || c == label_row.end()) {
      throw Error("label outside the declared class set");
    }
    m[r->second][c->second] += 1;
  }
  return m;
}

std::vector<std::vector<double>> normalize_confusion(
    const std::vector<std::vector<std::size_t>>& raw) {
  std::vector<std::vector<double>> out(raw.size(),
                                       std::vector<double>(raw.size(), 0.0));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::size_t row_sum = 0;
    for (std::size_t v : raw[i]) row_sum += v;
    if (row_sum == 0) continue;  // empty true class stays all-zero
    for (std::size_t j = 0; j < raw[i].size(); ++j) {
      out[i][j] = static_cast<double>(raw[i][j]) / static_cast<double>(row_sum);
    }
  }
  return out;
}

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred,
                                           const std::vector<int>& labels) {
  const auto m = confusion_matrix(y_true, y_pred, labels);
  ClassificationReport report;
  report.n_samples = y_true.size();

  std::size_t trace = 0;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const std::size_t tp = m[c][c];
    std::size_t support = 0;
    std::size_t pred_count = 0;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      support += m[c][j];
      pred_count += m[j][c];
    }
    trace += tp;

    ClassMetrics cm;
    cm.label = labels[c];
    cm.support = support;
    cm.precision = pred_count == 0
                       ? 0.0
                       : static_cast<double>(tp) / static_cast<double>(pred_count);
    cm.recall = support == 0
                    ? 0.0
                    : static_cast<double>(tp) / static_cast<double>(support);
    cm.f1 = (cm.precision + cm.recall) == 0.0
                ? 0.0
                : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    report.per_class.push_back(cm);
  }

  double wp = 0.0, wr = 0.0, wf = 0.0;
  for (const ClassMetrics& cm : report.per_class) {
    const double w = static_cast<double>(cm.support);
    wp += w * cm.precision;
    wr += w * cm.recall;
    wf += w * cm.f1;
  }
  const double n = static_cast<double>(report.n_samples);
  report.weighted_precision = n == 0.0 ? 0.0 : wp / n;
  report.weighted_recall = n == 0.0 ? 0.0 : wr / n;
  report.weighted_f1 = n == 0.0 ? 0.0 : wf / n;
  report.accuracy = n == 0.0 ? 0.0 : static_cast<double>(trace) / n;
  return report;
}

double roc_auc_binary(const std::vector<int>& is_positive,
                      const std::vector<double>& scores) {
  if (is_positive.size() != scores.size()) {
    throw LengthMismatch("indicator and score lengths differ");
  }
  std::size_t n_pos = 0;
  for (int p : is_positive) n_pos += p != 0 ? 1 : 0;
  const std::size_t n_neg = is_positive.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateClass("AUC needs at least one positive and one negative");
  }

  const std::vector<double> ranks = average_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (is_positive[i] != 0) rank_sum += ranks[i];
  }
  const double p = static_cast<double>(n_pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(n_neg));
}

std::vector<double> roc_auc_per_class(const std::vector<int>& y_true,
                                      const std::vector<ClassScores>& scores,
                                      const std::vector<int>& labels) {
  if (y_true.size() != scores.size()) {
    throw LengthMismatch("labels and score rows differ in length");
  }
  std::vector<double> out;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    std::vector<int> pos(y_true.size());
    std::vector<double> col(y_true.size());
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      pos[i] = y_true[i] == labels[c] ? 1 : 0;
      col[i] = scores[i].probs[c];
    }
    out.push_back(roc_auc_binary(pos, col));
  }
  return out;
}

double roc_auc_macro(const std::vector<int>& y_true,
                     const std::vector<ClassScores>& scores,
                     const std::vector<int>& labels) {
  const auto per_class = roc_auc_per_class(y_true, scores, labels);
  double sum = 0.0;
  for (double a : per_class) sum += a;
  return sum / static_cast<double>(per_class.size());
}

double roc_auc_micro(const std::vector<int>& y_true,
                     const std::vector<ClassScores>& scores,
                     const std::vector<int>& labels) {
  if (y_true.size() != scores.size()) {
    throw LengthMismatch("labels and score rows differ in length");
  }
  std::vector<int> pos;
  std::vector<double> flat;
  pos.reserve(y_true.size() * labels.size());
  flat.reserve(y_true.size() * labels.size());
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    for (std::size_t c = 0; c < labels.size(); ++c) {
      pos.push_back(y_true[i] == labels[c] ? 1 : 0);
      flat.push_back(scores[i].probs[c]);
    }
  }
  return roc_auc_binary(pos, flat);
}

EvalReport build_eval_report(const std::vector<int>& y_true,
                             const std::vector<int>& y_pred,
                             const std::vector<ClassScores>& scores,
                             const std::vector<int>& labels,
                             const std::vector<std::string>& class_names) {
  EvalReport report;
  report.labels = labels;
  report.class_names = class_names;
  report.report = classification_report(y_true, y_pred, labels);
  report.confusion = confusion_matrix(y_true, y_pred, labels);
  report.confusion_normalized = normalize_confusion(report.confusion);
  report.auc_per_class = roc_auc_per_class(y_true, scores, labels);
  report.auc_macro = roc_auc_macro(y_true, scores, labels);
  report.auc_micro = roc_auc_micro(y_true, scores, labels);
  return report;
}

}  // namespace ynote
