#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "ynote/metrics.hpp"
#include "ynote/rng.hpp"

using namespace ynote;

namespace {

std::vector<int> labels_of(std::initializer_list<std::pair<int, std::size_t>> spec) {
  std::vector<int> y;
  for (const auto& [label, count] : spec) y.insert(y.end(), count, label);
  return y;
}

}  // namespace

TEST_CASE("split counts follow the frozen allocation example") {
  // 100 samples, classes 50/30/20, ratios .65/.15/.20.
  const std::vector<int> y = labels_of({{0, 50}, {1, 30}, {2, 20}});
  const auto counts = allocate_split_counts(y, SplitSpec{});

  CHECK(counts.at(0).train == 33);
  CHECK(counts.at(1).train == 19);
  CHECK(counts.at(2).train == 13);
  CHECK(counts.at(0).test == 10);
  CHECK(counts.at(1).test == 6);
  CHECK(counts.at(2).test == 4);
  CHECK(counts.at(0).val == 7);
  CHECK(counts.at(1).val == 5);
  CHECK(counts.at(2).val == 3);
}

TEST_CASE("single-class corpus of 20 splits 13/3/4") {
  const std::vector<int> y(20, 0);
  const auto counts = allocate_split_counts(y, SplitSpec{});
  CHECK(counts.at(0).train == 13);
  CHECK(counts.at(0).val == 3);
  CHECK(counts.at(0).test == 4);
}

TEST_CASE("stratified_split is disjoint, exhaustive and deterministic") {
  const std::vector<int> y = labels_of({{0, 50}, {1, 30}, {2, 20}});
  const SplitIndices a = stratified_split(y, SplitSpec{});
  const SplitIndices b = stratified_split(y, SplitSpec{});
  CHECK(a.train == b.train);
  CHECK(a.val == b.val);
  CHECK(a.test == b.test);

  std::set<std::size_t> all;
  for (const auto* part : {&a.train, &a.val, &a.test}) {
    for (std::size_t i : *part) {
      CHECK(all.insert(i).second);  // no duplicates across splits
    }
  }
  CHECK(all.size() == y.size());

  SplitSpec other;
  other.seed = 7;
  const SplitIndices c = stratified_split(y, other);
  CHECK(a.train != c.train);
}

TEST_CASE("split proportions stay within one sample per class per split") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> y;
    const std::size_t n_classes = 2 + rng.uniform_below(3);
    for (std::size_t c = 0; c < n_classes; ++c) {
      y.insert(y.end(), 3 + rng.uniform_below(40), static_cast<int>(c));
    }
    const SplitSpec spec;
    const auto counts = allocate_split_counts(y, spec);
    std::map<int, std::size_t> class_sizes;
    for (int label : y) ++class_sizes[label];
    for (const auto& [label, c] : counts) {
      const double m = static_cast<double>(class_sizes[label]);
      CHECK(std::abs(static_cast<double>(c.train) - spec.train * m) <= 1.0);
      CHECK(std::abs(static_cast<double>(c.val) - spec.val * m) <= 1.0);
      CHECK(std::abs(static_cast<double>(c.test) - spec.test * m) <= 1.0);
    }
  }
}

TEST_CASE("classes below three samples cannot be split") {
  CHECK_THROWS_AS(stratified_split(labels_of({{0, 10}, {1, 2}}), SplitSpec{}),
                  ClassTooSmallForSplit);
}

TEST_CASE("invalid ratios are rejected") {
  SplitSpec spec;
  spec.test = 0.10;  // sums to 0.9
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.test = -0.1;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("kfold on one class of 10 with k=5 gives folds of two") {
  const auto folds = stratified_kfold(std::vector<int>(10, 0), 5, 42);
  REQUIRE(folds.size() == 5);
  for (const auto& fold : folds) CHECK(fold.size() == 2);
}

TEST_CASE("kfold with classes 10/5 and k=5 gives folds of three") {
  const std::vector<int> y = labels_of({{0, 10}, {1, 5}});
  const auto folds = stratified_kfold(y, 5, 42);
  std::set<std::size_t> all;
  for (const auto& fold : folds) {
    CHECK(fold.size() == 3);
    std::size_t minority = 0;
    for (std::size_t i : fold) {
      CHECK(all.insert(i).second);
      if (y[i] == 1) ++minority;
    }
    CHECK(minority == 1);
  }
  CHECK(all.size() == y.size());
}

TEST_CASE("kfold per-class imbalance is at most one") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> y;
    const std::size_t k = 2 + rng.uniform_below(4);
    const std::size_t n_classes = 2 + rng.uniform_below(3);
    for (std::size_t c = 0; c < n_classes; ++c) {
      y.insert(y.end(), k + rng.uniform_below(30), static_cast<int>(c));
    }
    const auto folds = stratified_kfold(y, k, 42 + trial);
    for (std::size_t c = 0; c < n_classes; ++c) {
      std::vector<std::size_t> per_fold;
      for (const auto& fold : folds) {
        std::size_t count = 0;
        for (std::size_t i : fold) {
          if (y[i] == static_cast<int>(c)) ++count;
        }
        per_fold.push_back(count);
      }
      const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
      CHECK(*hi - *lo <= 1);
    }
  }
}

TEST_CASE("kfold rejects classes smaller than k") {
  CHECK_THROWS_AS(stratified_kfold(labels_of({{0, 10}, {1, 3}}), 5, 42),
                  ClassSmallerThanK);
}

TEST_CASE("confusion matrix counts and normalizes") {
  const auto raw = confusion_matrix({0, 0, 1}, {0, 1, 1}, {0, 1});
  CHECK(raw == std::vector<std::vector<std::size_t>>{{1, 1}, {0, 1}});
  const auto norm = normalize_confusion(raw);
  CHECK(norm[0][0] == doctest::Approx(0.5));
  CHECK(norm[0][1] == doctest::Approx(0.5));
  CHECK(norm[1][0] == doctest::Approx(0.0));
  CHECK(norm[1][1] == doctest::Approx(1.0));
}

TEST_CASE("perfect predictions normalize to the identity") {
  const std::vector<int> y = {0, 1, 2, 1, 0, 2};
  const auto norm = normalize_confusion(confusion_matrix(y, y, {0, 1, 2}));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(norm[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("empty true-class rows stay all-zero") {
  const auto raw = confusion_matrix({0, 0}, {0, 1}, {0, 1, 2});
  const auto norm = normalize_confusion(raw);
  CHECK(norm[2] == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("confusion matrix validates input lengths") {
  CHECK_THROWS_AS(confusion_matrix({0, 1}, {0}, {0, 1}), LengthMismatch);
}

TEST_CASE("classification report matches the hand computation") {
  const auto report = classification_report({0, 0, 1, 1}, {0, 1, 1, 1}, {0, 1});
  CHECK(report.per_class[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(report.per_class[1].recall == doctest::Approx(1.0));
  CHECK(report.per_class[1].f1 == doctest::Approx(0.8));
  CHECK(report.per_class[0].support == 2);
  CHECK(report.accuracy == doctest::Approx(0.75));
}

TEST_CASE("perfect predictions give all ones") {
  const std::vector<int> y = {0, 1, 2, 0, 1, 2};
  const auto report = classification_report(y, y, {0, 1, 2});
  for (const ClassMetrics& cm : report.per_class) {
    CHECK(cm.precision == doctest::Approx(1.0));
    CHECK(cm.recall == doctest::Approx(1.0));
    CHECK(cm.f1 == doctest::Approx(1.0));
  }
  CHECK(report.weighted_f1 == doctest::Approx(1.0));
}

TEST_CASE("weighted recall equals accuracy and accuracy equals the trace") {
  Rng rng(19);
  std::vector<int> y_true, y_pred;
  for (int i = 0; i < 60; ++i) {
    y_true.push_back(static_cast<int>(rng.uniform_below(3)));
    y_pred.push_back(static_cast<int>(rng.uniform_below(3)));
  }
  const auto report = classification_report(y_true, y_pred, {0, 1, 2});
  CHECK(report.weighted_recall == doctest::Approx(report.accuracy).epsilon(1e-12));

  const auto raw = confusion_matrix(y_true, y_pred, {0, 1, 2});
  std::size_t trace = raw[0][0] + raw[1][1] + raw[2][2];
  CHECK(report.accuracy ==
        doctest::Approx(static_cast<double>(trace) / 60.0).epsilon(1e-12));
}

TEST_CASE("AUC of perfectly separating scores is 1") {
  CHECK(roc_auc_binary({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9}) == 1.0);
  CHECK(roc_auc_binary({1, 1, 0, 0}, {0.1, 0.2, 0.8, 0.9}) == 0.0);
}

TEST_CASE("identical scores give AUC one half") {
  CHECK(roc_auc_binary({0, 1, 0, 1, 1}, {0.4, 0.4, 0.4, 0.4, 0.4}) == 0.5);
}

TEST_CASE("degenerate classes are rejected") {
  CHECK_THROWS_AS(roc_auc_binary({1, 1}, {0.1, 0.2}), DegenerateClass);
  CHECK_THROWS_AS(roc_auc_binary({0, 0}, {0.1, 0.2}), DegenerateClass);
}

TEST_CASE("rank AUC equals pair counting exactly, ties included") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + rng.uniform_below(46);
    std::vector<int> pos(n);
    std::vector<double> scores(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = rng.uniform01() < 0.5 ? 1 : 0;
      (pos[i] ? has_pos : has_neg) = true;
      // Coarse grid forces ties.
      scores[i] = static_cast<double>(rng.uniform_below(8)) / 8.0;
    }
    if (!has_pos || !has_neg) continue;
    CHECK(roc_auc_binary(pos, scores) == oracle::pair_counting_auc(pos, scores));
  }
}

TEST_CASE("reversing all rankings maps AUC to its complement") {
  Rng rng(27);
  std::vector<int> pos(30);
  std::vector<double> scores(30), reversed(30);
  for (std::size_t i = 0; i < 30; ++i) {
    pos[i] = i < 12 ? 1 : 0;
    scores[i] = rng.uniform01();  // continuous, no ties
    reversed[i] = -scores[i];
  }
  CHECK(roc_auc_binary(pos, reversed) ==
        doctest::Approx(1.0 - roc_auc_binary(pos, scores)).epsilon(1e-12));
}

TEST_CASE("micro and macro averages on a small hand case") {
  const std::vector<int> y = {0, 1, 2, 1};
  std::vector<ClassScores> scores = {{{0.8, 0.1, 0.1}},
                                     {{0.2, 0.6, 0.2}},
                                     {{0.1, 0.2, 0.7}},
                                     {{0.3, 0.5, 0.2}}};
  const auto per_class = roc_auc_per_class(y, scores, {0, 1, 2});
  for (double a : per_class) CHECK(a == 1.0);
  CHECK(roc_auc_macro(y, scores, {0, 1, 2}) == 1.0);

  const double micro = roc_auc_micro(y, scores, {0, 1, 2});
  CHECK(micro >= 0.0);
  CHECK(micro <= 1.0);

  // Micro flattens to 12 indicator/score pairs; check it against the oracle.
  std::vector<int> flat_pos;
  std::vector<double> flat_scores;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      flat_pos.push_back(y[i] == static_cast<int>(c) ? 1 : 0);
      flat_scores.push_back(scores[i].probs[c]);
    }
  }
  CHECK(micro == oracle::pair_counting_auc(flat_pos, flat_scores));
}

TEST_CASE("build_eval_report assembles every section") {
  const std::vector<int> y_true = {0, 0, 1, 1, 2, 2};
  const std::vector<int> y_pred = {0, 0, 1, 0, 2, 2};
  std::vector<ClassScores> scores;
  for (int label : y_true) {
    ClassScores s;
    s.probs = {0.2, 0.2, 0.2};
    s.probs[static_cast<std::size_t>(label)] = 0.6;
    scores.push_back(s);
  }
  const EvalReport report = build_eval_report(y_true, y_pred, scores,
                                              {0, 1, 2},
                                              {"Native", "Algorithm", "LLM"});
  CHECK(report.report.accuracy == doctest::Approx(5.0 / 6.0));
  CHECK(report.confusion[1][0] == 1);
  CHECK(report.auc_per_class.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    double row_sum = 0.0;
    for (double v : report.confusion_normalized[i]) row_sum += v;
    CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}
