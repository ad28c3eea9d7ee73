#include "ynote/smote.hpp"

#include <algorithm>
#include <map>

#include "ynote/rng.hpp"

namespace ynote {

namespace {

// x_a + lambda * (x_b - x_a), clamped coordinate-wise to the parents'
// bounding box so the convex-combination invariant survives rounding.
SparseRow interpolate(const SparseRow& a, const SparseRow& b, double lambda) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  auto emit = [&out, lambda](std::uint32_t col, double va, double vb) {
    double v = va + lambda * (vb - va);
    v = std::clamp(v, std::min(va, vb), std::max(va, vb));
    if (v != 0.0) out.emplace_back(col, v);
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      emit(a[i].first, a[i].second, 0.0);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      emit(b[j].first, 0.0, b[j].second);
      ++j;
    } else {
      emit(a[i].first, a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::pair<FeatureMatrix, std::vector<int>> smote_resample(
    const FeatureMatrix& X, const std::vector<int>& y,
    const SmoteConfig& config, SmoteReport* report) {
  if (X.rows.size() != y.size()) {
    throw Error("SMOTE: X has " + std::to_string(X.rows.size()) +
                " rows but y has " + std::to_string(y.size()) + " labels");
  }
  if (config.k_neighbors_cap < 1) {
    throw Error("SMOTE: k_neighbors_cap must be >= 1");
  }

  std::map<int, std::vector<std::size_t>> class_rows;  // ascending labels
  for (std::size_t i = 0; i < y.size(); ++i) class_rows[y[i]].push_back(i);

  std::size_t majority = 0;
  for (const auto& [label, rows] : class_rows) {
    majority = std::max(majority, rows.size());
  }

  FeatureMatrix out_x;
  out_x.n_cols = X.n_cols;
  out_x.rows = X.rows;  // originals verbatim, before all synthetic rows
  std::vector<int> out_y = y;

  SmoteReport local_report;
  Rng rng(config.seed);

  for (const auto& [label, rows] : class_rows) {
    SmoteClassReport cls;
    cls.label = label;
    cls.count_before = rows.size();
    cls.count_after = majority;

    const std::size_t need = majority - rows.size();
    if (need == 0) {
      local_report.classes.push_back(cls);
      continue;
    }
    if (rows.size() < 2) {
      throw ClassTooSmall("class " + std::to_string(label) + " has " +
                          std::to_string(rows.size()) +
                          " sample(s); SMOTE needs at least 2");
    }

    const std::size_t k =
        std::min(config.k_neighbors_cap, rows.size() - 1);
    cls.k_used = k;

    // k nearest same-class neighbors per anchor, ties by original row index.
    std::vector<double> sq_norms(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sq_norms[i] = sparse_sq_norm(X.rows[rows[i]]);
    }
    std::vector<std::vector<std::size_t>> neighbors(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::vector<std::pair<double, std::size_t>> dists;
      dists.reserve(rows.size() - 1);
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j == i) continue;
        const double d2 = sq_norms[i] + sq_norms[j] -
                          2.0 * sparse_dot(X.rows[rows[i]], X.rows[rows[j]]);
        dists.emplace_back(d2, j);
      }
      std::sort(dists.begin(), dists.end());
      neighbors[i].reserve(k);
      for (std::size_t m = 0; m < k; ++m) {
        neighbors[i].push_back(dists[m].second);
      }
    }

    // need = base draws per anchor plus one extra for the first `need % n`
    // anchors; generation runs anchor index ascending, draw index ascending.
    const std::size_t base = need / rows.size();
    const std::size_t extra = need % rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t draws = base + (i < extra ? 1 : 0);
      for (std::size_t d = 0; d < draws; ++d) {
        const std::size_t nn =
            neighbors[i][rng.uniform_below(neighbors[i].size())];
        const double lambda = rng.uniform01();
        out_x.rows.push_back(
            interpolate(X.rows[rows[i]], X.rows[rows[nn]], lambda));
        out_y.push_back(label);
        local_report.synthetic_parents.emplace_back(rows[i], rows[nn]);
      }
    }
    local_report.synthetic_total += need;
    local_report.classes.push_back(cls);
  }

  if (report) *report = std::move(local_report);
  return {std::move(out_x), std::move(out_y)};
}

}  // namespace ynote
