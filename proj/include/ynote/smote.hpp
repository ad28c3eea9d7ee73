#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ynote/error.hpp"
#include "ynote/features.hpp"

namespace ynote {

struct ClassTooSmall : Error {
  explicit ClassTooSmall(const std::string& msg) : Error(msg) {}
};

enum class SmoteTarget { MatchMajority };

struct SmoteConfig {
  SmoteTarget target_policy = SmoteTarget::MatchMajority;
  std::size_t k_neighbors_cap = 5;  // k used per class = min(cap, count - 1)
  std::uint64_t seed = 42;
};

struct SmoteClassReport {
  int label = 0;
  std::size_t count_before = 0;
  std::size_t count_after = 0;
  std::size_t k_used = 0;  // 0 when the class needed no oversampling
};

struct SmoteReport {
  std::vector<SmoteClassReport> classes;
  std::size_t synthetic_total = 0;
  // Input row indices of (anchor, neighbor) per synthetic row, in output
  // order; lets callers audit the convex-combination contract.
  std::vector<std::pair<std::size_t, std::size_t>> synthetic_parents;
};

// Oversamples every minority class until all counts equal the majority
// count. Each synthetic row is x + lambda * (nn - x) with lambda ~ U[0,1]
// and nn drawn uniformly from x's k nearest same-class neighbors under
// Euclidean distance. Original rows are preserved verbatim and precede all
// synthetic rows; synthetic rows are emitted class by class (ascending
// label), anchor index ascending, draw index ascending, so output is fully
// deterministic given the seed. A balanced input is returned unchanged.
// Throws ClassTooSmall when a class that needs oversampling has < 2 samples.
std::pair<FeatureMatrix, std::vector<int>> smote_resample(
    const FeatureMatrix& X, const std::vector<int>& y,
    const SmoteConfig& config, SmoteReport* report = nullptr);

}  // namespace ynote
