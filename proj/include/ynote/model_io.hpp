#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ynote/corpus.hpp"
#include "ynote/features.hpp"
#include "ynote/logistic.hpp"
#include "ynote/metrics.hpp"

namespace ynote {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr int kEvalSchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

// Everything needed to classify: the fitted vocabulary with its config, the
// per-class linear model, labels and names, and reproducibility metadata.
struct ModelArtifact {
  Vocabulary vocab;
  OvrModel model;
  std::vector<int> labels;
  std::vector<std::string> names;
  std::uint64_t seed = 42;
  std::string rng_name;
};

// Canonical vocabulary serialization used for the content fingerprint.
// Hashes the idf bit patterns, not a decimal rendering, so the fingerprint
// is exact.
std::string vocabulary_dump(const Vocabulary& vocab);
std::string vocabulary_fingerprint(const Vocabulary& vocab);

// Stable-key-order JSON; identical inputs produce byte-identical text.
std::string artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const std::string& text);
void save_artifact(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact(const std::string& path);

std::string eval_report_to_json(const EvalReport& report);

// Human-readable table mirroring the classification-report columns
// (per-class rows plus the weighted-average row) and the normalized
// confusion matrix.
std::string format_eval_table(const EvalReport& report);

std::string read_file(const std::string& path);   // IoError on failure
void write_file(const std::string& path, const std::string& content);

}  // namespace ynote
