#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ynote/corpus.hpp"
#include "ynote/metrics.hpp"
#include "ynote/model_io.hpp"
#include "ynote/smote.hpp"

namespace ynote {

// Pipeline order is fixed: fit vocabulary on the training corpus only,
// transform, SMOTE, then train.
struct PipelineOptions {
  VectorizerConfig vectorizer;
  bool smote_enabled = true;
  SmoteConfig smote;
  TrainConfig train;
};

struct TrainOutcome {
  ModelArtifact artifact;
  TrainReport train_report;
  SmoteReport smote_report;
  std::vector<std::size_t> zero_feature_rows;  // all-OOV training documents
};

TrainOutcome train_pipeline(const Corpus& train_corpus,
                            const PipelineOptions& options);

EvalReport evaluate_artifact(const ModelArtifact& artifact,
                             const Corpus& corpus);

struct PredictOutcome {
  int label = 0;
  std::string name;
  std::vector<double> probs;
};

PredictOutcome predict_string(const ModelArtifact& artifact,
                              const std::string& ynote_string);

struct FoldResult {
  double accuracy = 0.0;
  Vocabulary vocab;  // fitted on the training side of the fold only
};

struct CvResult {
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation
};

// Cross-validation with the vocabulary, SMOTE and model refitted inside
// each fold; nothing is ever fitted on held-out fold data.
CvResult run_cv(const Corpus& corpus, std::size_t k,
                const PipelineOptions& options, std::uint64_t seed);

}  // namespace ynote
