#include "ynote/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "ynote/rng.hpp"

namespace ynote {

TrainOutcome train_pipeline(const Corpus& train_corpus,
                            const PipelineOptions& options) {
  const std::vector<TokenSequence> sequences = train_corpus.token_sequences();
  std::vector<int> y = train_corpus.labels();

  TrainOutcome outcome;
  Vocabulary vocab = fit_vocabulary(sequences, options.vectorizer);
  FeatureMatrix X =
      transform_corpus(sequences, vocab, &outcome.zero_feature_rows);

  if (options.smote_enabled) {
    auto resampled = smote_resample(X, y, options.smote, &outcome.smote_report);
    X = std::move(resampled.first);
    y = std::move(resampled.second);
  }

  OvrModel model = train_ovr(X, y, options.train, &outcome.train_report);
  model.vocab_fingerprint = vocabulary_fingerprint(vocab);

  outcome.artifact.labels = model.classes;
  for (int label : model.classes) {
    outcome.artifact.names.push_back(class_name(label));
  }
  outcome.artifact.vocab = std::move(vocab);
  outcome.artifact.model = std::move(model);
  outcome.artifact.seed = options.train.seed;
  outcome.artifact.rng_name = kRngName;
  return outcome;
}

EvalReport evaluate_artifact(const ModelArtifact& artifact,
                             const Corpus& corpus) {
  const std::vector<TokenSequence> sequences = corpus.token_sequences();
  std::vector<std::size_t> zero_rows;
  const FeatureMatrix X =
      transform_corpus(sequences, artifact.vocab, &zero_rows);

  const std::vector<int> y_true = corpus.labels();
  const std::vector<ClassScores> scores =
      predict_proba_batch(artifact.model, X);
  std::vector<int> y_pred;
  y_pred.reserve(scores.size());
  for (const ClassScores& s : scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.probs.size(); ++i) {
      if (s.probs[i] > s.probs[best]) best = i;
    }
    y_pred.push_back(artifact.model.classes[best]);
  }

  EvalReport report = build_eval_report(y_true, y_pred, scores,
                                        artifact.labels, artifact.names);
  report.zero_feature_rows = zero_rows.size();
  return report;
}

PredictOutcome predict_string(const ModelArtifact& artifact,
                              const std::string& ynote_string) {
  const TokenSequence seq = tokenize(ynote_string, TokenizePolicy::Strict);
  for (const std::string& token : seq.tokens) parse_note(token);

  const SparseRow row = transform(seq, artifact.vocab);
  const ClassScores scores = predict_proba(artifact.model, row);

  PredictOutcome outcome;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.probs.size(); ++i) {
    if (scores.probs[i] > scores.probs[best]) best = i;
  }
  outcome.label = artifact.labels[best];
  outcome.name = artifact.names[best];
  outcome.probs = scores.probs;
  return outcome;
}

CvResult run_cv(const Corpus& corpus, std::size_t k,
                const PipelineOptions& options, std::uint64_t seed) {
  const std::vector<int> y = corpus.labels();
  const auto folds = stratified_kfold(y, k, seed);

  CvResult result;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<bool> held_out(corpus.size(), false);
    for (std::size_t idx : folds[f]) held_out[idx] = true;

    Corpus train_part, test_part;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      (held_out[i] ? test_part : train_part).songs.push_back(corpus.songs[i]);
    }

    // The vocabulary, SMOTE and model are refit per fold; held-out songs
    // never touch any fitting step.
    const TrainOutcome outcome = train_pipeline(train_part, options);
    const std::vector<TokenSequence> test_seqs = test_part.token_sequences();
    const FeatureMatrix X = transform_corpus(test_seqs, outcome.artifact.vocab);
    const std::vector<int> pred = predict_batch(outcome.artifact.model, X);
    const std::vector<int> truth = test_part.labels();

    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == truth[i]) ++hits;
    }
    FoldResult fold;
    fold.accuracy = pred.empty()
                        ? 0.0
                        : static_cast<double>(hits) / static_cast<double>(pred.size());
    fold.vocab = outcome.artifact.vocab;
    result.folds.push_back(std::move(fold));
  }

  double mean = 0.0;
  for (const FoldResult& fold : result.folds) mean += fold.accuracy;
  mean /= static_cast<double>(result.folds.size());
  double var = 0.0;
  for (const FoldResult& fold : result.folds) {
    var += (fold.accuracy - mean) * (fold.accuracy - mean);
  }
  var /= static_cast<double>(result.folds.size());  // population variance
  result.mean_accuracy = mean;
  result.std_accuracy = std::sqrt(var);
  return result;
}

}  // namespace ynote
