// ynotecls: classify YNote-encoded music as human-composed (Native),
// rule-algorithm-generated (Algorithm), or language-model-generated (LLM).
// Subcommands cover the whole pipeline: generate, split, train, predict,
// evaluate, explain, cv.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ynote/generate.hpp"
#include "ynote/hash.hpp"
#include "ynote/pipeline.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace ynote;

// Exit codes, also documented in the README: 64 usage, 65 malformed data,
// 66 I/O failure, 69 degenerate dataset, 70 internal.
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitIo = 66;
constexpr int kExitDegenerate = 69;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PipelineFlags {
  int ngram_min = 1;
  int ngram_max = 3;
  std::size_t max_features = 8000;
  std::size_t min_df = 3;
  double max_df = 0.95;
  bool no_smote = false;
  std::string class_weight = "balanced";
  double c = 1.0;
  int max_iter = 2000;
  double tol = 1e-6;
  std::uint64_t seed = 42;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--ngram-min", f.ngram_min, "Smallest n-gram arity")
      ->capture_default_str();
  cmd->add_option("--ngram-max", f.ngram_max, "Largest n-gram arity")
      ->capture_default_str();
  cmd->add_option("--max-features", f.max_features,
                  "Keep at most this many most-frequent n-grams")
      ->capture_default_str();
  cmd->add_option("--min-df", f.min_df,
                  "Drop n-grams appearing in fewer songs than this")
      ->capture_default_str();
  cmd->add_option("--max-df", f.max_df,
                  "Drop n-grams appearing in more than this fraction of songs")
      ->capture_default_str();
  cmd->add_flag("--no-smote", f.no_smote, "Skip SMOTE oversampling");
  cmd->add_option("--class-weight", f.class_weight, "Sample weighting scheme")
      ->check(CLI::IsMember({"balanced", "uniform"}))
      ->capture_default_str();
  cmd->add_option("--c", f.c, "Inverse regularization strength C")
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Optimizer iteration cap")
      ->capture_default_str();
  cmd->add_option("--tol", f.tol, "Gradient-norm convergence threshold")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
}

PipelineOptions to_options(const PipelineFlags& f) {
  PipelineOptions opts;
  opts.vectorizer.ngram_min = f.ngram_min;
  opts.vectorizer.ngram_max = f.ngram_max;
  opts.vectorizer.max_features = f.max_features;
  opts.vectorizer.min_df = f.min_df;
  opts.vectorizer.max_df = f.max_df;
  opts.smote_enabled = !f.no_smote;
  opts.smote.seed = f.seed;
  opts.train.regularization_strength = f.c;
  opts.train.max_iter = f.max_iter;
  opts.train.tol = f.tol;
  opts.train.class_weight = f.class_weight == "balanced"
                                ? ClassWeight::Balanced
                                : ClassWeight::Uniform;
  opts.train.seed = f.seed;
  try {
    opts.vectorizer.validate();
    opts.train.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return opts;
}

ordered_json pipeline_flags_json(const PipelineFlags& f) {
  return {{"ngram_min", f.ngram_min},
          {"ngram_max", f.ngram_max},
          {"max_features", f.max_features},
          {"min_df", f.min_df},
          {"max_df", f.max_df},
          {"smote", !f.no_smote},
          {"class_weight", f.class_weight},
          {"c", f.c},
          {"max_iter", f.max_iter},
          {"tol", f.tol},
          {"seed", f.seed}};
}

class RunClock {
 public:
  RunClock() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// One manifest per run: command, config snapshot, seeds, content hashes of
// inputs and outputs, timings, artifact schema versions.
void write_manifest(const std::string& path, const std::string& command,
                    const ordered_json& config, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    const RunClock& clock) {
  ordered_json j;
  j["schema"] = "ynotecls.manifest";
  j["schema_version"] = kManifestSchemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  ordered_json in_hashes = ordered_json::object();
  for (const std::string& p : inputs) {
    in_hashes[p] = "fnv1a64:" + fnv1a64_hex(read_file(p));
  }
  j["inputs"] = std::move(in_hashes);
  ordered_json out_hashes = ordered_json::object();
  for (const std::string& p : outputs) {
    out_hashes[p] = "fnv1a64:" + fnv1a64_hex(read_file(p));
  }
  j["outputs"] = std::move(out_hashes);
  j["artifact_schema_versions"] = {{"model", kModelSchemaVersion},
                                   {"eval", kEvalSchemaVersion}};
  j["timings"] = {{"total_ms", clock.elapsed_ms()}};
  write_file(path, j.dump(2) + "\n");
}

Corpus load_corpus_logged(const std::string& path) {
  std::vector<LineError> errors;
  Corpus corpus = load_corpus(path, &errors);
  for (const LineError& e : errors) {
    std::cerr << path << ": skipped " << e.message << '\n';
  }
  if (corpus.songs.empty()) {
    throw MalformedRecord(path + ": no valid records");
  }
  return corpus;
}

std::string manifest_path_for(const std::string& explicit_path,
                              const std::string& out_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (!out_path.empty()) return out_path + ".manifest.json";
  return {};
}

// ---- generate ----

struct GenerateArgs {
  std::string out;
  std::string config_path;
  std::string manifest;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::size_t count_native = 0, count_algorithm = 0, count_llm = 0;
};

void run_generate(const GenerateArgs& args) {
  RunClock clock;
  GeneratorConfig config = args.config_path.empty()
                               ? default_generator_config()
                               : load_generator_config(args.config_path);
  if (args.seed_given) config.seed = args.seed;
  if (args.count_native > 0) config.native.count = args.count_native;
  if (args.count_algorithm > 0) config.algorithm.count = args.count_algorithm;
  if (args.count_llm > 0) config.llm.count = args.count_llm;

  const Corpus corpus = generate_corpus(config);
  save_corpus(corpus, args.out);

  const auto counts = corpus.class_counts();
  std::cout << "wrote " << corpus.size() << " songs to " << args.out << " ("
            << class_name(0) << ": " << counts[0] << ", " << class_name(1)
            << ": " << counts[1] << ", " << class_name(2) << ": " << counts[2]
            << ")\n";

  const std::string manifest = manifest_path_for(args.manifest, args.out);
  ordered_json cfg = {{"config_file", args.config_path},
                      {"counts", {counts[0], counts[1], counts[2]}}};
  std::vector<std::string> inputs;
  if (!args.config_path.empty()) inputs.push_back(args.config_path);
  write_manifest(manifest, "generate", cfg, config.seed, inputs, {args.out},
                 clock);
}

// ---- split ----

struct SplitArgs {
  std::string corpus;
  std::string out_prefix;
  std::string manifest;
  double train = 0.65, val = 0.15, test = 0.20;
  std::uint64_t seed = 42;
  bool no_stratify = false;
};

void run_split(const SplitArgs& args) {
  RunClock clock;
  SplitSpec spec;
  spec.train = args.train;
  spec.val = args.val;
  spec.test = args.test;
  spec.seed = args.seed;
  spec.stratified = !args.no_stratify;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const Corpus corpus = load_corpus_logged(args.corpus);
  const SplitIndices idx = stratified_split(corpus.labels(), spec);

  const auto subset = [&corpus](const std::vector<std::size_t>& rows) {
    Corpus part;
    for (std::size_t i : rows) part.songs.push_back(corpus.songs[i]);
    return part;
  };
  const std::string train_path = args.out_prefix + ".train.tsv";
  const std::string val_path = args.out_prefix + ".val.tsv";
  const std::string test_path = args.out_prefix + ".test.tsv";
  save_corpus(subset(idx.train), train_path);
  save_corpus(subset(idx.val), val_path);
  save_corpus(subset(idx.test), test_path);

  std::cout << "train: " << idx.train.size() << " -> " << train_path << '\n'
            << "val:   " << idx.val.size() << " -> " << val_path << '\n'
            << "test:  " << idx.test.size() << " -> " << test_path << '\n';

  const std::string manifest =
      manifest_path_for(args.manifest, args.out_prefix + ".split");
  ordered_json cfg = {{"train", spec.train},
                      {"val", spec.val},
                      {"test", spec.test},
                      {"stratified", spec.stratified}};
  write_manifest(manifest, "split", cfg, spec.seed, {args.corpus},
                 {train_path, val_path, test_path}, clock);
}

// ---- train ----

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::string manifest;
  PipelineFlags flags;
};

void run_train(const TrainArgs& args) {
  RunClock clock;
  const PipelineOptions options = to_options(args.flags);
  const Corpus corpus = load_corpus_logged(args.corpus);

  const TrainOutcome outcome = train_pipeline(corpus, options);
  save_artifact(outcome.artifact, args.out);

  std::cout << "vocabulary: " << outcome.artifact.vocab.size()
            << " n-grams over " << corpus.size() << " songs\n";
  if (!outcome.zero_feature_rows.empty()) {
    std::cout << "documents with no in-vocabulary n-grams: "
              << outcome.zero_feature_rows.size() << '\n';
  }
  if (options.smote_enabled) {
    std::cout << "post-SMOTE class counts:";
    for (const SmoteClassReport& cls : outcome.smote_report.classes) {
      std::cout << ' ' << class_name(cls.label) << '=' << cls.count_after;
      if (cls.k_used > 0) std::cout << " (k=" << cls.k_used << ")";
    }
    std::cout << " (synthetic: " << outcome.smote_report.synthetic_total
              << ")\n";
  }
  for (const ClassFitReport& cls : outcome.train_report.classes) {
    std::printf("class %s: %s after %d iterations, loss %.6g, |grad| %.3g\n",
                class_name(cls.label).c_str(),
                cls.converged ? "converged" : "not converged", cls.iterations,
                cls.final_loss, cls.grad_norm);
  }
  std::cout << "model written to " << args.out << '\n';

  const std::string manifest = manifest_path_for(args.manifest, args.out);
  write_manifest(manifest, "train", pipeline_flags_json(args.flags),
                 args.flags.seed, {args.corpus}, {args.out}, clock);
}

// ---- predict ----

struct PredictArgs {
  std::string model;
  std::string ynote_string;
  std::string manifest;
};

void run_predict(const PredictArgs& args) {
  RunClock clock;
  const ModelArtifact artifact = load_artifact(args.model);

  std::string input = args.ynote_string;
  if (input.empty()) {
    std::string all(std::istreambuf_iterator<char>(std::cin), {});
    for (char c : all) {
      if (!std::isspace(static_cast<unsigned char>(c))) input += c;
    }
  }

  const PredictOutcome outcome = predict_string(artifact, input);
  std::cout << outcome.name << '\n';
  for (std::size_t i = 0; i < artifact.names.size(); ++i) {
    std::printf("%s %.6f\n", artifact.names[i].c_str(), outcome.probs[i]);
  }

  if (!args.manifest.empty()) {
    write_manifest(args.manifest, "predict",
                   {{"input_length", input.size()}}, artifact.seed,
                   {args.model}, {}, clock);
  }
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string model;
  std::string corpus;
  std::string out;
  std::string manifest;
};

void run_evaluate(const EvaluateArgs& args) {
  RunClock clock;
  const ModelArtifact artifact = load_artifact(args.model);
  const Corpus corpus = load_corpus_logged(args.corpus);

  const EvalReport report = evaluate_artifact(artifact, corpus);
  std::cout << format_eval_table(report);
  std::vector<std::string> outputs;
  if (!args.out.empty()) {
    write_file(args.out, eval_report_to_json(report));
    outputs.push_back(args.out);
  }

  const std::string manifest = manifest_path_for(args.manifest, args.out);
  if (!manifest.empty()) {
    write_manifest(manifest, "evaluate", ordered_json::object(),
                   artifact.seed, {args.model, args.corpus}, outputs, clock);
  }
}

// ---- explain ----

struct ExplainArgs {
  std::string model;
  std::string out;
  std::string manifest;
  std::size_t top_k = 10;
};

void run_explain(const ExplainArgs& args) {
  RunClock clock;
  const ModelArtifact artifact = load_artifact(args.model);

  ordered_json classes = ordered_json::array();
  for (std::size_t i = 0; i < artifact.labels.size(); ++i) {
    const int label = artifact.labels[i];
    const auto positive = top_features(artifact.model, artifact.vocab, label,
                                       args.top_k, CoefSign::Positive);
    const auto negative = top_features(artifact.model, artifact.vocab, label,
                                       args.top_k, CoefSign::Negative);

    std::printf("== %s (label %d) ==\n", artifact.names[i].c_str(), label);
    std::printf("%4s  %-16s %12s    %-16s %12s\n", "rank", "positive n-gram",
                "coefficient", "negative n-gram", "coefficient");
    const std::size_t rows = std::max(positive.size(), negative.size());
    for (std::size_t r = 0; r < rows; ++r) {
      std::string pos_text = r < positive.size() ? positive[r].first : "";
      std::string neg_text = r < negative.size() ? negative[r].first : "";
      std::string pos_coef =
          r < positive.size() ? std::to_string(positive[r].second) : "";
      std::string neg_coef =
          r < negative.size() ? std::to_string(negative[r].second) : "";
      std::printf("%4zu  %-16s %12.10s    %-16s %12.10s\n", r + 1,
                  pos_text.c_str(), pos_coef.c_str(), neg_text.c_str(),
                  neg_coef.c_str());
    }
    std::printf("\n");

    ordered_json pos_pairs = ordered_json::array();
    for (const auto& [text, coef] : positive) {
      pos_pairs.push_back({text, coef});
    }
    ordered_json neg_pairs = ordered_json::array();
    for (const auto& [text, coef] : negative) {
      neg_pairs.push_back({text, coef});
    }
    classes.push_back({{"label", label},
                       {"name", artifact.names[i]},
                       {"positive", std::move(pos_pairs)},
                       {"negative", std::move(neg_pairs)}});
  }

  std::vector<std::string> outputs;
  if (!args.out.empty()) {
    ordered_json j;
    j["schema"] = "ynotecls.explain";
    j["schema_version"] = 1;
    j["top_k"] = args.top_k;
    j["classes"] = std::move(classes);
    write_file(args.out, j.dump(2) + "\n");
    outputs.push_back(args.out);
  }
  const std::string manifest = manifest_path_for(args.manifest, args.out);
  if (!manifest.empty()) {
    write_manifest(manifest, "explain", {{"top_k", args.top_k}},
                   artifact.seed, {args.model}, outputs, clock);
  }
}

// ---- cv ----

struct CvArgs {
  std::string corpus;
  std::string manifest;
  std::size_t folds = 5;
  PipelineFlags flags;
};

void run_cv_cmd(const CvArgs& args) {
  RunClock clock;
  if (args.folds < 2) throw UsageError("--folds must be >= 2");
  const PipelineOptions options = to_options(args.flags);
  const Corpus corpus = load_corpus_logged(args.corpus);

  const CvResult result = run_cv(corpus, args.folds, options, args.flags.seed);
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    std::printf("fold %zu accuracy: %.4f (vocabulary: %zu n-grams)\n", f + 1,
                result.folds[f].accuracy, result.folds[f].vocab.size());
  }
  std::printf("%zu-fold CV accuracy: %.4f +- %.4f\n", args.folds,
              result.mean_accuracy, result.std_accuracy);

  if (!args.manifest.empty()) {
    ordered_json cfg = pipeline_flags_json(args.flags);
    cfg["folds"] = args.folds;
    write_manifest(args.manifest, "cv", cfg, args.flags.seed, {args.corpus},
                   {}, clock);
  }
}

int map_error_exit(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const MalformedToken*>(&e) ||
      dynamic_cast<const LengthNotMultipleOf4*>(&e) ||
      dynamic_cast<const MalformedRecord*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e) ||
      dynamic_cast<const UnknownClass*>(&e)) {
    return kExitData;
  }
  if (dynamic_cast<const EmptyInput*>(&e) ||
      dynamic_cast<const EmptyVocabulary*>(&e) ||
      dynamic_cast<const ClassTooSmall*>(&e) ||
      dynamic_cast<const SingleClassInput*>(&e) ||
      dynamic_cast<const ClassTooSmallForSplit*>(&e) ||
      dynamic_cast<const ClassSmallerThanK*>(&e) ||
      dynamic_cast<const DegenerateClass*>(&e) ||
      dynamic_cast<const CorpusTooShort*>(&e) ||
      dynamic_cast<const EmptyModel*>(&e)) {
    return kExitDegenerate;
  }
  if (dynamic_cast<const Error*>(&e)) return kExitData;
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"YNote music source classifier"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand(
      "generate", "Generate a synthetic three-source corpus");
  gen->add_option("--out", gen_args.out, "Corpus file to write")->required();
  gen->add_option("--config", gen_args.config_path,
                  "Generator config (JSON)");
  auto* gen_seed = gen->add_option("--seed", gen_args.seed,
                                   "Random seed (overrides config)");
  gen->add_option("--count-native", gen_args.count_native,
                  "Override Native song count");
  gen->add_option("--count-algorithm", gen_args.count_algorithm,
                  "Override Algorithm song count");
  gen->add_option("--count-llm", gen_args.count_llm,
                  "Override LLM song count");
  gen->add_option("--manifest", gen_args.manifest, "Manifest path override");

  SplitArgs split_args;
  auto* split = app.add_subcommand(
      "split", "Stratified train/val/test split of a corpus");
  split->add_option("corpus", split_args.corpus, "Input corpus")->required();
  split->add_option("--out", split_args.out_prefix, "Output path prefix")
      ->required();
  split->add_option("--train", split_args.train, "Training ratio")
      ->capture_default_str();
  split->add_option("--val", split_args.val, "Validation ratio")
      ->capture_default_str();
  split->add_option("--test", split_args.test, "Test ratio")
      ->capture_default_str();
  split->add_option("--seed", split_args.seed, "Random seed")
      ->capture_default_str();
  split->add_flag("--no-stratify", split_args.no_stratify,
                  "Split without preserving class proportions");
  split->add_option("--manifest", split_args.manifest,
                    "Manifest path override");

  TrainArgs train_args;
  auto* train = app.add_subcommand(
      "train", "Fit vocabulary, SMOTE, and the OvR model on a corpus");
  train->add_option("corpus", train_args.corpus, "Training corpus")
      ->required();
  train->add_option("--out", train_args.out, "Model artifact to write")
      ->required();
  train->add_option("--manifest", train_args.manifest,
                    "Manifest path override");
  add_pipeline_flags(train, train_args.flags);

  PredictArgs predict_args;
  auto* predict = app.add_subcommand(
      "predict", "Classify one YNote string (argument or stdin)");
  predict->add_option("--model", predict_args.model, "Model artifact")
      ->required();
  predict->add_option("ynote", predict_args.ynote_string,
                      "YNote string (reads stdin when omitted)");
  predict->add_option("--manifest", predict_args.manifest, "Manifest path");

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Evaluate a model on a labeled corpus");
  evaluate->add_option("--model", eval_args.model, "Model artifact")
      ->required();
  evaluate->add_option("corpus", eval_args.corpus, "Labeled corpus")
      ->required();
  evaluate->add_option("--out", eval_args.out, "Write the report as JSON");
  evaluate->add_option("--manifest", eval_args.manifest, "Manifest path");

  ExplainArgs explain_args;
  auto* explain = app.add_subcommand(
      "explain", "Per-class top positive and negative n-grams");
  explain->add_option("--model", explain_args.model, "Model artifact")
      ->required();
  explain->add_option("--top-k", explain_args.top_k, "Entries per direction")
      ->capture_default_str();
  explain->add_option("--out", explain_args.out, "Write the table as JSON");
  explain->add_option("--manifest", explain_args.manifest, "Manifest path");

  CvArgs cv_args;
  auto* cv = app.add_subcommand(
      "cv", "K-fold cross-validation with per-fold refitting");
  cv->add_option("corpus", cv_args.corpus, "Labeled corpus")->required();
  cv->add_option("--folds", cv_args.folds, "Number of folds")
      ->capture_default_str();
  cv->add_option("--manifest", cv_args.manifest, "Manifest path");
  add_pipeline_flags(cv, cv_args.flags);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) {
      gen_args.seed_given = gen_seed->count() > 0;
      run_generate(gen_args);
    } else if (split->parsed()) {
      run_split(split_args);
    } else if (train->parsed()) {
      run_train(train_args);
    } else if (predict->parsed()) {
      run_predict(predict_args);
    } else if (evaluate->parsed()) {
      run_evaluate(eval_args);
    } else if (explain->parsed()) {
      run_explain(explain_args);
    } else if (cv->parsed()) {
      run_cv_cmd(cv_args);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::exception& e) {
    return map_error_exit(e);
  }
  return 0;
}
