#include "ynote/model_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ynote/hash.hpp"
#include "ynote/rng.hpp"

namespace ynote {

using ordered_json = nlohmann::ordered_json;

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(bytes));
  return std::string(buf);
}

namespace {

std::string double_bits_hex(double v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, std::bit_cast<std::uint64_t>(v));
  return std::string(buf);
}

std::string class_weight_name(ClassWeight w) {
  return w == ClassWeight::Balanced ? "balanced" : "uniform";
}

ClassWeight class_weight_from_name(const std::string& name) {
  if (name == "balanced") return ClassWeight::Balanced;
  if (name == "uniform") return ClassWeight::Uniform;
  throw Error("unknown class weight \"" + name + "\"");
}

}  // namespace

std::string vocabulary_dump(const Vocabulary& vocab) {
  // Hashes idf bit patterns rather than decimal renderings, so the
  // fingerprint is independent of any float-to-string library.
  std::ostringstream out;
  out << "ynote.vocab 1\n";
  out << "n_docs=" << vocab.n_docs_fitted << '\n';
  out << "config=" << vocab.config.ngram_min << ',' << vocab.config.ngram_max
      << ',' << vocab.config.max_features << ',' << vocab.config.min_df << ','
      << double_bits_hex(vocab.config.max_df) << ','
      << (vocab.config.case_sensitive ? 1 : 0) << '\n';
  for (const VocabEntry& entry : vocab.entries) {
    out << entry.text << '\t' << entry.doc_freq << '\t'
        << double_bits_hex(entry.idf) << '\n';
  }
  return out.str();
}

std::string vocabulary_fingerprint(const Vocabulary& vocab) {
  return "fnv1a64:" + fnv1a64_hex(vocabulary_dump(vocab));
}

std::string artifact_to_json(const ModelArtifact& artifact) {
  ordered_json j;
  j["schema"] = "ynotecls.model";
  j["schema_version"] = kModelSchemaVersion;

  const VectorizerConfig& vc = artifact.vocab.config;
  j["vectorizer"] = {{"ngram_min", vc.ngram_min},
                     {"ngram_max", vc.ngram_max},
                     {"max_features", vc.max_features},
                     {"min_df", vc.min_df},
                     {"max_df", vc.max_df},
                     {"case_sensitive", vc.case_sensitive}};

  ordered_json entries = ordered_json::array();
  for (const VocabEntry& entry : artifact.vocab.entries) {
    entries.push_back({entry.text, entry.doc_freq, entry.idf});
  }
  j["vocabulary"] = {{"n_docs_fitted", artifact.vocab.n_docs_fitted},
                     {"entries", std::move(entries)}};

  ordered_json classes = ordered_json::array();
  for (std::size_t i = 0; i < artifact.labels.size(); ++i) {
    classes.push_back(
        {{"label", artifact.labels[i]}, {"name", artifact.names[i]}});
  }
  j["classes"] = std::move(classes);

  j["model"] = {{"intercepts", artifact.model.intercept},
                {"coefficients", artifact.model.coef}};

  const TrainConfig& tc = artifact.model.train_config;
  j["training"] = {{"c", tc.regularization_strength},
                   {"max_iter", tc.max_iter},
                   {"tol", tc.tol},
                   {"class_weight", class_weight_name(tc.class_weight)},
                   {"seed", tc.seed}};

  j["rng"] = {{"name", artifact.rng_name.empty() ? kRngName : artifact.rng_name},
              {"seed", artifact.seed}};

  // Content hashes over the canonical vocabulary dump and the coefficient
  // bit patterns.
  std::string coef_bytes;
  for (const auto& row : artifact.model.coef) {
    for (double v : row) coef_bytes += double_bits_hex(v);
  }
  for (double v : artifact.model.intercept) coef_bytes += double_bits_hex(v);
  j["hashes"] = {{"vocabulary", vocabulary_fingerprint(artifact.vocab)},
                 {"coefficients", "fnv1a64:" + fnv1a64_hex(coef_bytes)}};

  return j.dump(2) + "\n";
}

ModelArtifact artifact_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("model artifact is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "ynotecls.model") {
      throw Error("not a model artifact");
    }
    if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw Error("unsupported model schema version");
    }

    ModelArtifact artifact;
    const auto& vj = j.at("vectorizer");
    VectorizerConfig vc;
    vc.ngram_min = vj.at("ngram_min").get<int>();
    vc.ngram_max = vj.at("ngram_max").get<int>();
    vc.max_features = vj.at("max_features").get<std::size_t>();
    vc.min_df = vj.at("min_df").get<std::size_t>();
    vc.max_df = vj.at("max_df").get<double>();
    vc.case_sensitive = vj.at("case_sensitive").get<bool>();
    artifact.vocab.config = vc;

    artifact.vocab.n_docs_fitted =
        j.at("vocabulary").at("n_docs_fitted").get<std::size_t>();
    for (const auto& entry : j.at("vocabulary").at("entries")) {
      VocabEntry e;
      e.text = entry.at(0).get<std::string>();
      e.doc_freq = entry.at(1).get<std::size_t>();
      e.idf = entry.at(2).get<double>();
      e.arity = 1 + static_cast<int>(
                        std::count(e.text.begin(), e.text.end(), ' '));
      artifact.vocab.index.emplace(
          e.text, static_cast<std::uint32_t>(artifact.vocab.entries.size()));
      artifact.vocab.entries.push_back(std::move(e));
    }

    for (const auto& cls : j.at("classes")) {
      artifact.labels.push_back(cls.at("label").get<int>());
      artifact.names.push_back(cls.at("name").get<std::string>());
    }

    artifact.model.classes = artifact.labels;
    artifact.model.intercept =
        j.at("model").at("intercepts").get<std::vector<double>>();
    artifact.model.coef =
        j.at("model").at("coefficients").get<std::vector<std::vector<double>>>();

    const auto& tj = j.at("training");
    TrainConfig tc;
    tc.regularization_strength = tj.at("c").get<double>();
    tc.max_iter = tj.at("max_iter").get<int>();
    tc.tol = tj.at("tol").get<double>();
    tc.class_weight = class_weight_from_name(tj.at("class_weight").get<std::string>());
    tc.seed = tj.at("seed").get<std::uint64_t>();
    artifact.model.train_config = tc;

    artifact.rng_name = j.at("rng").at("name").get<std::string>();
    artifact.seed = j.at("rng").at("seed").get<std::uint64_t>();

    artifact.model.vocab_fingerprint = vocabulary_fingerprint(artifact.vocab);
    const std::string stored =
        j.at("hashes").at("vocabulary").get<std::string>();
    if (stored != artifact.model.vocab_fingerprint) {
      throw Error("vocabulary hash mismatch; artifact is corrupted");
    }
    std::string coef_bytes;
    for (const auto& row : artifact.model.coef) {
      for (double v : row) coef_bytes += double_bits_hex(v);
    }
    for (double v : artifact.model.intercept) {
      coef_bytes += double_bits_hex(v);
    }
    if (j.at("hashes").at("coefficients").get<std::string>() !=
        "fnv1a64:" + fnv1a64_hex(coef_bytes)) {
      throw Error("coefficient hash mismatch; artifact is corrupted");
    }

    if (artifact.model.coef.size() != artifact.labels.size() ||
        artifact.model.intercept.size() != artifact.labels.size()) {
      throw Error("coefficient shape does not match the class list");
    }
    for (const auto& row : artifact.model.coef) {
      if (row.size() != artifact.vocab.size()) {
        throw Error("coefficient row length does not match the vocabulary");
      }
    }
    return artifact;
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("model artifact is missing fields: ") + e.what());
  }
}

void save_artifact(const ModelArtifact& artifact, const std::string& path) {
  write_file(path, artifact_to_json(artifact));
}

ModelArtifact load_artifact(const std::string& path) {
  return artifact_from_json(read_file(path));
}

std::string eval_report_to_json(const EvalReport& report) {
  ordered_json j;
  j["schema"] = "ynotecls.eval";
  j["schema_version"] = kEvalSchemaVersion;
  j["n_samples"] = report.report.n_samples;
  j["accuracy"] = report.report.accuracy;

  ordered_json per_class = ordered_json::array();
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    const ClassMetrics& cm = report.report.per_class[i];
    per_class.push_back({{"label", report.labels[i]},
                         {"name", report.class_names[i]},
                         {"precision", cm.precision},
                         {"recall", cm.recall},
                         {"f1", cm.f1},
                         {"support", cm.support},
                         {"auc", report.auc_per_class[i]}});
  }
  j["per_class"] = std::move(per_class);
  j["weighted"] = {{"precision", report.report.weighted_precision},
                   {"recall", report.report.weighted_recall},
                   {"f1", report.report.weighted_f1}};
  j["roc_auc"] = {{"micro", report.auc_micro}, {"macro", report.auc_macro}};
  j["confusion"] = report.confusion;
  j["confusion_normalized"] = report.confusion_normalized;
  j["zero_feature_rows"] = report.zero_feature_rows;
  return j.dump(2) + "\n";
}

std::string format_eval_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];

  std::snprintf(line, sizeof line, "%-26s %9s %9s %9s %9s\n", "Class",
                "Precision", "Recall", "F1-Score", "Support");
  out << line;
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    const ClassMetrics& cm = report.report.per_class[i];
    std::snprintf(line, sizeof line, "%-26s %9.4f %9.4f %9.4f %9zu\n",
                  report.class_names[i].c_str(), cm.precision, cm.recall,
                  cm.f1, cm.support);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-26s %9.4f %9.4f %9.4f %9zu\n",
                "Weighted average / Total", report.report.weighted_precision,
                report.report.weighted_recall, report.report.weighted_f1,
                report.report.n_samples);
  out << line;

  std::snprintf(line, sizeof line, "\nAccuracy: %.4f\n", report.report.accuracy);
  out << line;
  std::snprintf(line, sizeof line,
                "ROC-AUC  micro: %.4f  macro: %.4f  per-class:",
                report.auc_micro, report.auc_macro);
  out << line;
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    std::snprintf(line, sizeof line, " %s=%.4f",
                  report.class_names[i].c_str(), report.auc_per_class[i]);
    out << line;
  }
  out << "\n\nNormalized confusion matrix (rows = true class):\n";

  std::snprintf(line, sizeof line, "%-12s", "");
  out << line;
  for (const std::string& name : report.class_names) {
    std::snprintf(line, sizeof line, " %10s", name.c_str());
    out << line;
  }
  out << '\n';
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    std::snprintf(line, sizeof line, "%-12s", report.class_names[i].c_str());
    out << line;
    for (double v : report.confusion_normalized[i]) {
      std::snprintf(line, sizeof line, " %10.4f", v);
      out << line;
    }
    out << '\n';
  }
  if (report.zero_feature_rows > 0) {
    out << "\nDocuments with no in-vocabulary n-grams: "
        << report.zero_feature_rows << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace ynote
