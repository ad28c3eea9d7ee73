#include "ynote/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ynote {

void VectorizerConfig::validate() const {
  if (ngram_min < 1 || ngram_min > ngram_max) {
    throw Error("ngram range requires 1 <= ngram_min <= ngram_max");
  }
  if (max_df <= 0.0 || max_df > 1.0) {
    throw Error("max_df must be in (0, 1]");
  }
  if (min_df < 1) {
    throw Error("min_df must be >= 1");
  }
  if (max_features < 1) {
    throw Error("max_features must be >= 1");
  }
}

std::vector<std::string> extract_ngrams(const TokenSequence& seq,
                                        int ngram_min, int ngram_max) {
  std::vector<std::string> out;
  const std::size_t len = seq.tokens.size();
  for (int n = ngram_min; n <= ngram_max; ++n) {
    if (len < static_cast<std::size_t>(n)) break;
    for (std::size_t start = 0; start + n <= len; ++start) {
      std::string gram = seq.tokens[start];
      for (int j = 1; j < n; ++j) {
        gram += ' ';
        gram += seq.tokens[start + j];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

Vocabulary fit_vocabulary(const std::vector<TokenSequence>& corpus,
                          const VectorizerConfig& config) {
  config.validate();
  if (corpus.empty()) {
    throw Error("cannot fit a vocabulary on an empty corpus");
  }

  struct Stats {
    std::size_t doc_freq = 0;
    std::size_t total_count = 0;
  };
  // std::map keeps n-grams in lexicographic order throughout.
  std::map<std::string, Stats> stats;
  for (const TokenSequence& seq : corpus) {
    std::map<std::string, std::size_t> counts;
    for (std::string& gram :
         extract_ngrams(seq, config.ngram_min, config.ngram_max)) {
      ++counts[std::move(gram)];
    }
    for (const auto& [gram, count] : counts) {
      Stats& s = stats[gram];
      s.doc_freq += 1;
      s.total_count += count;
    }
  }

  const std::size_t n_docs = corpus.size();
  const auto max_df_count = static_cast<std::size_t>(
      std::ceil(config.max_df * static_cast<double>(n_docs)));

  std::vector<std::pair<std::string, Stats>> survivors;
  for (const auto& [gram, s] : stats) {
    if (s.doc_freq < config.min_df || s.doc_freq > max_df_count) continue;
    survivors.emplace_back(gram, s);
  }
  if (survivors.empty()) {
    throw EmptyVocabulary("no n-gram survived the document-frequency filters");
  }

  if (survivors.size() > config.max_features) {
    // Keep the most frequent by total corpus count; survivors are already
    // lexicographically sorted, so stable_sort gives the stated tie-break.
    std::stable_sort(survivors.begin(), survivors.end(),
                     [](const auto& a, const auto& b) {
                       return a.second.total_count > b.second.total_count;
                     });
    survivors.resize(config.max_features);
    std::sort(survivors.begin(), survivors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  Vocabulary vocab;
  vocab.config = config;
  vocab.n_docs_fitted = n_docs;
  vocab.entries.reserve(survivors.size());
  vocab.index.reserve(survivors.size());
  for (auto& [gram, s] : survivors) {
    VocabEntry entry;
    entry.arity =
        1 + static_cast<int>(std::count(gram.begin(), gram.end(), ' '));
    entry.doc_freq = s.doc_freq;
    entry.idf = std::log((1.0 + static_cast<double>(n_docs)) /
                         (1.0 + static_cast<double>(s.doc_freq))) +
                1.0;
    entry.text = std::move(gram);
    vocab.index.emplace(entry.text,
                        static_cast<std::uint32_t>(vocab.entries.size()));
    vocab.entries.push_back(std::move(entry));
  }
  return vocab;
}

SparseRow transform(const TokenSequence& seq, const Vocabulary& vocab) {
  // Column -> raw count; std::map keeps the row sorted by index.
  std::map<std::uint32_t, double> counts;
  for (const std::string& gram :
       extract_ngrams(seq, vocab.config.ngram_min, vocab.config.ngram_max)) {
    auto it = vocab.index.find(gram);
    if (it != vocab.index.end()) {
      counts[it->second] += 1.0;
    }
  }

  SparseRow row;
  row.reserve(counts.size());
  double sq_norm = 0.0;
  for (const auto& [col, count] : counts) {
    const double v = count * vocab.entries[col].idf;
    sq_norm += v * v;
    row.emplace_back(col, v);
  }
  if (sq_norm > 0.0) {
    const double inv = 1.0 / std::sqrt(sq_norm);
    for (auto& [col, v] : row) v *= inv;
  }
  return row;
}

FeatureMatrix transform_corpus(const std::vector<TokenSequence>& corpus,
                               const Vocabulary& vocab,
                               std::vector<std::size_t>* zero_rows) {
  FeatureMatrix matrix;
  matrix.n_cols = vocab.size();
  matrix.rows.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    matrix.rows.push_back(transform(corpus[i], vocab));
    if (zero_rows && matrix.rows.back().empty()) {
      zero_rows->push_back(i);
    }
  }
  return matrix;
}

double sparse_dot(const SparseRow& a, const SparseRow& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (a[i].first > b[j].first) {
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return dot;
}

double sparse_sq_norm(const SparseRow& a) {
  double s = 0.0;
  for (const auto& [col, v] : a) s += v * v;
  return s;
}

}  // namespace ynote
