#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ynote/error.hpp"
#include "ynote/note.hpp"

namespace ynote {

struct EmptyVocabulary : Error {
  explicit EmptyVocabulary(const std::string& msg) : Error(msg) {}
};

struct VectorizerConfig {
  int ngram_min = 1;
  int ngram_max = 3;
  std::size_t max_features = 8000;
  std::size_t min_df = 3;   // absolute document count
  double max_df = 0.95;     // proportion of documents
  bool case_sensitive = true;  // YNote accidentals are lowercase; never folded

  void validate() const;  // throws Error on an inconsistent config
};

// One fitted n-gram: tokens joined by a single ASCII space ("G402 E508").
struct VocabEntry {
  std::string text;
  int arity = 1;
  std::size_t doc_freq = 0;
  double idf = 0.0;
};

struct Vocabulary {
  std::vector<VocabEntry> entries;  // index order == column order
  std::unordered_map<std::string, std::uint32_t> index;
  std::size_t n_docs_fitted = 0;
  VectorizerConfig config;

  std::size_t size() const { return entries.size(); }
};

// All contiguous n-gram occurrences (with multiplicity) for
// n in [ngram_min, ngram_max], in window order per arity.
std::vector<std::string> extract_ngrams(const TokenSequence& seq,
                                        int ngram_min, int ngram_max);

// Fits document frequencies over the corpus, applies the min_df / max_df
// filters (max_df threshold is ceil(max_df * n_docs)), keeps at most
// max_features survivors by total corpus count (ties broken by lexicographic
// text), assigns indices lexicographically and computes smoothed idf
// ln((1 + n_docs) / (1 + df)) + 1. Throws EmptyVocabulary when nothing
// survives. Deterministic: same corpus + config give a byte-identical dump.
Vocabulary fit_vocabulary(const std::vector<TokenSequence>& corpus,
                          const VectorizerConfig& config);

using SparseEntry = std::pair<std::uint32_t, double>;
using SparseRow = std::vector<SparseEntry>;  // sorted by column index

struct FeatureMatrix {
  std::size_t n_cols = 0;
  std::vector<SparseRow> rows;

  std::size_t n_rows() const { return rows.size(); }
};

// Raw term count per vocabulary n-gram, times idf, then L2-normalized.
// Out-of-vocabulary n-grams are ignored; an all-OOV document yields the
// zero vector.
SparseRow transform(const TokenSequence& seq, const Vocabulary& vocab);

// Batch transform; indices of zero-vector rows are reported through
// zero_rows when given (callers surface them in run summaries).
FeatureMatrix transform_corpus(const std::vector<TokenSequence>& corpus,
                               const Vocabulary& vocab,
                               std::vector<std::size_t>* zero_rows = nullptr);

double sparse_dot(const SparseRow& a, const SparseRow& b);
double sparse_sq_norm(const SparseRow& a);

}  // namespace ynote
