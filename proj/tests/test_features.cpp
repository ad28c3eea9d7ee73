#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ynote/features.hpp"
#include "ynote/generate.hpp"
#include "ynote/model_io.hpp"
#include "ynote/rng.hpp"

using namespace ynote;

namespace {

TokenSequence seq_of(std::vector<std::string> tokens) {
  TokenSequence seq;
  seq.tokens = std::move(tokens);
  seq.source_len = seq.tokens.size() * 4;
  return seq;
}

}  // namespace

TEST_CASE("extract_ngrams emits every window of every arity") {
  const auto grams = extract_ngrams(seq_of({"G402", "E508", "C516"}), 1, 3);
  const std::vector<std::string> expected = {
      "G402", "E508", "C516", "G402 E508", "E508 C516", "G402 E508 C516"};
  CHECK(grams == expected);
}

TEST_CASE("extract_ngrams on short and repeated inputs") {
  CHECK(extract_ngrams(seq_of({"A101"}), 1, 3) ==
        std::vector<std::string>{"A101"});
  CHECK(extract_ngrams(seq_of({"A101", "A101"}), 2, 2) ==
        std::vector<std::string>{"A101 A101"});
}

TEST_CASE("fit_vocabulary applies min_df") {
  // Docs [A,B], [A,C], [A,D]: only A reaches df 2.
  const std::vector<TokenSequence> corpus = {seq_of({"A104", "B104"}),
                                             seq_of({"A104", "C104"}),
                                             seq_of({"A104", "D104"})};
  VectorizerConfig config;
  config.ngram_min = 1;
  config.ngram_max = 1;
  config.min_df = 2;
  config.max_df = 1.0;
  const Vocabulary vocab = fit_vocabulary(corpus, config);
  REQUIRE(vocab.size() == 1);
  CHECK(vocab.entries[0].text == "A104");
  CHECK(vocab.entries[0].doc_freq == 3);
}

TEST_CASE("fit_vocabulary applies max_df") {
  const std::vector<TokenSequence> corpus = {seq_of({"A104", "B104"}),
                                             seq_of({"A104", "C104"}),
                                             seq_of({"A104", "D104"})};
  VectorizerConfig config;
  config.ngram_min = 1;
  config.ngram_max = 1;
  config.min_df = 1;
  config.max_df = 0.5;  // threshold ceil(0.5 * 3) = 2, so A (df 3) drops
  const Vocabulary vocab = fit_vocabulary(corpus, config);
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.entries[0].text == "B104");
  CHECK(vocab.entries[1].text == "C104");
  CHECK(vocab.entries[2].text == "D104");
}

TEST_CASE("idf of a term present in every document is exactly 1") {
  const std::vector<TokenSequence> corpus = {
      seq_of({"C404"}), seq_of({"C404"}), seq_of({"C404"}), seq_of({"C404"})};
  VectorizerConfig config;
  config.ngram_min = 1;
  config.ngram_max = 1;
  config.min_df = 1;
  config.max_df = 1.0;
  const Vocabulary vocab = fit_vocabulary(corpus, config);
  REQUIRE(vocab.size() == 1);
  CHECK(vocab.entries[0].idf == 1.0);
}

TEST_CASE("fit_vocabulary throws when nothing survives") {
  const std::vector<TokenSequence> corpus = {seq_of({"A104"}),
                                             seq_of({"B104"})};
  VectorizerConfig config;
  config.ngram_min = 1;
  config.ngram_max = 1;
  config.min_df = 2;
  CHECK_THROWS_AS(fit_vocabulary(corpus, config), EmptyVocabulary);
}

TEST_CASE("max_features keeps the most frequent, ties lexicographic") {
  // Counts: A104 x4, B104 x4, C104 x1 -> keeping 2 drops C104.
  const std::vector<TokenSequence> corpus = {
      seq_of({"A104", "B104", "A104", "B104"}),
      seq_of({"B104", "A104", "C104", "B104", "A104"})};
  VectorizerConfig config;
  config.ngram_min = 1;
  config.ngram_max = 1;
  config.min_df = 1;
  config.max_features = 2;
  const Vocabulary vocab = fit_vocabulary(corpus, config);
  REQUIRE(vocab.size() == 2);
  CHECK(vocab.entries[0].text == "A104");
  CHECK(vocab.entries[1].text == "B104");

  // Equal totals: the lexicographically smaller n-gram survives.
  config.max_features = 1;
  const Vocabulary tie = fit_vocabulary(corpus, config);
  REQUIRE(tie.size() == 1);
  CHECK(tie.entries[0].text == "A104");
}

TEST_CASE("transform matches the hand-computed example") {
  // Counts {A:2, B:1} with idf {A:1, B:2}: pre-norm (2, 2) -> (0.7071, 0.7071).
  Vocabulary vocab;
  vocab.n_docs_fitted = 2;
  vocab.entries = {{"A104", 1, 1, 1.0}, {"B104", 1, 1, 2.0}};
  vocab.index = {{"A104", 0}, {"B104", 1}};
  vocab.config.ngram_min = 1;
  vocab.config.ngram_max = 1;

  const SparseRow row = transform(seq_of({"A104", "B104", "A104"}), vocab);
  REQUIRE(row.size() == 2);
  CHECK(row[0].second == doctest::Approx(0.7071).epsilon(1e-4));
  CHECK(row[1].second == doctest::Approx(0.7071).epsilon(1e-4));
}

TEST_CASE("transform of an all-OOV document is the zero vector") {
  Vocabulary vocab;
  vocab.n_docs_fitted = 1;
  vocab.entries = {{"A104", 1, 1, 1.0}};
  vocab.index = {{"A104", 0}};
  vocab.config.ngram_min = 1;
  vocab.config.ngram_max = 1;

  CHECK(transform(seq_of({"Z104"}), vocab).empty());

  std::vector<std::size_t> zero_rows;
  const FeatureMatrix m = transform_corpus(
      {seq_of({"A104"}), seq_of({"B104"})}, vocab, &zero_rows);
  CHECK(m.n_cols == 1);
  CHECK(zero_rows == std::vector<std::size_t>{1});
}

TEST_CASE("single-term documents become one-hot rows") {
  Vocabulary vocab;
  vocab.n_docs_fitted = 3;
  vocab.entries = {{"A104", 1, 2, 0.5}};
  vocab.index = {{"A104", 0}};
  vocab.config.ngram_min = 1;
  vocab.config.ngram_max = 1;
  const SparseRow row = transform(seq_of({"A104", "A104"}), vocab);
  REQUIRE(row.size() == 1);
  CHECK(row[0].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transform rows have unit norm or are empty") {
  GeneratorConfig config = default_generator_config();
  config.native.count = 12;
  config.algorithm.count = 12;
  config.llm.count = 12;
  config.native.length_min = config.algorithm.length_min =
      config.llm.length_min = 8;
  config.native.length_max = config.algorithm.length_max =
      config.llm.length_max = 16;
  config.anneal.steps = 50;
  const Corpus corpus = generate_corpus(config);

  VectorizerConfig vc;
  vc.min_df = 1;
  const Vocabulary vocab = fit_vocabulary(corpus.token_sequences(), vc);
  const FeatureMatrix m = transform_corpus(corpus.token_sequences(), vocab);
  for (const SparseRow& row : m.rows) {
    if (row.empty()) continue;
    CHECK(std::abs(std::sqrt(sparse_sq_norm(row)) - 1.0) <= 1e-9);
    for (const auto& [col, v] : row) {
      CHECK(v >= 0.0);
      CHECK(col < m.n_cols);
    }
  }
}

TEST_CASE("vocabulary fitting is deterministic") {
  GeneratorConfig config = default_generator_config();
  config.native.count = 10;
  config.algorithm.count = 0;
  config.llm.count = 0;
  const Corpus corpus = generate_corpus(config);
  VectorizerConfig vc;
  vc.min_df = 1;
  const Vocabulary a = fit_vocabulary(corpus.token_sequences(), vc);
  const Vocabulary b = fit_vocabulary(corpus.token_sequences(), vc);
  CHECK(vocabulary_dump(a) == vocabulary_dump(b));
}

TEST_CASE("increasing min_df never adds vocabulary entries") {
  GeneratorConfig config = default_generator_config();
  config.native.count = 20;
  config.algorithm.count = 0;
  config.llm.count = 0;
  config.native.length_min = 8;
  config.native.length_max = 16;
  const Corpus corpus = generate_corpus(config);

  std::vector<std::string> previous;
  for (std::size_t min_df = 1; min_df <= 5; ++min_df) {
    VectorizerConfig vc;
    vc.min_df = min_df;
    std::vector<std::string> texts;
    try {
      const Vocabulary vocab = fit_vocabulary(corpus.token_sequences(), vc);
      for (const VocabEntry& e : vocab.entries) texts.push_back(e.text);
    } catch (const EmptyVocabulary&) {
      // fine: still a subset
    }
    if (min_df > 1) {
      for (const std::string& t : texts) {
        CHECK(std::find(previous.begin(), previous.end(), t) !=
              previous.end());
      }
    }
    previous = texts;
  }
}

TEST_CASE("fit + transform equals the brute-force dense oracle") {
  Rng rng(7);
  const std::vector<std::string> alphabet = {"C404", "D404", "E404", "C504",
                                             "D504", "0002", "g504", "E516"};
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n_docs = 2 + rng.uniform_below(7);
    std::vector<std::vector<std::string>> docs(n_docs);
    std::vector<TokenSequence> seqs;
    for (auto& doc : docs) {
      const std::size_t len = 2 + rng.uniform_below(7);
      for (std::size_t i = 0; i < len; ++i) {
        doc.push_back(alphabet[rng.uniform_below(alphabet.size())]);
      }
      seqs.push_back(seq_of(doc));
    }
    VectorizerConfig vc;
    vc.ngram_min = 1;
    vc.ngram_max = 1 + static_cast<int>(rng.uniform_below(3));
    vc.min_df = 1 + rng.uniform_below(2);
    vc.max_df = trial % 2 == 0 ? 1.0 : 0.8;
    vc.max_features = trial % 3 == 0 ? 6 : 8000;

    const auto expected = oracle::brute_force_tfidf(
        docs, vc.ngram_min, vc.ngram_max, vc.max_features, vc.min_df,
        vc.max_df);
    Vocabulary vocab;
    try {
      vocab = fit_vocabulary(seqs, vc);
    } catch (const EmptyVocabulary&) {
      CHECK(expected.vocab.empty());
      continue;
    }
    REQUIRE(vocab.size() == expected.vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      CHECK(vocab.entries[i].text == expected.vocab[i]);
    }
    const FeatureMatrix m = transform_corpus(seqs, vocab);
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      std::vector<double> dense(vocab.size(), 0.0);
      for (const auto& [col, v] : m.rows[r]) dense[col] = v;
      for (std::size_t c = 0; c < dense.size(); ++c) {
        CHECK(std::abs(dense[c] - expected.matrix[r][c]) <= 1e-9);
      }
    }
  }
}
