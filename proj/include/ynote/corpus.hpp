#pragma once

#include <string>
#include <vector>

#include "ynote/error.hpp"
#include "ynote/note.hpp"

namespace ynote {

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};
struct MalformedRecord : Error {
  explicit MalformedRecord(const std::string& msg) : Error(msg) {}
};

inline constexpr int kNumClasses = 3;

// Display names follow the three source labels: 0 human, 1 rule algorithm,
// 2 language-model generator.
std::string class_name(int label);
std::vector<std::string> class_names();

struct LabeledSong {
  std::string id;
  int label = 0;      // 0 Native, 1 Algorithm, 2 LLM
  std::string ynote;  // raw string, strict-tokenizable
};

struct Corpus {
  std::vector<LabeledSong> songs;

  std::size_t size() const { return songs.size(); }
  std::vector<int> labels() const;
  // Strict tokenization of every song; the corpus is expected to be valid.
  std::vector<TokenSequence> token_sequences() const;
  std::vector<std::size_t> class_counts() const;  // indexed by label 0..2
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Line-delimited records: id <TAB> label <TAB> ynote, UTF-8. Each line is
// validated with strict tokenization plus per-token parsing. With a
// collector the loader skips bad lines and reports them; without one the
// first bad line raises MalformedRecord.
Corpus load_corpus(const std::string& path,
                   std::vector<LineError>* errors = nullptr);

// Exact inverse of load_corpus.
void save_corpus(const Corpus& corpus, const std::string& path);

}  // namespace ynote
