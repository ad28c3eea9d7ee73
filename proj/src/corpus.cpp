#include "ynote/corpus.hpp"

#include <fstream>
#include <sstream>

namespace ynote {

std::string class_name(int label) {
  switch (label) {
    case 0:
      return "Native";
    case 1:
      return "Algorithm";
    case 2:
      return "LLM";
    default:
      return "Class" + std::to_string(label);
  }
}

std::vector<std::string> class_names() {
  return {class_name(0), class_name(1), class_name(2)};
}

std::vector<int> Corpus::labels() const {
  std::vector<int> out;
  out.reserve(songs.size());
  for (const LabeledSong& song : songs) out.push_back(song.label);
  return out;
}

std::vector<TokenSequence> Corpus::token_sequences() const {
  std::vector<TokenSequence> out;
  out.reserve(songs.size());
  for (const LabeledSong& song : songs) {
    out.push_back(tokenize(song.ynote, TokenizePolicy::Strict));
  }
  return out;
}

std::vector<std::size_t> Corpus::class_counts() const {
  std::vector<std::size_t> counts(kNumClasses, 0);
  for (const LabeledSong& song : songs) {
    if (song.label >= 0 && song.label < kNumClasses) counts[song.label] += 1;
  }
  return counts;
}

namespace {

LabeledSong parse_record(const std::string& line, std::size_t line_no) {
  const auto fail = [line_no](const std::string& why) -> MalformedRecord {
    return MalformedRecord("line " + std::to_string(line_no) + ": " + why);
  };

  const std::size_t tab1 = line.find('\t');
  if (tab1 == std::string::npos) throw fail("expected id<TAB>label<TAB>ynote");
  const std::size_t tab2 = line.find('\t', tab1 + 1);
  if (tab2 == std::string::npos) throw fail("expected id<TAB>label<TAB>ynote");

  LabeledSong song;
  song.id = line.substr(0, tab1);
  if (song.id.empty()) throw fail("empty id");

  const std::string label_text = line.substr(tab1 + 1, tab2 - tab1 - 1);
  try {
    std::size_t used = 0;
    song.label = std::stoi(label_text, &used);
    if (used != label_text.size()) throw std::invalid_argument(label_text);
  } catch (const std::exception&) {
    throw fail("label \"" + label_text + "\" is not an integer");
  }
  if (song.label < 0 || song.label >= kNumClasses) {
    throw fail("label " + std::to_string(song.label) + " out of range 0.." +
               std::to_string(kNumClasses - 1));
  }

  song.ynote = line.substr(tab2 + 1);
  try {
    const TokenSequence seq = tokenize(song.ynote, TokenizePolicy::Strict);
    for (const std::string& token : seq.tokens) parse_note(token);
  } catch (const Error& e) {
    throw fail(e.what());
  }
  return song;
}

}  // namespace

Corpus load_corpus(const std::string& path, std::vector<LineError>* errors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");

  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      corpus.songs.push_back(parse_record(line, line_no));
    } catch (const MalformedRecord& e) {
      // Default behavior: report per-line failures, keep the good lines.
      if (errors) {
        errors->push_back({line_no, e.what()});
      } else {
        throw;
      }
    }
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const LabeledSong& song : corpus.songs) {
    out << song.id << '\t' << song.label << '\t' << song.ynote << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace ynote
