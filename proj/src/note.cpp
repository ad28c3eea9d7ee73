#include "ynote/note.hpp"

namespace ynote {

namespace {

bool is_pitch_letter(char c) {
  return (c >= 'A' && c <= 'G') || (c >= 'a' && c <= 'g');
}

bool is_duration_char(char c) { return (c >= '0' && c <= '9') || c == '.'; }

}  // namespace

Note Note::pitch(char letter, int octave, std::string duration) {
  Note n;
  n.pitch_letter = letter;
  n.octave = octave;
  n.duration_code = std::move(duration);
  n.is_rest = false;
  n.raw = serialize(n);
  return n;
}

Note Note::rest(std::string duration) {
  Note n;
  n.duration_code = std::move(duration);
  n.is_rest = true;
  n.raw = serialize(n);
  return n;
}

Note parse_note(std::string_view token) {
  if (token.size() != 4) {
    throw MalformedToken("token \"" + std::string(token) +
                         "\" has length " + std::to_string(token.size()) +
                         ", expected 4");
  }
  if (!is_duration_char(token[2]) || !is_duration_char(token[3])) {
    throw MalformedToken("token \"" + std::string(token) +
                         "\": duration characters must be in {0-9, '.'}");
  }

  Note note;
  note.raw = std::string(token);
  note.duration_code = std::string(token.substr(2, 2));

  if (token[0] == '0') {
    // Only the rest pitch "00" may start with a digit.
    if (token[1] != '0') {
      throw MalformedToken("token \"" + std::string(token) +
                           "\": pitch starting with '0' must be the rest "
                           "pitch \"00\"");
    }
    note.is_rest = true;
    return note;
  }
  if (!is_pitch_letter(token[0])) {
    throw MalformedToken("token \"" + std::string(token) +
                         "\": pitch letter must be A-G, a-g, or \"00\"");
  }
  if (token[1] < '0' || token[1] > '9') {
    throw MalformedToken("token \"" + std::string(token) +
                         "\": octave must be a digit");
  }
  note.pitch_letter = token[0];
  note.octave = token[1] - '0';
  return note;
}

std::string serialize(const Note& note) {
  std::string out;
  out.reserve(4);
  if (note.is_rest) {
    out += "00";
  } else {
    out += note.pitch_letter;
    out += static_cast<char>('0' + note.octave);
  }
  out += note.duration_code;
  return out;
}

TokenSequence tokenize(std::string_view ynote_string, TokenizePolicy policy) {
  TokenSequence seq;
  seq.source_len = ynote_string.size();

  const std::size_t tail = ynote_string.size() % 4;
  if (tail != 0) {
    if (policy == TokenizePolicy::Strict) {
      throw LengthNotMultipleOf4(
          "input length " + std::to_string(ynote_string.size()) +
          " is not a multiple of 4");
    }
    seq.remainder = std::string(ynote_string.substr(ynote_string.size() - tail));
    ynote_string.remove_suffix(tail);
  }

  seq.tokens.reserve(ynote_string.size() / 4);
  for (std::size_t i = 0; i < ynote_string.size(); i += 4) {
    seq.tokens.emplace_back(ynote_string.substr(i, 4));
  }
  if (seq.tokens.empty()) {
    throw EmptyInput("no tokens in input");
  }
  return seq;
}

bool is_rest_token(std::string_view token) {
  return token.size() == 4 && token[0] == '0' && token[1] == '0';
}

}  // namespace ynote
