#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ynote/error.hpp"

namespace ynote {

struct MalformedToken : Error {
  explicit MalformedToken(const std::string& msg) : Error(msg) {}
};
struct LengthNotMultipleOf4 : Error {
  explicit LengthNotMultipleOf4(const std::string& msg) : Error(msg) {}
};
struct EmptyInput : Error {
  explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

// One parsed YNote token: always exactly four characters, two of pitch and
// two of duration. Pitch is a note letter plus octave digit; "00" marks a
// rest. Lowercase letters are accidentals and are kept verbatim. Duration
// stays an opaque validated two-character code over {0-9, '.'}:
// classification needs token identity, never musical interpretation.
struct Note {
  std::string raw;            // original 4-character token
  char pitch_letter = '\0';   // 'A'..'G' or 'a'..'g'; '\0' for a rest
  int octave = -1;            // 0..9; -1 for a rest
  std::string duration_code;  // 2 characters over {0-9, '.'}
  bool is_rest = false;

  bool operator==(const Note&) const = default;

  static Note pitch(char letter, int octave, std::string duration);
  static Note rest(std::string duration);
};

enum class TokenizePolicy { Strict, TruncateTail };

struct TokenSequence {
  std::vector<std::string> tokens;  // each exactly 4 characters
  std::size_t source_len = 0;       // length of the original string
  std::string remainder;            // dropped tail under TruncateTail

  std::size_t size() const { return tokens.size(); }
};

// Parses one 4-character token. Throws MalformedToken on length or charset
// violations ("00" pitch is the rest exception).
Note parse_note(std::string_view token);

// Inverse of parse_note: rebuilds the 4-character token from fields.
// parse_note(serialize(n)) == n for any valid Note.
std::string serialize(const Note& note);

// Cuts the string every 4 characters. Strict requires the length to be a
// multiple of 4 (LengthNotMultipleOf4 otherwise); TruncateTail drops a
// trailing remainder of length 1-3 and reports it. EmptyInput when no tokens
// result. Tokens are not validated here; parse_note does that per token.
TokenSequence tokenize(std::string_view ynote_string,
                       TokenizePolicy policy = TokenizePolicy::Strict);

bool is_rest_token(std::string_view token);

}  // namespace ynote
