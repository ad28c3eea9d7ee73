#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ynote/corpus.hpp"
#include "ynote/error.hpp"
#include "ynote/markov.hpp"
#include "ynote/note.hpp"

namespace ynote {

// Style rules for the rule-based generator: scale membership (ordered
// pitch letters low to high within an octave), a melodic leap bound in
// scale steps, and whether rest tokens are allowed.
struct RuleSet {
  std::vector<char> scale = {'C', 'D', 'E', 'G', 'A'};
  int max_leap_steps = 4;
  bool allow_rests = false;
};

struct AnnealSchedule {
  double initial_temp = 2.0;
  double cooling = 0.995;  // geometric factor in (0,1)
  int steps = 800;

  void validate() const;
};

// Rule violations in a sequence: one per out-of-scale or forbidden-rest
// token, one per in-scale adjacent pair leaping more than max_leap_steps.
int rule_energy(const TokenSequence& seq, const RuleSet& rules);

// Samples an initial melody from the order-1 chain, then simulated
// annealing over single-position resampling moves: accept when the energy
// does not increase, otherwise with probability exp(-dE/T) under geometric
// cooling. Returns the best state seen, so a melody that already satisfies
// every rule comes back unchanged. Deterministic given the seed.
TokenSequence generate_algorithmic(const MarkovModel& model,
                                   std::size_t length, const RuleSet& rules,
                                   const AnnealSchedule& schedule,
                                   std::uint64_t seed);

// Weighted sampling over letters / octaves / durations with rest tokens
// inserted at rest_prob and accidentals (lowercase letters) at
// accidental_prob. Deliberately rest-rich under the defaults.
struct NativeStyleConfig {
  double rest_prob = 0.12;
  double accidental_prob = 0.05;
  std::vector<std::pair<char, double>> letter_weights = {
      {'C', 3}, {'D', 3}, {'E', 3}, {'F', 1}, {'G', 3}, {'A', 3}, {'B', 1}};
  std::vector<std::pair<int, double>> octave_weights = {
      {4, 2}, {5, 3}, {6, 2}};
  std::vector<std::pair<std::string, double>> duration_weights = {
      {"02", 1}, {"04", 3}, {"08", 3}, {"16", 2}, {"4.", 1}, {"8.", 1}};
  std::vector<std::pair<std::string, double>> rest_duration_weights = {
      {"02", 1}, {"04", 2}, {"08", 2}};
};

TokenSequence generate_native_like(const NativeStyleConfig& config,
                                   std::size_t length, std::uint64_t seed);

// Order-2 Markov sampling; stands in for a fine-tuned language model (the
// chain can only emit trigrams observed in its fitting corpus, modulo
// restarts at dead-end contexts). Throws EmptyModel on an unfitted model.
TokenSequence generate_llm_like(const MarkovModel& model, std::size_t length,
                                std::uint64_t seed);

struct ClassGenConfig {
  std::size_t count = 300;
  std::size_t length_min = 32;
  std::size_t length_max = 64;
};

// Desk-scale three-source corpus. The Algorithm chain is fitted on an
// internally generated in-scale seed style and annealed against the rules;
// the LLM chain is an order-2 model fitted on a distinct seed style. The
// LLM class emulates a language model statistically; no actual LLM is
// involved anywhere.
struct GeneratorConfig {
  std::uint64_t seed = 42;
  ClassGenConfig native;
  ClassGenConfig algorithm;
  ClassGenConfig llm;

  NativeStyleConfig native_style;
  NativeStyleConfig llm_seed_style;   // style the order-2 chain is fitted on
  NativeStyleConfig algo_seed_style;  // style the order-1 chain is fitted on
  std::size_t seed_corpus_songs = 40;
  std::size_t seed_corpus_length = 64;

  RuleSet rules;
  AnnealSchedule anneal;
  int llm_markov_order = 2;
};

GeneratorConfig default_generator_config();

// Parses a JSON generator config; absent keys fall back to the defaults.
GeneratorConfig generator_config_from_json(const std::string& json_text);
GeneratorConfig load_generator_config(const std::string& path);

Corpus generate_corpus(const GeneratorConfig& config);

}  // namespace ynote
