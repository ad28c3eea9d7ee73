#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ynote/generate.hpp"
#include "ynote/note.hpp"

using namespace ynote;

namespace {

TokenSequence seq_of(std::vector<std::string> tokens) {
  TokenSequence seq;
  seq.tokens = std::move(tokens);
  return seq;
}

std::set<std::string> trigram_set(const TokenSequence& seq) {
  std::set<std::string> grams;
  for (std::size_t i = 0; i + 3 <= seq.tokens.size(); ++i) {
    grams.insert(seq.tokens[i] + " " + seq.tokens[i + 1] + " " +
                 seq.tokens[i + 2]);
  }
  return grams;
}

}  // namespace

TEST_CASE("rule energy counts scale, rest and leap violations") {
  const RuleSet rules;  // pentatonic C D E G A, max leap 4, no rests
  CHECK(rule_energy(seq_of({"C504", "D504", "E504"}), rules) == 0);
  CHECK(rule_energy(seq_of({"C504", "F504", "E504"}), rules) == 1);  // F
  CHECK(rule_energy(seq_of({"C504", "0004", "E504"}), rules) == 1);  // rest
  CHECK(rule_energy(seq_of({"C504", "c504"}), rules) == 1);  // accidental
  // C4 -> A5 is 9 pentatonic steps, one leap violation.
  CHECK(rule_energy(seq_of({"C404", "A504"}), rules) == 1);
  // A4 -> C5 is one step up the scale.
  CHECK(rule_energy(seq_of({"A404", "C504"}), rules) == 0);
}

TEST_CASE("melody already satisfying every rule is returned unchanged") {
  // A single-state chain can only emit C504, which satisfies the rules, so
  // annealing must hand back the initial melody verbatim.
  const MarkovModel chain =
      fit_markov({seq_of({"C504", "C504", "C504", "C504"})}, 1);
  const TokenSequence out =
      generate_algorithmic(chain, 8, RuleSet{}, AnnealSchedule{}, 42);
  CHECK(out.tokens == std::vector<std::string>(8, "C504"));
}

TEST_CASE("annealing drives the energy to zero given enough steps") {
  // The chain mixes in out-of-scale F tokens; in-scale alternatives exist
  // from every context, so annealing can always repair the melody.
  std::vector<std::string> style;
  const std::vector<std::string> pool = {"C504", "D504", "F504", "E504",
                                         "G504", "F504", "A504", "C504"};
  for (int rep = 0; rep < 6; ++rep) {
    style.insert(style.end(), pool.begin(), pool.end());
  }
  const MarkovModel chain = fit_markov({seq_of(style)}, 1);

  AnnealSchedule schedule;
  schedule.steps = 10000;
  schedule.cooling = 0.999;
  const TokenSequence out =
      generate_algorithmic(chain, 16, RuleSet{}, schedule, 7);
  CHECK(rule_energy(out, RuleSet{}) == 0);
}

TEST_CASE("best-so-far energy never exceeds the initial energy") {
  const std::vector<std::string> pool = {"C504", "F504", "B604", "0004",
                                         "A404", "E504", "G504", "C404"};
  std::vector<std::string> style;
  for (int rep = 0; rep < 5; ++rep) {
    style.insert(style.end(), pool.begin(), pool.end());
  }
  const MarkovModel chain = fit_markov({seq_of(style)}, 1);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng init_rng(seed);
    const TokenSequence initial = sample_markov(chain, 20, init_rng);
    AnnealSchedule schedule;
    schedule.steps = 40;  // deliberately too few to finish
    const TokenSequence out =
        generate_algorithmic(chain, 20, RuleSet{}, schedule, seed);
    CHECK(rule_energy(out, RuleSet{}) <= rule_energy(initial, RuleSet{}));
  }
}

TEST_CASE("native-like generator honors the rest probability extremes") {
  NativeStyleConfig all_rests;
  all_rests.rest_prob = 1.0;
  const TokenSequence rests = generate_native_like(all_rests, 32, 1);
  for (const std::string& token : rests.tokens) CHECK(is_rest_token(token));

  NativeStyleConfig no_rests;
  no_rests.rest_prob = 0.0;
  const TokenSequence none = generate_native_like(no_rests, 32, 1);
  for (const std::string& token : none.tokens) CHECK_FALSE(is_rest_token(token));
}

TEST_CASE("native-like output is valid and reproducible") {
  const NativeStyleConfig config;
  const TokenSequence a = generate_native_like(config, 64, 9);
  const TokenSequence b = generate_native_like(config, 64, 9);
  CHECK(a.tokens == b.tokens);
  for (const std::string& token : a.tokens) {
    CHECK(serialize(parse_note(token)) == token);
  }
}

TEST_CASE("order-2 sampling from one sequence reproduces its trigram set") {
  // Distinct tokens make every pair context unambiguous, so the chain can
  // only replay the training sequence and its trigram set exactly.
  std::vector<std::string> tokens;
  for (int i = 0; i < 15; ++i) {
    std::string token;
    token += static_cast<char>('A' + i % 7);
    token += static_cast<char>('0' + 4 + i / 7);
    token += "04";
    tokens.push_back(std::move(token));
  }
  const TokenSequence train = seq_of(tokens);
  const MarkovModel chain = fit_markov({train}, 2);

  const TokenSequence out =
      generate_llm_like(chain, train.tokens.size(), 123);
  CHECK(out.tokens == train.tokens);
  CHECK(trigram_set(out) == trigram_set(train));
}

TEST_CASE("generators reject an empty model") {
  CHECK_THROWS_AS(generate_llm_like(MarkovModel{}, 10, 1), EmptyModel);
  CHECK_THROWS_AS(
      generate_algorithmic(MarkovModel{}, 10, RuleSet{}, AnnealSchedule{}, 1),
      EmptyModel);
}

TEST_CASE("generated corpora are valid, labeled and reproducible") {
  GeneratorConfig config = default_generator_config();
  config.native.count = 15;
  config.algorithm.count = 12;
  config.llm.count = 10;
  config.native.length_min = config.algorithm.length_min =
      config.llm.length_min = 12;
  config.native.length_max = config.algorithm.length_max =
      config.llm.length_max = 24;
  config.anneal.steps = 200;

  const Corpus a = generate_corpus(config);
  const Corpus b = generate_corpus(config);
  REQUIRE(a.size() == 37);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.songs[i].id == b.songs[i].id);
    CHECK(a.songs[i].ynote == b.songs[i].ynote);
    const TokenSequence seq = tokenize(a.songs[i].ynote);
    CHECK(seq.tokens.size() >= 12);
    CHECK(seq.tokens.size() <= 24);
    for (const std::string& token : seq.tokens) parse_note(token);
  }
  CHECK(a.class_counts() == std::vector<std::size_t>{15, 12, 10});
}

TEST_CASE("rest-token document frequencies separate the three sources") {
  GeneratorConfig config = default_generator_config();
  config.native.count = 30;
  config.algorithm.count = 30;
  config.llm.count = 30;
  config.anneal.steps = 300;
  const Corpus corpus = generate_corpus(config);

  std::map<int, std::size_t> docs_with_rests;
  for (const LabeledSong& song : corpus.songs) {
    const TokenSequence seq = tokenize(song.ynote);
    for (const std::string& token : seq.tokens) {
      if (is_rest_token(token)) {
        docs_with_rests[song.label] += 1;
        break;
      }
    }
  }
  CHECK(docs_with_rests[0] > docs_with_rests[2]);
  CHECK(docs_with_rests[2] > 0);
  CHECK(docs_with_rests[1] == 0);
}

TEST_CASE("generator config round-trips through JSON with defaults") {
  const GeneratorConfig from_empty = generator_config_from_json("{}");
  CHECK(from_empty.seed == 42);
  CHECK(from_empty.native.count == 300);

  const GeneratorConfig cfg = generator_config_from_json(R"({
    "seed": 7,
    "native": {"count": 10, "length_min": 8, "length_max": 12, "rest_prob": 0.5},
    "algorithm": {"count": 5, "scale": "CDE", "max_leap": 2,
                  "anneal": {"initial_temp": 1.0, "cooling": 0.9, "steps": 50}},
    "llm": {"count": 4, "markov_order": 1, "rest_prob": 0.01}
  })");
  CHECK(cfg.seed == 7);
  CHECK(cfg.native.count == 10);
  CHECK(cfg.native_style.rest_prob == 0.5);
  CHECK(cfg.rules.scale == std::vector<char>{'C', 'D', 'E'});
  CHECK(cfg.rules.max_leap_steps == 2);
  CHECK(cfg.anneal.steps == 50);
  CHECK(cfg.llm_markov_order == 1);
  CHECK(cfg.llm_seed_style.rest_prob == 0.01);

  CHECK_THROWS_AS(generator_config_from_json("not json"), Error);
  CHECK_THROWS_AS(generator_config_from_json(R"({"native": {"length_min": 0}})"),
                  Error);
}
