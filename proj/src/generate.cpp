#include "ynote/generate.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ynote/model_io.hpp"
#include "ynote/rng.hpp"

namespace ynote {

namespace {

// Sub-stream tags for corpus generation; one stream per song keeps serial
// and parallel generation identical.
constexpr std::uint64_t kStreamNative = 1;
constexpr std::uint64_t kStreamAlgorithm = 2;
constexpr std::uint64_t kStreamLlm = 3;
constexpr std::uint64_t kStreamAlgoSeedCorpus = 4;
constexpr std::uint64_t kStreamLlmSeedCorpus = 5;

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t tag,
                          std::uint64_t index) {
  return derive_seed(derive_seed(base, tag), index);
}

int scale_position(const RuleSet& rules, char letter) {
  for (std::size_t i = 0; i < rules.scale.size(); ++i) {
    if (rules.scale[i] == letter) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

void AnnealSchedule::validate() const {
  if (initial_temp <= 0.0) throw Error("annealing needs a positive initial temperature");
  if (cooling <= 0.0 || cooling >= 1.0) {
    throw Error("annealing cooling factor must be in (0, 1)");
  }
  if (steps < 1) throw Error("annealing needs at least one step");
}

int rule_energy(const TokenSequence& seq, const RuleSet& rules) {
  int energy = 0;
  // Scale index of each in-scale note, -1 otherwise (rests, accidentals,
  // out-of-scale letters). Leaps are only judged between in-scale notes.
  std::vector<int> degree(seq.tokens.size(), -1);
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    const Note note = parse_note(seq.tokens[i]);
    if (note.is_rest) {
      if (!rules.allow_rests) ++energy;
      continue;
    }
    const int pos = scale_position(rules, note.pitch_letter);
    if (pos < 0) {
      ++energy;
      continue;
    }
    degree[i] = note.octave * static_cast<int>(rules.scale.size()) + pos;
  }
  for (std::size_t i = 1; i < seq.tokens.size(); ++i) {
    if (degree[i - 1] >= 0 && degree[i] >= 0 &&
        std::abs(degree[i] - degree[i - 1]) > rules.max_leap_steps) {
      ++energy;
    }
  }
  return energy;
}

TokenSequence generate_algorithmic(const MarkovModel& model,
                                   std::size_t length, const RuleSet& rules,
                                   const AnnealSchedule& schedule,
                                   std::uint64_t seed) {
  schedule.validate();
  if (model.empty()) throw EmptyModel("generator needs a fitted Markov model");
  if (length < 2) throw Error("melody length must be >= 2");

  Rng rng(seed);
  TokenSequence current = sample_markov(model, length, rng);
  int energy = rule_energy(current, rules);

  TokenSequence best = current;
  int best_energy = energy;

  double temp = schedule.initial_temp;
  for (int step = 0; step < schedule.steps && best_energy > 0; ++step) {
    const auto pos = static_cast<std::size_t>(rng.uniform_below(length));

    // Resample one position from the chain's conditional given its left
    // context, falling back to the initial distribution.
    std::string proposal;
    if (pos >= static_cast<std::size_t>(model.order)) {
      std::string context = current.tokens[pos - model.order];
      for (int j = 1; j < model.order; ++j) {
        context += ' ';
        context += current.tokens[pos - model.order + j];
      }
      const auto it = model.transitions.find(context);
      proposal = it != model.transitions.end()
                     ? sample_categorical(it->second, rng)
                     : sample_categorical(model.initial, rng);
    } else {
      proposal = sample_categorical(model.initial, rng);
    }
    proposal = proposal.substr(0, proposal.find(' '));  // first token only

    const std::string saved = current.tokens[pos];
    current.tokens[pos] = proposal;
    const int new_energy = rule_energy(current, rules);
    const int delta = new_energy - energy;

    bool accept = delta <= 0;
    if (!accept) {
      accept = rng.uniform01() < std::exp(-static_cast<double>(delta) / temp);
    }
    if (accept) {
      energy = new_energy;
      if (energy < best_energy) {
        best = current;
        best_energy = energy;
      }
    } else {
      current.tokens[pos] = saved;
    }
    temp *= schedule.cooling;
  }

  best.source_len = 0;
  for (const std::string& token : best.tokens) best.source_len += token.size();
  return best;
}

TokenSequence generate_native_like(const NativeStyleConfig& config,
                                   std::size_t length, std::uint64_t seed) {
  Rng rng(seed);

  auto weights_of = [](const auto& pairs) {
    std::vector<double> w;
    w.reserve(pairs.size());
    for (const auto& [value, weight] : pairs) w.push_back(weight);
    return w;
  };
  const std::vector<double> letter_w = weights_of(config.letter_weights);
  const std::vector<double> octave_w = weights_of(config.octave_weights);
  const std::vector<double> duration_w = weights_of(config.duration_weights);
  const std::vector<double> rest_duration_w =
      weights_of(config.rest_duration_weights);

  TokenSequence seq;
  seq.tokens.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (rng.uniform01() < config.rest_prob) {
      const auto& dur =
          config.rest_duration_weights[rng.pick_weighted(rest_duration_w)].first;
      seq.tokens.push_back("00" + dur);
      continue;
    }
    char letter = config.letter_weights[rng.pick_weighted(letter_w)].first;
    if (config.accidental_prob > 0.0 &&
        rng.uniform01() < config.accidental_prob) {
      letter = static_cast<char>(letter - 'A' + 'a');
    }
    const int octave = config.octave_weights[rng.pick_weighted(octave_w)].first;
    const auto& dur = config.duration_weights[rng.pick_weighted(duration_w)].first;
    std::string token;
    token += letter;
    token += static_cast<char>('0' + octave);
    token += dur;
    seq.tokens.push_back(std::move(token));
  }
  seq.source_len = length * 4;
  return seq;
}

TokenSequence generate_llm_like(const MarkovModel& model, std::size_t length,
                                std::uint64_t seed) {
  if (model.empty()) throw EmptyModel("generator needs a fitted Markov model");
  Rng rng(seed);
  return sample_markov(model, length, rng);
}

GeneratorConfig default_generator_config() {
  GeneratorConfig cfg;

  // The order-2 chain's fitting style: sparse rests, no accidentals, its
  // own octave and duration mix so the chain carries distinct 2-grams.
  cfg.llm_seed_style.rest_prob = 0.03;
  cfg.llm_seed_style.accidental_prob = 0.0;
  cfg.llm_seed_style.letter_weights = {{'C', 2}, {'D', 3}, {'E', 3},
                                       {'F', 1}, {'G', 3}, {'A', 2}};
  cfg.llm_seed_style.octave_weights = {{5, 3}, {6, 2}};
  cfg.llm_seed_style.duration_weights = {{"04", 1}, {"08", 3}, {"16", 3}};
  cfg.llm_seed_style.rest_duration_weights = {{"04", 1}, {"08", 1}};

  // The rule-based chain's fitting style: strictly in scale, never a rest.
  cfg.algo_seed_style.rest_prob = 0.0;
  cfg.algo_seed_style.accidental_prob = 0.0;
  cfg.algo_seed_style.letter_weights = {
      {'C', 2}, {'D', 2}, {'E', 2}, {'G', 2}, {'A', 2}};
  cfg.algo_seed_style.octave_weights = {{4, 1}, {5, 2}};
  cfg.algo_seed_style.duration_weights = {{"08", 2}, {"16", 1}};
  return cfg;
}

namespace {

std::size_t song_length(const ClassGenConfig& cls, Rng& rng) {
  if (cls.length_max <= cls.length_min) return cls.length_min;
  return cls.length_min + static_cast<std::size_t>(rng.uniform_below(
                              cls.length_max - cls.length_min + 1));
}

std::string song_id(const std::string& prefix, std::size_t index) {
  std::string number = std::to_string(index + 1);
  while (number.size() < 4) number.insert(number.begin(), '0');
  return prefix + "-" + number;
}

std::string join_tokens(const TokenSequence& seq) {
  std::string out;
  out.reserve(seq.tokens.size() * 4);
  for (const std::string& token : seq.tokens) out += token;
  return out;
}

std::vector<TokenSequence> style_seed_corpus(const NativeStyleConfig& style,
                                             std::size_t songs,
                                             std::size_t length,
                                             std::uint64_t base,
                                             std::uint64_t tag) {
  std::vector<TokenSequence> corpus;
  corpus.reserve(songs);
  for (std::size_t j = 0; j < songs; ++j) {
    corpus.push_back(
        generate_native_like(style, length, stream_seed(base, tag, j)));
  }
  return corpus;
}

}  // namespace

Corpus generate_corpus(const GeneratorConfig& config) {
  Corpus corpus;

  for (std::size_t i = 0; i < config.native.count; ++i) {
    const std::uint64_t s = stream_seed(config.seed, kStreamNative, i);
    Rng meta(derive_seed(s, 0));
    const std::size_t length = song_length(config.native, meta);
    const TokenSequence seq =
        generate_native_like(config.native_style, length, derive_seed(s, 1));
    corpus.songs.push_back({song_id("native", i), 0, join_tokens(seq)});
  }

  if (config.algorithm.count > 0) {
    const auto seed_corpus = style_seed_corpus(
        config.algo_seed_style, config.seed_corpus_songs,
        config.seed_corpus_length, config.seed, kStreamAlgoSeedCorpus);
    const MarkovModel chain = fit_markov(seed_corpus, 1);
    for (std::size_t i = 0; i < config.algorithm.count; ++i) {
      const std::uint64_t s = stream_seed(config.seed, kStreamAlgorithm, i);
      Rng meta(derive_seed(s, 0));
      const std::size_t length = song_length(config.algorithm, meta);
      const TokenSequence seq = generate_algorithmic(
          chain, length, config.rules, config.anneal, derive_seed(s, 1));
      corpus.songs.push_back({song_id("algo", i), 1, join_tokens(seq)});
    }
  }

  if (config.llm.count > 0) {
    const auto seed_corpus = style_seed_corpus(
        config.llm_seed_style, config.seed_corpus_songs,
        config.seed_corpus_length, config.seed, kStreamLlmSeedCorpus);
    const MarkovModel chain = fit_markov(seed_corpus, config.llm_markov_order);
    for (std::size_t i = 0; i < config.llm.count; ++i) {
      const std::uint64_t s = stream_seed(config.seed, kStreamLlm, i);
      Rng meta(derive_seed(s, 0));
      const std::size_t length = song_length(config.llm, meta);
      const TokenSequence seq =
          generate_llm_like(chain, length, derive_seed(s, 1));
      corpus.songs.push_back({song_id("llm", i), 2, join_tokens(seq)});
    }
  }
  return corpus;
}

namespace {

using nlohmann::json;

void read_class(const json& j, ClassGenConfig& cls) {
  cls.count = j.value("count", cls.count);
  cls.length_min = j.value("length_min", cls.length_min);
  cls.length_max = j.value("length_max", cls.length_max);
  if (cls.length_min < 2 || cls.length_max < cls.length_min) {
    throw Error("generator config: invalid length range");
  }
}

}  // namespace

GeneratorConfig generator_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("generator config is not valid JSON: ") + e.what());
  }

  GeneratorConfig cfg = default_generator_config();
  cfg.seed = j.value("seed", cfg.seed);
  cfg.seed_corpus_songs = j.value("seed_corpus_songs", cfg.seed_corpus_songs);
  cfg.seed_corpus_length = j.value("seed_corpus_length", cfg.seed_corpus_length);

  if (j.contains("native")) {
    const json& n = j.at("native");
    read_class(n, cfg.native);
    cfg.native_style.rest_prob = n.value("rest_prob", cfg.native_style.rest_prob);
    cfg.native_style.accidental_prob =
        n.value("accidental_prob", cfg.native_style.accidental_prob);
  }
  if (j.contains("algorithm")) {
    const json& a = j.at("algorithm");
    read_class(a, cfg.algorithm);
    if (a.contains("scale")) {
      const std::string scale = a.at("scale").get<std::string>();
      if (scale.empty()) throw Error("generator config: empty scale");
      cfg.rules.scale.assign(scale.begin(), scale.end());
    }
    cfg.rules.max_leap_steps = a.value("max_leap", cfg.rules.max_leap_steps);
    if (a.contains("anneal")) {
      const json& an = a.at("anneal");
      cfg.anneal.initial_temp = an.value("initial_temp", cfg.anneal.initial_temp);
      cfg.anneal.cooling = an.value("cooling", cfg.anneal.cooling);
      cfg.anneal.steps = an.value("steps", cfg.anneal.steps);
    }
  }
  if (j.contains("llm")) {
    const json& l = j.at("llm");
    read_class(l, cfg.llm);
    cfg.llm_markov_order = l.value("markov_order", cfg.llm_markov_order);
    if (cfg.llm_markov_order < 1) {
      throw Error("generator config: markov_order must be >= 1");
    }
    cfg.llm_seed_style.rest_prob =
        l.value("rest_prob", cfg.llm_seed_style.rest_prob);
  }
  cfg.anneal.validate();
  return cfg;
}

GeneratorConfig load_generator_config(const std::string& path) {
  return generator_config_from_json(read_file(path));
}

}  // namespace ynote
