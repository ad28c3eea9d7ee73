#include "ynote/markov.hpp"

#include <map>

namespace ynote {

namespace {

std::string join_context(const std::vector<std::string>& tokens,
                         std::size_t first, int order) {
  std::string out = tokens[first];
  for (int j = 1; j < order; ++j) {
    out += ' ';
    out += tokens[first + j];
  }
  return out;
}

Categorical normalize(const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [token, count] : counts) total += count;
  Categorical dist;
  dist.reserve(counts.size());
  for (const auto& [token, count] : counts) {
    dist.emplace_back(token,
                      static_cast<double>(count) / static_cast<double>(total));
  }
  return dist;
}

}  // namespace

MarkovModel fit_markov(const std::vector<TokenSequence>& corpus, int order) {
  if (order < 1) throw Error("Markov order must be >= 1");
  if (corpus.empty()) {
    throw CorpusTooShort("cannot fit a Markov model on an empty corpus");
  }

  std::map<std::string, std::size_t> initial_counts;
  std::map<std::string, std::map<std::string, std::size_t>> transition_counts;
  for (const TokenSequence& seq : corpus) {
    if (seq.tokens.size() <= static_cast<std::size_t>(order)) {
      throw CorpusTooShort("sequence of length " +
                           std::to_string(seq.tokens.size()) +
                           " is too short for order " + std::to_string(order));
    }
    ++initial_counts[join_context(seq.tokens, 0, order)];
    for (std::size_t i = order; i < seq.tokens.size(); ++i) {
      const std::string context = join_context(seq.tokens, i - order, order);
      ++transition_counts[context][seq.tokens[i]];
    }
  }

  MarkovModel model;
  model.order = order;
  model.initial = normalize(initial_counts);
  for (const auto& [context, counts] : transition_counts) {
    model.transitions.emplace(context, normalize(counts));
  }
  return model;
}

std::string sample_categorical(const Categorical& dist, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& [token, prob] : dist) {
    acc += prob;
    if (u < acc) return token;
  }
  return dist.back().first;  // numerical tail
}

TokenSequence sample_markov(const MarkovModel& model, std::size_t length,
                            Rng& rng) {
  if (model.empty()) throw EmptyModel("Markov model has no states");

  TokenSequence seq;
  seq.tokens.reserve(length);

  auto emit_context = [&](const std::string& context) {
    std::size_t start = 0;
    while (start < context.size() && seq.tokens.size() < length) {
      const std::size_t space = context.find(' ', start);
      const std::size_t end = space == std::string::npos ? context.size() : space;
      seq.tokens.push_back(context.substr(start, end - start));
      start = end + 1;
    }
  };

  emit_context(sample_categorical(model.initial, rng));
  while (seq.tokens.size() < length) {
    std::string context = seq.tokens[seq.tokens.size() - model.order];
    for (int j = 1; j < model.order; ++j) {
      context += ' ';
      context += seq.tokens[seq.tokens.size() - model.order + j];
    }
    const auto it = model.transitions.find(context);
    if (it == model.transitions.end()) {
      // Dead-end context: back off to the initial distribution.
      emit_context(sample_categorical(model.initial, rng));
      continue;
    }
    seq.tokens.push_back(sample_categorical(it->second, rng));
  }

  for (const std::string& token : seq.tokens) seq.source_len += token.size();
  return seq;
}

}  // namespace ynote
