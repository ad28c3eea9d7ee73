#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ynote/error.hpp"
#include "ynote/note.hpp"
#include "ynote/rng.hpp"

namespace ynote {

struct CorpusTooShort : Error {
  explicit CorpusTooShort(const std::string& msg) : Error(msg) {}
};
struct EmptyModel : Error {
  explicit EmptyModel(const std::string& msg) : Error(msg) {}
};

// Categorical next-token distribution conditioned on the previous `order`
// tokens. Contexts are tokens joined by a single space; distributions are
// kept sorted by token so sampling order is deterministic.
using Categorical = std::vector<std::pair<std::string, double>>;

struct MarkovModel {
  int order = 1;
  std::map<std::string, Categorical> transitions;  // context -> next token
  Categorical initial;                             // starting contexts

  bool empty() const { return initial.empty(); }
};

// Maximum-likelihood transition estimates from observed context -> next
// counts. Contexts never observed are simply absent; generation backs off
// to the initial distribution when it reaches one. Requires a non-empty
// corpus with every sequence longer than `order` (CorpusTooShort).
MarkovModel fit_markov(const std::vector<TokenSequence>& corpus, int order);

// Samples `length` tokens. Starts from the initial distribution; a context
// with no outgoing transitions restarts from the initial distribution
// (emitting the fresh context's tokens).
TokenSequence sample_markov(const MarkovModel& model, std::size_t length,
                            Rng& rng);

std::string sample_categorical(const Categorical& dist, Rng& rng);

}  // namespace ynote
