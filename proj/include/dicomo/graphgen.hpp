#pragma once

#include <cstdint>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"
#include "dicomo/rng.hpp"

namespace dicomo {

/// Uniform perfect matching of the m tails to the m heads: tails in fixed
/// order against a Fisher-Yates shuffle of the head slots.
Digraph pair_uniform(const BiDegreeSequence& seq, Rng& rng);

/// Rejection sampler for the uniform simple digraph with degree sequence
/// `seq`. Throws Errc::attempts_exhausted after max_attempts non-simple draws.
Digraph sample_simple(const BiDegreeSequence& seq, Rng& rng, std::uint64_t max_attempts);

/// Every vertex gets d out-edges with i.i.d. uniform targets (loops and
/// repeats allowed).
Digraph d_out_model(std::size_t n, std::uint32_t d, Rng& rng);

enum class BinomialVariant {
  independent, ///< each ordered pair independently with probability p
  oriented,    ///< each unordered pair with probability 2p, direction by fair coin
};

/// Simple digraph without self-loops. The oriented variant needs p <= 1/2.
Digraph binomial_digraph(std::size_t n, double p, BinomialVariant variant, Rng& rng);

} // namespace dicomo
