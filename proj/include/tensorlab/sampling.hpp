#pragma once

// Seeded random instances for experiments and property tests. Results are
// reproducible for a fixed seed on a fixed standard library.

#include <cstddef>
#include <random>
#include <vector>

#include "tensorlab/universality.hpp"
#include "tensorlab/words.hpp"

namespace tensorlab::sampling {

using Rng = std::mt19937_64;

/// Uniform table entries; each entry is undefined with probability
/// `undefined_rate`.
CayleyOp random_op(Rng& rng, CarrierPtr const& carrier, double undefined_rate = 0.0);

struct PairInstance {
  CayleyOp alpha;
  CayleyOp beta;
  RuleSystemPtr system;
};

/// |X|, |Y| in 1..max_size and rules from two random operations.
PairInstance random_pair_system(Rng& rng, std::size_t max_size = 3,
                                double undefined_rate = 0.5);

/// Explicit relations whose sides both have length min_side..max_side.
RuleSystemPtr random_long_relations(Rng& rng, std::size_t max_size = 3,
                                    std::size_t relations = 6,
                                    std::size_t min_side = 2,
                                    std::size_t max_side = 3);

/// Total associative commutative tables on a carrier of size <= 3.
std::vector<CayleyOp> commutative_semigroups(CarrierPtr const& c);

/// Every g : X x Y -> U whose rule sides fold to equal values under δ.
std::vector<BiMap> respecting_bimaps(RuleSystem const& sys, CarrierPtr const& U,
                                     CayleyOp const& delta);

struct UniversalityInstance {
  CarrierPtr X, Y, U;
  CayleyOp alpha, beta, delta;
  AlphabetPtr alphabet;
};

/// |X|, |Y|, |U| in 1..3, α and β total, δ associative and commutative.
UniversalityInstance random_universality(Rng& rng);

template <class T>
T const& pick(Rng& rng, std::vector<T> const& xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

}  // namespace tensorlab::sampling
