#include "tensorlab/sampling.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace tensorlab::sampling {

CayleyOp random_op(Rng& rng, CarrierPtr const& carrier, double undefined_rate) {
  std::size_t const n = carrier->size();
  std::uniform_int_distribution<Elem> value(0, static_cast<Elem>(n - 1));
  std::bernoulli_distribution hole(undefined_rate);
  std::vector<Elem> t(n * n);
  for (auto& e : t) {
    e = hole(rng) ? undefined : value(rng);
  }
  return CayleyOp(carrier, std::move(t), "random");
}

PairInstance random_pair_system(Rng& rng, std::size_t max_size, double undefined_rate) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  auto X = make_range_carrier("X", size(rng));
  auto Y = make_range_carrier("Y", size(rng));
  auto alpha = random_op(rng, X, undefined_rate);
  auto beta = random_op(rng, Y, undefined_rate);
  auto sys = std::make_shared<RuleSystem const>(
      compile_from_binary_ops(make_alphabet({X, Y}), alpha, beta));
  return {std::move(alpha), std::move(beta), std::move(sys)};
}

RuleSystemPtr random_long_relations(Rng& rng, std::size_t max_size,
                                    std::size_t relations, std::size_t min_side,
                                    std::size_t max_side) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  auto X = make_range_carrier("X", size(rng));
  auto Y = make_range_carrier("Y", size(rng));
  auto alphabet = make_alphabet({X, Y});
  std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(alphabet->size() - 1));
  std::uniform_int_distribution<std::size_t> side(min_side, max_side);
  std::vector<Relation> rels;
  for (std::size_t i = 0; i < relations; ++i) {
    Relation r;
    for (std::size_t j = side(rng); j > 0; --j) {
      r.left.push_back(letter(rng));
    }
    for (std::size_t j = side(rng); j > 0; --j) {
      r.right.push_back(letter(rng));
    }
    rels.push_back(std::move(r));
  }
  return std::make_shared<RuleSystem const>(
      compile_explicit(alphabet, rels, "random long relations"));
}

std::vector<CayleyOp> commutative_semigroups(CarrierPtr const& c) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<std::vector<Elem>>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(c->size());
  if (it == cache.end()) {
    std::vector<std::vector<Elem>> tables;
    for_each_op(c, [](LawReport const& r) { return r.associative && r.commutative; },
                [&](CayleyOp const& op) { tables.push_back(op.table()); });
    it = cache.emplace(c->size(), std::move(tables)).first;
  }
  std::vector<CayleyOp> out;
  for (auto const& t : it->second) {
    out.emplace_back(c, t);
  }
  return out;
}

std::vector<BiMap> respecting_bimaps(RuleSystem const& sys, CarrierPtr const& U,
                                     CayleyOp const& delta) {
  std::vector<BiMap> out;
  for_each_bimap(sys.alphabet->factor_ptr(0), sys.alphabet->factor_ptr(1), U,
                 [&](BiMap const& g) {
                   if (respects_rules(g, delta, sys)) {
                     out.push_back(g);
                   }
                 });
  return out;
}

UniversalityInstance random_universality(Rng& rng) {
  std::uniform_int_distribution<std::size_t> size(1, 3);
  auto X = make_range_carrier("X", size(rng));
  auto Y = make_range_carrier("Y", size(rng));
  auto U = make_range_carrier("U", size(rng));
  auto alpha = random_op(rng, X);
  auto beta = random_op(rng, Y);
  auto delta = pick(rng, commutative_semigroups(U));
  return {X, Y, U, alpha, beta, delta, make_alphabet({X, Y})};
}

}  // namespace tensorlab::sampling
