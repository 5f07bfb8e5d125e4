#include <algorithm>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "tensorlab/tensor.hpp"

using namespace tensorlab;

namespace {
  RuleSystemPtr single_set_system(CayleyOp const& op) {
    auto a = make_alphabet({op.carrier_ptr()});
    std::vector<Relation> rels;
    for (Elem x = 0; x < op.size(); ++x) {
      for (Elem y = 0; y < op.size(); ++y) {
        if (op.defined(x, y)) {
          rels.push_back({{x, y}, {op(x, y)}});
        }
      }
    }
    return std::make_shared<RuleSystem const>(compile_explicit(a, rels));
  }

  RuleSystemPtr pair_system(CayleyOp const& alpha, CayleyOp const& beta) {
    auto a = make_alphabet({alpha.carrier_ptr(), beta.carrier_ptr()});
    return std::make_shared<RuleSystem const>(
        compile_from_binary_ops(a, alpha, beta));
  }

  RuleSystemPtr random_pair_system(std::mt19937_64& rng, double holes = 0.3) {
    std::uniform_int_distribution<std::size_t> size(1, 3);
    auto X = make_range_carrier("X", size(rng));
    auto Y = make_range_carrier("Y", size(rng));
    return pair_system(oracle::random_op(rng, X, holes),
                       oracle::random_op(rng, Y, holes));
  }
}  // namespace

TEST_CASE("build_tensor examples", "[tensor]") {
  SECTION("(Z2,+) x (Z2,+), L=3, k=1: singletons as the naive oracle says") {
    auto sys = pair_system(ops::mod_add(2), ops::mod_add(2));
    auto t = build_tensor(sys, 3, 1);
    oracle::NaiveClosure naive(*sys, 4);
    for (Letter i = 0; i < 4; ++i) {
      for (Letter j = 0; j < 4; ++j) {
        REQUIRE((t->iota(i) == t->iota(j))
                == naive.related(naive.index_of({i}), naive.index_of({j})));
      }
    }
    // (1,0) ≈ (1,0)(1,0) ≈ (0,0): x ⊗ 0 collapses as in an additive tensor.
    auto const& a = sys->alphabet;
    auto chain = t->classes().chain_within(a->encode(std::vector<Elem>{1, 0}),
                                           a->encode(std::vector<Elem>{0, 0}));
    REQUIRE(chain.size() == 3);
    REQUIRE(validate_chain(chain, *sys));
    std::set<std::size_t> singles;
    for (Letter l = 0; l < 4; ++l) {
      singles.insert(t->iota(l));
    }
    REQUIRE(singles.size() == 2);
    REQUIRE(t->iota(std::vector<Elem>{1, 1}) != t->iota(std::vector<Elem>{0, 0}));
  }
  SECTION("empty rules: classes are words and γ is concatenation") {
    auto a = make_alphabet({make_range_carrier("X", 2), make_range_carrier("Y", 2)});
    auto t = build_tensor(std::make_shared<RuleSystem const>(empty_system(a)), 2, 1);
    REQUIRE(t->class_count() == t->universe().size());
    for (std::size_t c = 0; c < t->stratum_class_count(); ++c) {
      for (std::size_t d = 0; d < t->stratum_class_count(); ++d) {
        auto g = t->gamma(c, d);
        auto w = concat(t->representative(c), t->representative(d));
        if (w.length() <= 3) {
          REQUIRE(g);
          REQUIRE(t->representative(*g) == w);
        } else {
          REQUIRE(!g);
        }
      }
    }
  }
  SECTION("relations with both sides of length >= 2 keep ι injective") {
    std::mt19937_64 rng(3);
    auto a = make_alphabet({make_range_carrier("X", 2), make_range_carrier("Y", 3)});
    std::uniform_int_distribution<Letter> letter(0, 5);
    std::vector<Relation> rels;
    for (int i = 0; i < 6; ++i) {
      rels.push_back({{letter(rng), letter(rng)}, {letter(rng), letter(rng), letter(rng)}});
    }
    auto t = build_tensor(std::make_shared<RuleSystem const>(compile_explicit(a, rels)), 3, 1);
    REQUIRE(analyze_iota(*t).injective_within_cap);
  }
  SECTION("ι sends a tuple to the class of its length-1 word") {
    auto t = build_tensor(pair_system(ops::max(make_range_carrier("X", 3)),
                                      ops::mod_add(2)), 2, 1);
    for (Elem x = 0; x < 3; ++x) {
      for (Elem y = 0; y < 2; ++y) {
        Elem const tuple[] = {x, y};
        Letter const l = t->alphabet().encode(tuple);
        REQUIRE(t->iota(tuple) == t->class_of(Word::single(t->alphabet_ptr(), l)));
      }
    }
  }
}

TEST_CASE("γ is well defined, commutative and associative", "[tensor][property]") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 12; ++i) {
    auto t = build_tensor(random_pair_system(rng), 3, 1);
    auto const& wd = t->well_definedness();
    REQUIRE(wd.exhaustive);
    REQUIRE(wd.holds());
    REQUIRE(wd.mismatches == wd.settled_by_slack + wd.settled_by_lifting);
    for (auto const& art : wd.examples) {
      if (art.how == CapArtifact::Settled::lifted_chain) {
        REQUIRE(validate_chain(art.chain, t->system()));
      }
    }
    auto laws = check_gamma_laws(*t);
    REQUIRE(laws.commutativity_failures == 0);
    REQUIRE(laws.holds());
  }
}

TEST_CASE("cap artifacts are settled by wider slack", "[tensor]") {
  std::mt19937_64 rng(1);
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    auto t = build_tensor(random_pair_system(rng), 3, 1);
    auto const& wd = t->well_definedness();
    mismatches += wd.mismatches;
    for (auto const& art : wd.examples) {
      REQUIRE(t->class_of(art.left) != t->class_of(art.right));
      auto wide = t->wider(art.slack - t->slack());
      REQUIRE(wide->class_of_word(art.left) == wide->class_of_word(art.right));
    }
  }
  REQUIRE(mismatches > 0);
}

TEST_CASE("analyze_iota", "[tensor]") {
  SECTION("left projection merges singletons") {
    auto sys = single_set_system(ops::left_projection(make_range_carrier("X", 2)));
    auto t = build_tensor(sys, 3, 1);
    auto r = analyze_iota(*t);
    REQUIRE(!r.injective_within_cap);
    REQUIRE(r.surjective_within_cap);
    REQUIRE(r.merged.size() == 1);
    auto const& chain = r.merged[0].chain;
    REQUIRE(validate_chain(chain, *sys));
    REQUIRE(chain.front() == Word::single(sys->alphabet, 0));
    REQUIRE(chain.back() == Word::single(sys->alphabet, 1));
  }
  SECTION("+ mod 3: fold invariant on every class, ι bijective") {
    auto op = ops::mod_add(3);
    for (std::size_t L : {2, 3, 4}) {
      auto t = build_tensor(single_set_system(op), L, 1);
      auto r = analyze_iota(*t);
      REQUIRE(r.injective_within_cap);
      REQUIRE(r.surjective_within_cap);
      auto const& c = t->classes();
      for (std::size_t cls = 0; cls < c.class_count(); ++cls) {
        auto rep = t->representative_letters(cls);
        Elem const v = oracle::fold(op, Letters(rep.begin(), rep.end()));
        for (std::size_t m : c.members(cls)) {
          auto w = t->universe().word(m);
          REQUIRE(oracle::fold(op, Letters(w.begin(), w.end())) == v);
        }
      }
    }
  }
  SECTION("affine 2x+2y capped at 16: not injective, in-range words reach ι") {
    auto op = ops::affine(2, 2, 16);
    auto t = build_tensor(single_set_system(op), 3, 1);
    auto r = analyze_iota(*t);
    REQUIRE(!r.injective_within_cap);
    for (auto const& m : r.merged) {
      REQUIRE(validate_chain(m.chain, t->system()));
    }
    // A word whose left fold stays in range is equivalent to that value.
    auto const& u = t->universe();
    for (std::size_t i = 0; i < u.stratum_size(); ++i) {
      auto w = u.word(i);
      Elem acc = w[0];
      for (std::size_t j = 1; j < w.size() && acc != undefined; ++j) {
        acc = op(acc, w[j]);
      }
      if (acc != undefined) {
        REQUIRE(t->representative_length(t->classes().class_of(i)) == 1);
      }
    }
  }
}

TEST_CASE("entangled", "[tensor]") {
  SECTION("empty rules: every class of length >= 2") {
    auto a = make_alphabet({make_range_carrier("E", 2)});
    auto t = build_tensor(std::make_shared<RuleSystem const>(empty_system(a)), 3, 0);
    auto e = entangled(*t);
    REQUIRE(e.size() == 3 + 4);
    for (std::size_t c : e) {
      REQUIRE(t->representative_length(c) >= 2);
    }
  }
  SECTION("a total single-set operation leaves nothing entangled") {
    auto c3 = make_range_carrier("X", 3);
    for (auto const& op : {ops::mod_add(3), ops::left_projection(c3), ops::max(c3)}) {
      REQUIRE(entangled(*build_tensor(single_set_system(op), 3, 1)).empty());
    }
  }
  SECTION("(1,0) γ (0,1) under + mod 2 on both factors reaches (1,0)") {
    auto sys = pair_system(ops::mod_add(2), ops::mod_add(2));
    auto t = build_tensor(sys, 3, 1);
    auto const& a = sys->alphabet;
    auto w = parse_word(a, "(1,0) γ (0,1)");
    REQUIRE(t->class_of(w) == t->class_of(parse_word(a, "(1,0)")));
    auto v = equiv_search(w, parse_word(a, "(1,0)"), *sys);
    REQUIRE(v.proven());
    REQUIRE(validate_chain(v.chain, *sys));
    REQUIRE(entangled(*t).empty());
  }
  SECTION("(1,0) γ (0,1) under max on both factors is entangled") {
    auto c = make_range_carrier("X", 2);
    auto sys = pair_system(ops::max(c), ops::max(c));
    auto t = build_tensor(sys, 3, 1);
    std::size_t cls = t->class_of(parse_word(sys->alphabet, "(1,0) γ (0,1)"));
    for (std::size_t m : t->classes().members(cls)) {
      REQUIRE(t->universe().length(m) >= 2);
    }
    auto e = entangled(*t);
    REQUIRE(e == std::vector<std::size_t>{cls});
    REQUIRE(!analyze_iota(*t).surjective_within_cap);
  }
}

TEST_CASE("refinement", "[tensor]") {
  auto X = make_range_carrier("X", 2);
  auto Y = make_range_carrier("Y", 2);
  auto a = make_alphabet({X, Y});
  auto alpha = ops::mod_add(X);
  auto beta = ops::max(Y);
  auto perm = build_tensor(std::make_shared<RuleSystem const>(empty_system(a)), 3, 1);
  auto ops_t = build_tensor(std::make_shared<RuleSystem const>(
                                compile_from_binary_ops(a, alpha, beta)), 3, 1);
  auto gen_t = build_tensor(std::make_shared<RuleSystem const>(compile_from_generators(
                                a, generator_from_op(alpha), generator_from_op(beta))),
                            3, 1);

  SECTION("permutation-only into a binary-op system") {
    auto r = refinement(perm, ops_t);
    REQUIRE(r.holds());
    REQUIRE(r.map.size() == perm->class_count());
  }
  SECTION("binary ops into the generator system") {
    auto r = refinement(ops_t, gen_t);
    REQUIRE(r.holds());
    REQUIRE(gen_t->class_count() <= ops_t->class_count());
  }
  SECTION("identity") {
    auto r = refinement(ops_t, ops_t);
    REQUIRE(r.holds());
    for (std::size_t c = 0; c < r.map.size(); ++c) {
      REQUIRE(r.map[c] == c);
    }
  }
  SECTION("not nested") {
    REQUIRE_THROWS_AS(refinement(gen_t, perm), RuleSetNotNested);
  }
  SECTION("maps compose") {
    auto ab = refinement(perm, ops_t);
    auto bc = refinement(ops_t, gen_t);
    auto ac = refinement(perm, gen_t);
    for (std::size_t c = 0; c < ac.map.size(); ++c) {
      REQUIRE(bc.map[ab.map[c]] == ac.map[c]);
    }
  }
}

TEST_CASE("refinements compose on random nested systems", "[tensor][property]") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 6; ++i) {
    auto X = make_range_carrier("X", 2);
    auto Y = make_range_carrier("Y", 2);
    auto a = make_alphabet({X, Y});
    auto op1 = oracle::random_op(rng, X);
    auto op2 = oracle::random_op(rng, X);
    auto b1 = oracle::random_op(rng, Y);
    auto small = build_tensor(std::make_shared<RuleSystem const>(
                                  compile_from_binary_ops(a, op1, b1)), 3, 1);
    auto mid = build_tensor(std::make_shared<RuleSystem const>(
                                compile_from_op_sets(a, {op1, op2}, {b1})), 3, 1);
    auto big = build_tensor(std::make_shared<RuleSystem const>(compile_from_op_sets(
                                a, {op1, op2}, {b1, oracle::random_op(rng, Y)})), 3, 1);
    auto ab = refinement(small, mid);
    auto bc = refinement(mid, big);
    auto ac = refinement(small, big);
    REQUIRE(ab.holds());
    REQUIRE(bc.holds());
    REQUIRE(ac.holds());
    for (std::size_t c = 0; c < ac.map.size(); ++c) {
      REQUIRE(bc.map[ab.map[c]] == ac.map[c]);
    }
  }
}

TEST_CASE("multiset_quotient", "[tensor]") {
  REQUIRE(multiset_quotient(make_range_carrier("E", 2), 3)->class_count() == 9);
  for (std::size_t L = 1; L <= 5; ++L) {
    REQUIRE(multiset_quotient(make_range_carrier("E", 1), L)->class_count() == L);
  }
  for (std::size_t s = 1; s <= 3; ++s) {
    for (std::size_t L = 1; L <= 4; ++L) {
      auto t = multiset_quotient(make_range_carrier("E", s), L);
      std::size_t expected = 0;
      for (std::size_t h = 1; h <= L; ++h) {
        std::uint64_t c = 1;  // C(s+h-1, h)
        for (std::size_t i = 1; i <= h; ++i) {
          c = c * (s + i - 1) / i;
        }
        expected += c;
      }
      REQUIRE(t->class_count() == expected);
      auto laws = check_gamma_laws(*t);
      REQUIRE(laws.exhaustive);
      REQUIRE(laws.commutativity_failures == 0);
      REQUIRE(laws.associativity_mismatches == 0);
    }
  }
}
