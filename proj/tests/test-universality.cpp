#include <random>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "tensorlab/sampling.hpp"
#include "tensorlab/universality.hpp"

using namespace tensorlab;

namespace {
  TensorPtr pair_tensor(CayleyOp const& alpha, CayleyOp const& beta,
                        std::size_t L = 3, std::size_t k = 1) {
    auto a = make_alphabet({alpha.carrier_ptr(), beta.carrier_ptr()});
    return build_tensor(std::make_shared<RuleSystem const>(
                            compile_from_binary_ops(a, alpha, beta)),
                        L, k);
  }

  // Partial tables written with -1 for holes.
  CayleyOp table(CarrierPtr c, std::vector<int> const& t) {
    std::vector<Elem> out;
    for (int v : t) {
      out.push_back(v < 0 ? undefined : static_cast<Elem>(v));
    }
    return CayleyOp(std::move(c), out);
  }
}  // namespace

TEST_CASE("is_homomorphism", "[universality]") {
  auto z4 = ops::mod_add(4);
  auto z2 = ops::mod_add(2);
  REQUIRE(is_homomorphism(FiniteMap::identity(4), z4, z4).holds);
  REQUIRE(is_homomorphism(FiniteMap(2, {0, 1, 0, 1}, "parity"), z4, z2).holds);

  auto z3 = ops::mod_add(3);
  auto r = is_homomorphism(FiniteMap::constant(3, 3, 1), z3, z3);
  REQUIRE(!r.holds);
  REQUIRE(r.witness);
  REQUIRE(z3(1, 1) != 1);
  REQUIRE_THROWS_AS(is_homomorphism(FiniteMap::identity(3), z4, z4), ShapeMismatch);
}

TEST_CASE("is_commuting_bihomomorphism", "[universality]") {
  auto plus = ops::mod_add(2);
  auto Z2 = plus.carrier_ptr();
  SECTION("AND over (Z2,+)") {
    auto g = BiMap::from_function(Z2, Z2, Z2, [](Elem x, Elem y) { return x & y; });
    // The eight distribution instances, by hand.
    int ok = 0;
    for (Elem x = 0; x < 2; ++x) {
      for (Elem xp = 0; xp < 2; ++xp) {
        for (Elem y = 0; y < 2; ++y) {
          ok += (((x + xp) % 2) & y) == (((x & y) + (xp & y)) % 2) ? 1 : 0;
        }
      }
    }
    REQUIRE(ok == 8);
    auto r = is_commuting_bihomomorphism(g, plus, plus, plus);
    REQUIRE(r.passed());
    REQUIRE(r.fold_ready());
    REQUIRE(r.image == std::vector<Elem>{0, 1});
  }
  SECTION("constant to an idempotent") {
    auto mx = ops::max(Z2);
    auto g = BiMap::from_function(Z2, Z2, Z2, [](Elem, Elem) { return 1; });
    REQUIRE(is_commuting_bihomomorphism(g, plus, plus, mx).passed());
  }
  SECTION("δ not commutative on the image") {
    auto lp = ops::left_projection(Z2);
    auto g = BiMap::from_function(Z2, Z2, Z2, [](Elem x, Elem) { return x; });
    auto r = is_commuting_bihomomorphism(g, lp, lp, lp);
    REQUIRE(!r.image_commutative);
    REQUIRE(!r.passed());
    auto [a, b] = *r.commutativity_witness;
    REQUIRE(lp(a, b) != lp(b, a));
  }
  SECTION("distribution failure carries a witness") {
    auto g = BiMap::from_function(Z2, Z2, Z2, [](Elem x, Elem y) { return x | y; });
    auto r = is_commuting_bihomomorphism(g, plus, plus, plus);
    REQUIRE(!r.left_distributive);
    auto [x, xp, y] = *r.left_witness;
    REQUIRE(g(plus(x, xp), y) != plus(g(x, y), g(xp, y)));
  }
}

TEST_CASE("factor_through_tensor examples", "[universality]") {
  auto plus = ops::mod_add(2);
  auto Z2 = plus.carrier_ptr();
  SECTION("AND through (Z2,+) ⊗ (Z2,+)") {
    auto t = pair_tensor(plus, plus);
    auto g = BiMap::from_function(Z2, Z2, Z2, [](Elem x, Elem y) { return x & y; });
    auto f = factor_through_tensor(g, *t, plus);
    REQUIRE(f.holds());
    Elem const one_one[] = {1, 1};
    REQUIRE(f.h(t->iota(one_one)) == 1);
    REQUIRE(f.reachable == t->class_count());
  }
  SECTION("ι into the tensor's own classes gives the identity") {
    auto t = pair_tensor(plus, plus);
    std::size_t const n = t->class_count();
    auto classes = make_range_carrier("C", n);
    std::vector<Elem> gamma(n * n);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t d = 0; d < n; ++d) {
        gamma[c * n + d] = static_cast<Elem>(*t->gamma(c, d));
      }
    }
    CayleyOp delta(classes, gamma, "γ");
    auto g = BiMap::from_function(Z2, Z2, classes, [&](Elem x, Elem y) {
      Elem const tuple[] = {x, y};
      return static_cast<Elem>(t->iota(tuple));
    });
    auto f = factor_through_tensor(g, *t, delta);
    REQUIRE(f.holds());
    REQUIRE(f.h == FiniteMap::identity(n));
  }
  SECTION("δ commutative, not associative on the image") {
    auto X = make_range_carrier("X", 2);
    auto Y = make_range_carrier("Y", 1);
    auto U = make_range_carrier("U", 3);
    auto alpha = table(X, {0, -1, -1, 1});
    auto beta = table(Y, {0});
    // 0·1 = 2, 2·1 = 1: (0·1)·1 = 1 but 0·(1·1) = 2.
    auto delta = table(U, {0, 2, 2,
                           2, 1, 1,
                           2, 1, 2});
    auto g = BiMap(X, Y, U, {0, 1});
    auto laws = is_commuting_bihomomorphism(g, alpha, beta, delta);
    REQUIRE(laws.passed());
    REQUIRE(!laws.image_associative);
    auto t = pair_tensor(alpha, beta);
    try {
      factor_through_tensor(g, *t, delta);
      FAIL("expected WellDefinednessViolation");
    } catch (WellDefinednessViolation const& e) {
      auto members = t->classes().members(e.class_id());
      bool three = false;
      for (std::size_t m : members) {
        three = three || t->universe().length(m) == 3;
      }
      REQUIRE(three);
      REQUIRE(e.first_member() != e.second_member());
    }
  }
  SECTION("a map that ignores the rules is rejected") {
    auto t = pair_tensor(plus, plus);
    auto g = BiMap::from_function(Z2, Z2, Z2, [](Elem x, Elem y) { return x | y; });
    REQUIRE_THROWS_AS(factor_through_tensor(g, *t, plus), PreconditionFailed);
  }
}

TEST_CASE("factorization through binary-op tensors", "[universality][property]") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 15; ++i) {
    auto inst = sampling::random_universality(rng);
    auto sys = std::make_shared<RuleSystem const>(
        compile_from_binary_ops(inst.alphabet, inst.alpha, inst.beta));
    auto gs = sampling::respecting_bimaps(*sys, inst.U, inst.delta);
    REQUIRE(!gs.empty());
    auto const& g = sampling::pick(rng, gs);
    REQUIRE(is_commuting_bihomomorphism(g, inst.alpha, inst.beta, inst.delta).fold_ready());
    auto t = build_tensor(sys, 3, 1);
    auto f = factor_through_tensor(g, *t, inst.delta);
    REQUIRE(f.well_defined);
    REQUIRE(f.triangle);
    REQUIRE(f.homomorphism);
    REQUIRE(f.unique);
  }
}

TEST_CASE("factorization through generator and op-set tensors",
          "[universality][property]") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 6; ++i) {
    auto inst = sampling::random_universality(rng);
    auto fine_sys = std::make_shared<RuleSystem const>(
        compile_from_binary_ops(inst.alphabet, inst.alpha, inst.beta));
    SECTION("generators from α and β") {
      auto coarse_sys = std::make_shared<RuleSystem const>(compile_from_generators(
          inst.alphabet, generator_from_op(inst.alpha), generator_from_op(inst.beta)));
      auto gs = sampling::respecting_bimaps(*coarse_sys, inst.U, inst.delta);
      auto const& g = sampling::pick(rng, gs);
      auto r = refinement(build_tensor(fine_sys, 3, 1), build_tensor(coarse_sys, 3, 1));
      REQUIRE(r.holds());
      REQUIRE(factor_through_refinement(g, r, inst.delta).holds());
    }
    SECTION("operation sets") {
      auto alpha2 = oracle::random_op(rng, inst.X);
      auto beta2 = oracle::random_op(rng, inst.Y);
      auto coarse_sys = std::make_shared<RuleSystem const>(compile_from_op_sets(
          inst.alphabet, {inst.alpha, alpha2}, {inst.beta, beta2}));
      auto gs = sampling::respecting_bimaps(*coarse_sys, inst.U, inst.delta);
      auto const& g = sampling::pick(rng, gs);
      auto r = refinement(build_tensor(fine_sys, 3, 1), build_tensor(coarse_sys, 3, 1));
      REQUIRE(factor_through_refinement(g, r, inst.delta).holds());
    }
  }
}

TEST_CASE("free_fold", "[universality]") {
  auto z3 = ops::mod_add(3);
  SECTION("one letter into (Z3,+)") {
    auto ff = free_fold(FiniteMap(3, {1}), z3, 3);
    Letter const aaa[] = {0, 0, 0};
    REQUIRE(ff.values[ff.index_of(aaa)] == 0);
    REQUIRE(ff.holds());
  }
  SECTION("identity on (Z2,+) is onto") {
    auto ff = free_fold(FiniteMap::identity(2), ops::mod_add(2));
    REQUIRE(ff.surjective);
    REQUIRE(ff.holds());
  }
  SECTION("order matters in the free semigroup") {
    auto lp = ops::left_projection(make_range_carrier("S", 2));
    auto ff = free_fold(FiniteMap::identity(2), lp, 2);
    Letter const ab[] = {0, 1};
    Letter const ba[] = {1, 0};
    REQUIRE(ff.values[ff.index_of(ab)] == 0);
    REQUIRE(ff.values[ff.index_of(ba)] == 1);
  }
  SECTION("perturbing one long word breaks the homomorphism law") {
    auto ff = free_fold(FiniteMap(3, {1, 2}), z3, 3);
    for (std::size_t i = 0; i < ff.words.size(); ++i) {
      if (ff.words[i].size() < 2) {
        continue;
      }
      for (Elem v = 0; v < 3; ++v) {
        if (v == ff.values[i]) {
          continue;
        }
        auto bent = ff.values;
        bent[i] = v;
        REQUIRE(!respects_concatenation(ff, bent, z3));
      }
    }
  }
  SECTION("rejects non-associative operations") {
    REQUIRE_THROWS_AS(free_fold(FiniteMap::identity(8), ops::affine(2, 2, 7)),
                      PreconditionFailed);
    auto c = make_range_carrier("S", 2);
    CayleyOp nand(c, {1, 1, 1, 0});
    REQUIRE_THROWS_AS(free_fold(FiniteMap::identity(2), nand), NotAssociative);
  }
}

TEST_CASE("ker_factorization", "[universality]") {
  auto z4 = ops::mod_add(4);
  auto z2 = ops::mod_add(2);
  SECTION("parity") {
    auto k = ker_factorization(FiniteMap(2, {0, 1, 0, 1}), z4, z2);
    REQUIRE(k.holds());
    REQUIRE(k.kernel.class_count == 2);
    REQUIRE(k.quotient.size() == 2);
    REQUIRE(k.mono == FiniteMap::identity(2));
  }
  SECTION("injective map: kernel is equality") {
    auto k = ker_factorization(FiniteMap::identity(4), z4, z4);
    REQUIRE(k.holds());
    REQUIRE(k.kernel.class_count == 4);
    REQUIRE(k.quotient.same_table(z4) == false);  // different carrier
    REQUIRE(k.quotient.table() == z4.table());
  }
  SECTION("into a one-element semigroup") {
    auto one = ops::mod_add(1);
    auto k = ker_factorization(FiniteMap::constant(4, 1, 0), z4, one);
    REQUIRE(k.holds());
    REQUIRE(k.kernel.class_count == 1);
  }
  SECTION("non-homomorphisms are rejected") {
    REQUIRE_THROWS_AS(ker_factorization(FiniteMap(2, {0, 1, 1, 0}), z4, z2),
                      NotAHomomorphism);
  }
  SECTION("diagram commutes for every homomorphism Z4 -> Z2, Z6 -> Z3") {
    int homs = 0;
    for (auto [s, t] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 3}, {3, 3}}) {
      auto opS = ops::mod_add(s);
      auto opT = ops::mod_add(t);
      std::vector<Elem> m(s, 0);
      while (true) {
        FiniteMap f(t, m);
        if (is_homomorphism(f, opS, opT).holds) {
          ++homs;
          REQUIRE(ker_factorization(f, opS, opT).holds());
        }
        std::size_t i = s;
        while (i > 0 && m[i - 1] + 1 == t) {
          m[--i] = 0;
        }
        if (i == 0) {
          break;
        }
        ++m[i - 1];
      }
    }
    REQUIRE(homs == 2 + 3 + 3);
  }
  SECTION("check_congruence finds a witness") {
    auto w = check_congruence(z4, {0, 0, 1, 1});
    REQUIRE(!w.is_congruence);
    auto [a, b, c] = *w.witness;
    REQUIRE(w.class_of[z4(a, c)] != w.class_of[z4(b, c)]);
  }
}

TEST_CASE("cayley_embed", "[universality]") {
  SECTION("(Z2,+) has a neutral element") {
    auto e = cayley_embed(ops::mod_add(2));
    REQUIRE(!e.adjoined_identity);
    REQUIRE(e.monoid_size == 2);
    REQUIRE(e.translations[0] == std::vector<Elem>{0, 1});
    REQUIRE(e.translations[1] == std::vector<Elem>{1, 0});
    REQUIRE(e.holds());
  }
  SECTION("left-zero semigroup needs the adjoined unit") {
    auto e = cayley_embed(ops::left_projection(make_carrier("S", {"a", "b"})));
    REQUIRE(e.adjoined_identity);
    REQUIRE(e.monoid_size == 3);
    REQUIRE(e.translations[0] == std::vector<Elem>{0, 0, 0});
    REQUIRE(e.translations[1] == std::vector<Elem>{1, 1, 1});
    REQUIRE(e.holds());
  }
  SECTION("monoids send the unit to the identity") {
    auto c3 = make_range_carrier("S", 3);
    for (auto const& op : {ops::mod_add(c3), ops::max(c3), ops::mod_mul(c3)}) {
      auto e = cayley_embed(op);
      REQUIRE(e.neutral);
      std::vector<Elem> id{0, 1, 2};
      REQUIRE(e.translations[*e.neutral] == id);
    }
  }
  SECTION("all eight 2-element semigroups embed") {
    auto sg = enumerate_ops(make_range_carrier("S", 2),
                            [](LawReport const& r) { return r.associative; });
    REQUIRE(sg.size() == 8);
    for (auto const& op : sg) {
      REQUIRE(cayley_embed(op).holds());
    }
  }
  SECTION("rejects non-associative operations") {
    REQUIRE_THROWS_AS(cayley_embed(CayleyOp(make_range_carrier("S", 2), {1, 1, 1, 0})),
                      NotAssociative);
  }
}

TEST_CASE("cartesian_pairing", "[universality]") {
  SECTION("diagonal") {
    auto p = cartesian_pairing(FiniteMap::identity(3), FiniteMap::identity(3));
    REQUIRE(p.h.table == std::vector<Elem>{0, 4, 8});
    REQUIRE(p.projections_hold);
    REQUIRE(p.unique);
    REQUIRE(p.exhaustive);
    REQUIRE(p.candidates_checked == 729);
  }
  SECTION("constants") {
    auto p = cartesian_pairing(FiniteMap::constant(2, 3, 2), FiniteMap::constant(2, 2, 1));
    REQUIRE(p.h.table == std::vector<Elem>{5, 5});
    REQUIRE(p.unique);
  }
  SECTION("shape mismatch") {
    REQUIRE_THROWS_AS(cartesian_pairing(FiniteMap::identity(2), FiniteMap::identity(3)),
                      ShapeMismatch);
  }
}
