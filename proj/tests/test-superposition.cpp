#include <algorithm>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "tensorlab/superposition.hpp"

using namespace tensorlab;

namespace {
  bool brute_associative(CayleyOp const& op) {
    std::size_t const n = op.size();
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y) {
        for (Elem z = 0; z < n; ++z) {
          if (op(op(x, y), z) != op(x, op(y, z))) {
            return false;
          }
        }
      }
    }
    return true;
  }

  bool brute_commutative(CayleyOp const& op) {
    for (Elem x = 0; x < op.size(); ++x) {
      for (Elem y = 0; y < op.size(); ++y) {
        if (op(x, y) != op(y, x)) {
          return false;
        }
      }
    }
    return true;
  }

  std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
      v = v * (n - r + i) / i;
    }
    return v;
  }

  std::uint64_t index_of_table(std::vector<Elem> const& table, std::size_t n) {
    std::uint64_t i = 0;
    for (Elem v : table) {
      i = i * n + v;
    }
    return i;
  }
}  // namespace

TEST_CASE("build_superposition", "[superposition]") {
  SECTION("relations of (Z2,+)") {
    auto op = ops::mod_add(2);
    auto rel = relations_from_op(op);
    REQUIRE(rel.size() == 4);
    auto s = build_superposition(op.carrier_ptr(), rel, 3, 1);
    REQUIRE(s.tensor().alphabet().factor_count() == 1);
    // x γ y γ u ≈ α(x, y) γ u
    REQUIRE(s.tensor().class_of(s.word({1, 1, 0})) == s.tensor().class_of(s.word({0, 0})));
    REQUIRE(s.tensor().class_of(s.word({1, 1})) == s.iota(0));
    REQUIRE(s.iota(0) != s.iota(1));
  }
  SECTION("no relations: multisets") {
    for (std::size_t n = 1; n <= 3; ++n) {
      auto c = make_range_carrier("E", n);
      auto s = build_superposition(c, {}, 4, 0);
      std::uint64_t expected = 0;
      for (std::size_t h = 1; h <= 4; ++h) {
        expected += binomial(n + h - 1, h);
      }
      REQUIRE(s.tensor().stratum_class_count() == expected);
      REQUIRE(multiset_quotient(c, 4)->class_count() == expected);
    }
  }
  SECTION("two-factor alphabets are rejected") {
    auto op = ops::mod_add(2);
    auto a = make_alphabet({op.carrier_ptr(), op.carrier_ptr()});
    auto t = build_tensor(std::make_shared<RuleSystem const>(
                              compile_from_binary_ops(a, op, op)),
                          2, 0);
    REQUIRE_THROWS_AS(SuperpositionSpace(t), ShapeMismatch);
  }
}

TEST_CASE("(2+1)-relation template on K x X", "[superposition]") {
  auto K = make_carrier("K", {"p", "q"});
  auto X = make_range_carrier("X", 2);
  auto Y = product_carrier(*K, *X);
  REQUIRE(Y->size() == 4);
  REQUIRE(Y->element(2) == "(q,0)");
  // (c1, x1) γ (c2, x2) <-> (c1, x1 xor x2) for every c2.
  std::vector<std::array<Elem, 3>> triples;
  for (Elem c1 = 0; c1 < 2; ++c1) {
    for (Elem x1 = 0; x1 < 2; ++x1) {
      for (Elem c2 = 0; c2 < 2; ++c2) {
        for (Elem x2 = 0; x2 < 2; ++x2) {
          triples.push_back({c1 * 2 + x1, c2 * 2 + x2, c1 * 2 + (x1 ^ x2)});
        }
      }
    }
  }
  auto rel = relations_from_triples(triples);
  for (auto const& r : rel) {
    REQUIRE(r.left.size() == 2);
    REQUIRE(r.right.size() == 1);
  }
  auto s = build_superposition(Y, rel, 3, 1);
  auto const& t = s.tensor();
  auto w = parse_word(t.alphabet_ptr(), "(p,1) | (q,1)");
  REQUIRE(w.length() == 2);
  // Both (p,0) and (q,0) are reachable from (p,1) γ (q,1).
  REQUIRE(t.class_of(w) == s.iota(0));
  REQUIRE(s.iota(0) == s.iota(2));
  auto eq = t.prove_equal(Word::single(t.alphabet_ptr(), 0), Word::single(t.alphabet_ptr(), 2));
  REQUIRE(eq.proven);
  REQUIRE(validate_chain(eq.chain, t.system()));
}

TEST_CASE("theorem21 truth table on two elements", "[superposition]") {
  auto tt = theorem21_experiment(2);
  REQUIRE(tt.rows.size() == 16);
  REQUIRE(tt.surjective == 16);

  auto c = make_range_carrier("X", 2);
  std::uint64_t assoc = 0;
  for (auto const& row : tt.rows) {
    CayleyOp op(c, row.table);
    bool const a = brute_associative(op);
    bool const m = brute_commutative(op);
    assoc += a ? 1 : 0;
    REQUIRE(row.associative == a);
    REQUIRE(row.commutative == m);
    REQUIRE(row.injective == (a && m));
    REQUIRE(row.surjective);
    if (!row.injective) {
      REQUIRE(row.merge);
      REQUIRE(validate_chain(row.merge->chain, compile_explicit(row.merge->chain.front().alphabet_ptr(), relations_from_op(op))));
    }
  }
  REQUIRE(assoc == 8);
  REQUIRE(tt.associative == 8);
  REQUIRE(tt.oracle_mismatches.empty());

  auto plus = tt.rows[index_of_table(ops::mod_add(2).table(), 2)];
  REQUIRE(plus.surjective);
  REQUIRE(plus.injective);

  auto left = ops::left_projection(c);
  auto lp = tt.rows[index_of_table(left.table(), 2)];
  REQUIRE(lp.associative);
  REQUIRE(!lp.injective);
  REQUIRE(lp.merge->first == 0);
  REQUIRE(lp.merge->second == 1);
  REQUIRE(std::find(tt.statement_mismatches.begin(), tt.statement_mismatches.end(),
                    lp.index) != tt.statement_mismatches.end());
  // Exactly the associative, non-commutative rows contradict the printed
  // criterion.
  for (auto i : tt.statement_mismatches) {
    REQUIRE(tt.rows[i].associative);
    REQUIRE(!tt.rows[i].commutative);
  }
  REQUIRE(tt.counts[1][1][1] + tt.counts[1][0][0] == 8);
}

TEST_CASE("theorem21 on three elements is thread-count independent",
          "[superposition][property]") {
  Theorem21Options one{3, 1, 1, 2};
  Theorem21Options many{3, 1, 4, 2};
  auto a = theorem21_experiment(3, one);
  auto b = theorem21_experiment(3, many);
  REQUIRE(a.rows.size() == 19683);
  REQUIRE(a.surjective == 19683);
  REQUIRE(a.oracle_mismatches.empty());
  REQUIRE(a.associative == 113);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    REQUIRE(a.rows[i].index == i);
    REQUIRE(a.rows[i].injective == b.rows[i].injective);
    REQUIRE(a.rows[i].table == b.rows[i].table);
  }
  REQUIRE(a.statement_mismatches == b.statement_mismatches);
}

TEST_CASE("semigroup_iso_check", "[superposition]") {
  SECTION("(Z3,+)") {
    auto r = semigroup_iso_check(ops::mod_add(3));
    REQUIRE(r.isomorphism());
    REQUIRE(r.fold_bijective);
    REQUIRE(r.homomorphism_checks == 9);
  }
  SECTION("(Z2,max)") {
    auto r = semigroup_iso_check(ops::max(make_range_carrier("S", 2)), 4, 2);
    REQUIRE(r.isomorphism());
    REQUIRE(r.fold_bijective);
  }
  SECTION("left-zero semigroup is not embedded") {
    auto r = semigroup_iso_check(ops::left_projection(make_range_carrier("S", 2)));
    REQUIRE(!r.commutative);
    REQUIRE(!r.injective);
    REQUIRE(!r.isomorphism());
    REQUIRE(r.merge);
  }
  SECTION("preconditions") {
    REQUIRE_THROWS_AS(semigroup_iso_check(CayleyOp(make_range_carrier("S", 2), {1, 1, 1, 0})),
                      NotAssociative);
    REQUIRE_THROWS_AS(semigroup_iso_check(ops::capped_add(3)), PreconditionFailed);
  }
  SECTION("every commutative semigroup on three elements") {
    auto sg = enumerate_ops(make_range_carrier("S", 3), [](LawReport const& l) {
      return l.associative && l.commutative;
    });
    std::mt19937_64 rng(7);
    std::shuffle(sg.begin(), sg.end(), rng);
    sg.erase(sg.begin() + 12, sg.end());
    for (auto const& op : sg) {
      auto r = semigroup_iso_check(op, 3, 1);
      REQUIRE(r.isomorphism());
      REQUIRE(r.fold_bijective);
    }
  }
}

TEST_CASE("affine example a = b = 2, N = 16", "[superposition]") {
  AffineConfig cfg;
  auto r = affine_experiment(cfg);

  SECTION("1 γ 0 is 2") {
    auto op = ops::affine(2, 2, 16);
    auto alphabet = make_alphabet({op.carrier_ptr()});
    RuleSystem sys = compile_explicit(alphabet, relations_from_op(op));
    auto v = equiv_search(parse_word(alphabet, "1 γ 0"), parse_word(alphabet, "2"), sys);
    REQUIRE(v.proven());
    REQUIRE(validate_chain(v.chain, sys));
  }
  SECTION("grouping identities") {
    REQUIRE(r.left_attempted >= 50);
    REQUIRE(r.left_proven == r.left_attempted);
    REQUIRE(r.right_proven == r.right_attempted);
    for (auto const& id : r.identities) {
      std::size_t const h = id.entries.size();
      auto lc = left_coefficients(2, 2, h);
      auto rc = right_coefficients(2, 2, h);
      std::uint64_t lv = 0;
      std::uint64_t rv = 0;
      for (std::size_t i = 0; i < h; ++i) {
        lv += lc[i] * id.entries[i];
        rv += rc[i] * id.entries[i];
      }
      if (id.left) {
        REQUIRE(id.left->value == lv);
        REQUIRE(id.left->chain.size() == h);
      }
      if (id.right) {
        REQUIRE(id.right->value == rv);
      }
    }
  }
  SECTION("coefficients") {
    REQUIRE(left_coefficients(3, 5, 3) == std::vector<std::uint64_t>{9, 15, 5});
    REQUIRE(right_coefficients(3, 5, 3) == std::vector<std::uint64_t>{3, 15, 25});
    for (auto const& c : r.coefficients) {
      REQUIRE(c.mismatch);
    }
  }
  SECTION("0 and 1 stay apart, larger values merge") {
    REQUIRE(r.small_distinct);
    REQUIRE(r.chains_valid);
    REQUIRE(r.merge_above(2));
    // Every produced value is even, so odd singletons stay alone.
    for (auto const& m : r.merges) {
      REQUIRE(m.first % 2 == 0);
      REQUIRE(m.second % 2 == 0);
    }
    std::set<Elem> two{2, 4};
    REQUIRE(std::any_of(r.merges.begin(), r.merges.end(), [&](MergedPair const& m) {
      return two.count(m.first) && two.count(m.second);
    }));
  }
  SECTION("side condition") {
    REQUIRE_THROWS_AS(affine_experiment({1, 1, 16, 3, 2}), InvalidCap);
    REQUIRE_NOTHROW(validate({1, 2, 16, 3, 2}));
  }
}
