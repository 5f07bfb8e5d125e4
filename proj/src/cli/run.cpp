#include "tensorlab/cli/run.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tensorlab/error.hpp"
#include "tensorlab/sampling.hpp"
#include "tensorlab/superposition.hpp"
#include "tensorlab/tensor.hpp"
#include "tensorlab/universality.hpp"

namespace tensorlab::cli {

namespace {
  // Lists longer than this are cut in reports; counts stay exact.
  constexpr std::size_t listing_limit = 64;

  struct Context {
    ExperimentSpec const& spec;
    ExperimentConfig const& config;
    RunOptions const& options;
    Json discrepancies = Json::array();

    Json const& p() const { return spec.params; }

    std::size_t uint(char const* key, std::size_t fallback) const {
      return p().contains(key) ? p()[key].get<std::size_t>() : fallback;
    }
    std::string str(char const* key, std::string fallback = {}) const {
      return p().contains(key) ? p()[key].get<std::string>() : fallback;
    }
    bool flag(char const* key, bool fallback) const {
      return p().contains(key) ? p()[key].get<bool>() : fallback;
    }
    // Command line, then parameters, then the kind's own default, then [caps].
    std::size_t L() const { return options.L.value_or(uint("L", kind_caps().L)); }
    std::size_t k() const { return options.k.value_or(uint("k", kind_caps().k)); }
    Caps kind_caps() const {
      if (spec.kind == "theorem21") {
        return uint("size", 2) <= 2 ? Caps{4, 2} : Caps{3, 1};
      }
      if (spec.kind == "affine") {
        return Caps{3, 2};
      }
      return config.caps;
    }
    std::uint64_t universe_budget() const {
      return options.universe_budget.value_or(config.budgets.universe);
    }
    std::size_t search_budget() const {
      return options.search_budget.value_or(uint("budget", config.budgets.search));
    }
    TensorOptions tensor_options() const {
      TensorOptions o;
      o.universe_budget = universe_budget();
      o.search_budget = search_budget();
      o.pair_budget = config.budgets.pairs;
      return o;
    }
    RuleSystemPtr system(char const* key = "system") const {
      return config.system(str(key));
    }
    TensorPtr tensor(RuleSystemPtr sys) const {
      return build_tensor(std::move(sys), L(), k(), tensor_options());
    }

    void flag_discrepancy(std::string claim, std::string observed, Json witness) {
      discrepancies.push_back(
          {{"claim", std::move(claim)}, {"observed", std::move(observed)},
           {"witness", std::move(witness)}});
    }
  };

  Json word_json(Word const& w) { return format_word(w); }

  Json chain_json(std::vector<Word> const& chain) {
    Json j = Json::array();
    for (auto const& w : chain) {
      j.push_back(format_word(w));
    }
    return j;
  }

  std::string letter_name(TupleAlphabet const& a, Letter l) { return a.format_letter(l); }

  Json table_json(CayleyOp const& op) {
    Json rows = Json::array();
    for (Elem x = 0; x < op.size(); ++x) {
      Json row = Json::array();
      for (Elem y = 0; y < op.size(); ++y) {
        if (op.defined(x, y)) {
          row.push_back(op(x, y));
        } else {
          row.push_back("-");
        }
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

  std::string table_string(std::vector<Elem> const& t) {
    std::string s;
    for (Elem e : t) {
      s += e == undefined ? "-" : std::to_string(e);
    }
    return s;
  }

  template <class T>
  Json triple_json(std::optional<std::array<T, 3>> const& w) {
    if (!w) {
      return nullptr;
    }
    return Json::array({(*w)[0], (*w)[1], (*w)[2]});
  }

  template <class T>
  Json pair_json(std::optional<std::pair<T, T>> const& w) {
    if (!w) {
      return nullptr;
    }
    return Json::array({w->first, w->second});
  }

  Json system_json(RuleSystem const& sys) {
    Json factors = Json::array();
    for (std::size_t i = 0; i < sys.alphabet->factor_count(); ++i) {
      factors.push_back(sys.alphabet->factor(i).name());
    }
    return {{"provenance", to_string(sys.provenance.kind)},
            {"description", sys.provenance.description},
            {"factors", factors},
            {"rules", sys.rules.size()}};
  }

  Json merges_json(TupleAlphabet const& a, std::vector<MergedPair> const& merged) {
    Json out = Json::array();
    for (auto const& m : merged) {
      out.push_back({{"first", letter_name(a, m.first)},
                     {"second", letter_name(a, m.second)},
                     {"chain", chain_json(m.chain)}});
    }
    return out;
  }

  Json well_definedness_json(WellDefinedness const& wd) {
    return {{"pairs_checked", wd.pairs_checked},     {"exhaustive", wd.exhaustive},
            {"mismatches", wd.mismatches},           {"settled_by_slack", wd.settled_by_slack},
            {"settled_by_lifting", wd.settled_by_lifting}, {"unresolved", wd.unresolved}};
  }

  //////////////////////////////////////////////////////////////////////////

  Json check_op(Context& c) {
    auto const& op = c.config.operation(c.str("op"));
    auto laws = check_op_laws(op);
    return {{"op", c.str("op")},
            {"carrier", op.carrier().name()},
            {"size", op.size()},
            {"table", table_json(op)},
            {"total", laws.total},
            {"associative", laws.associative},
            {"commutative", laws.commutative},
            {"associativity_witness", triple_json(laws.associativity_witness)},
            {"commutativity_witness", pair_json(laws.commutativity_witness)},
            {"undefined_witness", pair_json(laws.undefined_witness)}};
  }

  Json congruence_instance(Context& c, RuleSystemPtr sys) {
    Json j = system_json(*sys);
    try {
      auto t = c.tensor(sys);
      j["universe_words"] = t->universe().size();
      j["classes"] = t->class_count();
      j["stratum_classes"] = t->stratum_class_count();
      j["congruence"] = well_definedness_json(t->well_definedness());
    } catch (WellDefinednessViolation const& e) {
      j["congruence"] = {{"violation", e.what()}};
      c.flag_discrepancy("the rule-generated equivalence is a congruence",
                         "a context separates two equivalent words",
                         {{"class", e.class_id()},
                          {"first", e.first_member()},
                          {"second", e.second_member()}});
    }
    return j;
  }

  Json closure(Context& c) {
    if (c.p().contains("random")) {
      sampling::Rng rng(c.uint("seed", 1));
      Json instances = Json::array();
      for (std::size_t i = c.uint("random", 20); i > 0; --i) {
        auto inst = sampling::random_pair_system(rng, c.uint("max_size", 3));
        instances.push_back(congruence_instance(c, inst.system));
      }
      return {{"mode", "random"}, {"seed", c.uint("seed", 1)}, {"instances", instances}};
    }
    auto sys = c.system();
    auto classes = saturate(sys, c.L(), c.k(), c.universe_budget());
    auto census = class_census(*classes);
    Json listing = Json::array();
    for (std::size_t i = 0; i < census.representatives.size() && i < listing_limit; ++i) {
      listing.push_back({{"representative", word_json(census.representatives[i])},
                         {"members", census.sizes[i]},
                         {"members_with_bridges", census.total_sizes[i]}});
    }
    Json j = system_json(*sys);
    j["universe_words"] = classes->universe().size();
    j["classes"] = classes->class_count();
    j["stratum_classes"] = census.class_count;
    j["singleton_classes"] = census.singleton_classes;
    j["listing"] = listing;
    j["listing_truncated"] = census.representatives.size() > listing_limit;
    return j;
  }

  Json tensor(Context& c) {
    auto t = c.tensor(c.system());
    auto laws = check_gamma_laws(*t);
    Json j = system_json(t->system());
    j["classes"] = t->class_count();
    j["stratum_classes"] = t->stratum_class_count();
    j["well_definedness"] = well_definedness_json(t->well_definedness());
    j["gamma"] = {{"pairs_checked", laws.pairs_checked},
                  {"triples_checked", laws.triples_checked},
                  {"exhaustive", laws.exhaustive},
                  {"commutativity_failures", laws.commutativity_failures},
                  {"associativity_mismatches", laws.associativity_mismatches},
                  {"associativity_settled", laws.associativity_settled}};
    if (!laws.holds()) {
      Json w = Json::array();
      for (auto const& ex : laws.examples) {
        if (ex.how == CapArtifact::Settled::unresolved) {
          w.push_back({{"left", word_json(ex.left)}, {"right", word_json(ex.right)}});
        }
      }
      c.flag_discrepancy("the induced operation on classes is commutative and associative",
                         "groupings not shown equal", w);
    }
    return j;
  }

  Json iota_instance(Context& c, TensorSpace const& t) {
    auto r = analyze_iota(t);
    Json unreached = Json::array();
    for (std::size_t i = 0; i < r.unreached_representatives.size() && i < listing_limit; ++i) {
      unreached.push_back(word_json(r.unreached_representatives[i]));
    }
    Json j = system_json(t.system());
    j["injective"] = r.injective_within_cap;
    j["merged"] = merges_json(t.alphabet(), r.merged);
    j["surjective"] = r.surjective_within_cap;
    j["unreached_classes"] = r.unreached.size();
    j["unreached"] = unreached;
    if (!r.injective_within_cap && t.alphabet().factor_count() == 2) {
      auto const& m = r.merged.front();
      c.flag_discrepancy("the canonical embedding of tuples is injective",
                         letter_name(t.alphabet(), m.first) + " and "
                             + letter_name(t.alphabet(), m.second) + " share a class",
                         chain_json(m.chain));
    }
    return j;
  }

  Json iota(Context& c) {
    if (c.p().contains("random")) {
      sampling::Rng rng(c.uint("seed", 1));
      Json instances = Json::array();
      std::size_t injective = 0;
      std::size_t const n = c.uint("random", 10);
      for (std::size_t i = 0; i < n; ++i) {
        auto sys = sampling::random_long_relations(rng, c.uint("max_size", 3),
                                                   c.uint("relations", 6),
                                                   c.uint("min_side", 2),
                                                   c.uint("max_side", 3));
        auto t = c.tensor(sys);
        auto j = iota_instance(c, *t);
        injective += j["injective"].get<bool>() ? 1 : 0;
        instances.push_back(std::move(j));
      }
      return {{"mode", "random"},
              {"seed", c.uint("seed", 1)},
              {"injective", injective},
              {"instances", instances}};
    }
    auto t = c.tensor(c.system());
    return iota_instance(c, *t);
  }

  Json entangled_experiment(Context& c) {
    auto t = c.tensor(c.system());
    auto classes = entangled(*t);
    Json listing = Json::array();
    for (std::size_t i = 0; i < classes.size() && i < listing_limit; ++i) {
      listing.push_back(word_json(t->representative(classes[i])));
    }
    Json j = system_json(t->system());
    j["stratum_classes"] = t->stratum_class_count();
    j["entangled_classes"] = classes.size();
    j["entangled"] = listing;
    if (c.flag("expect_nonempty", false) && classes.empty()) {
      c.flag_discrepancy("some class contains no length-1 word",
                         "every stratum class contains a length-1 word",
                         {{"stratum_classes", t->stratum_class_count()}});
    }
    if (c.p().contains("word")) {
      auto w = parse_word(t->alphabet_ptr(), c.str("word"));
      std::size_t const cls = t->class_of(w);
      bool const is_entangled = cls != TensorSpace::npos && t->representative_length(cls) >= 2;
      Json q = {{"word", word_json(w)}, {"entangled", is_entangled}};
      if (cls != TensorSpace::npos && !is_entangled) {
        auto rep = t->representative(cls);
        auto eq = t->prove_equal(w, rep);
        q["equivalent_to"] = word_json(rep);
        q["chain"] = chain_json(eq.chain);
        if (c.str("expect") == "entangled") {
          c.flag_discrepancy("the class of " + format_word(w) + " contains no length-1 word",
                             format_word(w) + " is equivalent to " + format_word(rep),
                             chain_json(eq.chain));
        }
      }
      j["query"] = q;
    }
    return j;
  }

  Json refinement_json(RefinementMap const& r) {
    Json map = Json::array();
    for (std::size_t i = 0; i < r.map.size() && i < listing_limit; ++i) {
      map.push_back(r.map[i]);
    }
    return {{"source_classes", r.source->class_count()},
            {"target_classes", r.target->class_count()},
            {"well_defined", r.well_defined},
            {"surjective", r.surjective},
            {"homomorphism", r.homomorphism},
            {"homomorphism_checks", r.homomorphism_checks},
            {"settled_beyond_cap", r.settled_beyond_cap},
            {"map", map},
            {"map_truncated", r.map.size() > listing_limit}};
  }

  // Proven pairs of the binary-op tensor must stay proven under the
  // generators of the same operations.
  Json refine_random(Context& c) {
    sampling::Rng rng(c.uint("seed", 1));
    std::size_t const n = c.uint("random", 10);
    std::size_t const want = c.uint("pairs", 20);
    Json instances = Json::array();
    std::size_t checked = 0;
    std::size_t kept = 0;
    while (instances.size() < n) {
      auto X = make_range_carrier("X", 2);
      auto Y = make_range_carrier("Y", 2);
      auto alpha = sampling::random_op(rng, X, 0.25);
      auto beta = sampling::random_op(rng, Y, 0.25);
      auto a = make_alphabet({X, Y});
      auto fine = c.tensor(std::make_shared<RuleSystem const>(
          compile_from_binary_ops(a, alpha, beta)));
      auto const& fc = fine->classes();
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t cls = 0; cls < fc.stratum_class_count(); ++cls) {
        auto members = fc.members(cls);
        for (std::size_t i = 0; i < members.size(); ++i) {
          for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (fine->universe().length(members[j]) <= fine->cap()) {
              pairs.emplace_back(members[i], members[j]);
            }
          }
        }
      }
      if (pairs.size() < want) {
        continue;
      }
      std::shuffle(pairs.begin(), pairs.end(), rng);
      pairs.resize(want);
      auto coarse = c.tensor(std::make_shared<RuleSystem const>(compile_from_generators(
          a, generator_from_op(alpha), generator_from_op(beta))));
      std::size_t proven = 0;
      Json failures = Json::array();
      for (auto [x, y] : pairs) {
        auto wx = fine->universe().word_value(x);
        auto wy = fine->universe().word_value(y);
        auto eq = coarse->prove_equal(wx, wy);
        if (eq.proven) {
          ++proven;
        } else {
          failures.push_back({word_json(wx), word_json(wy)});
        }
      }
      checked += pairs.size();
      kept += proven;
      if (!failures.empty()) {
        c.flag_discrepancy("pairs equivalent under the operations are equivalent under "
                           "their generators",
                           std::to_string(failures.size()) + " pairs not proven", failures);
      }
      instances.push_back({{"alpha", table_string(alpha.table())},
                           {"beta", table_string(beta.table())},
                           {"coarse_rules", coarse->system().rules.size()},
                           {"pairs", pairs.size()},
                           {"proven", proven}});
    }
    return {{"mode", "random"},
            {"seed", c.uint("seed", 1)},
            {"pairs_checked", checked},
            {"pairs_proven", kept},
            {"instances", instances}};
  }

  Json refine(Context& c) {
    if (c.p().contains("random")) {
      return refine_random(c);
    }
    auto r = refinement(c.tensor(c.system("source")), c.tensor(c.system("target")));
    if (!r.holds()) {
      c.flag_discrepancy("the refinement map is a well-defined surjective homomorphism",
                         "a clause fails", refinement_json(r));
    }
    return refinement_json(r);
  }

  Json factorization_json(Factorization const& f) {
    return {{"h", f.h.table},
            {"well_defined", f.well_defined},
            {"triangle", f.triangle},
            {"homomorphism", f.homomorphism},
            {"unique", f.unique},
            {"members_checked", f.members_checked},
            {"homomorphism_checks", f.homomorphism_checks},
            {"reachable", f.reachable}};
  }

  // X = {0,1}, Y = {0}, α defined on the diagonal only; δ commutative but
  // (0·1)·1 ≠ 0·(1·1) on the image closure.
  struct Counterexample {
    CayleyOp alpha, beta, delta;
    BiMap g;
  };

  Counterexample counterexample() {
    auto X = make_range_carrier("X", 2);
    auto Y = make_range_carrier("Y", 1);
    auto U = make_range_carrier("U", 3);
    CayleyOp alpha(X, {0, undefined, undefined, 1}, "diagonal");
    CayleyOp beta(Y, {0}, "trivial");
    CayleyOp delta(U, {0, 2, 2, 2, 1, 1, 2, 1, 2}, "commutative non-associative");
    return {alpha, beta, delta, BiMap(X, Y, U, {0, 1}, "g")};
  }

  Json universality_random(Context& c) {
    sampling::Rng rng(c.uint("seed", 1));
    std::size_t const n = c.uint("random", 50);
    std::size_t const L = c.L();
    std::size_t const k = c.k();
    std::array<std::size_t, 3> passed{};
    Json instances = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto inst = sampling::random_universality(rng);
      auto opts = c.tensor_options();
      auto fine_sys = std::make_shared<RuleSystem const>(
          compile_from_binary_ops(inst.alphabet, inst.alpha, inst.beta));
      auto gen_sys = std::make_shared<RuleSystem const>(compile_from_generators(
          inst.alphabet, generator_from_op(inst.alpha), generator_from_op(inst.beta)));
      auto alpha2 = sampling::random_op(rng, inst.X);
      auto beta2 = sampling::random_op(rng, inst.Y);
      auto set_sys = std::make_shared<RuleSystem const>(compile_from_op_sets(
          inst.alphabet, {inst.alpha, alpha2}, {inst.beta, beta2}));
      auto fine = build_tensor(fine_sys, L, k, opts);

      Json row = {{"alpha", table_string(inst.alpha.table())},
                  {"beta", table_string(inst.beta.table())},
                  {"delta", table_string(inst.delta.table())}};
      std::array<bool, 3> ok{};
      {
        auto g = sampling::pick(rng, sampling::respecting_bimaps(*fine_sys, inst.U, inst.delta));
        auto f = factor_through_tensor(g, *fine, inst.delta);
        ok[0] = f.holds();
        row["binary_ops"] = {{"g", g.table()}, {"holds", ok[0]}};
      }
      int variant = 1;
      for (auto const& coarse_sys : {gen_sys, set_sys}) {
        auto g = sampling::pick(rng, sampling::respecting_bimaps(*coarse_sys, inst.U, inst.delta));
        auto r = refinement(fine, build_tensor(coarse_sys, L, k, opts));
        auto f = factor_through_refinement(g, r, inst.delta);
        ok[variant] = f.holds() && r.holds();
        row[variant == 1 ? "generators" : "op_sets"] = {{"g", g.table()},
                                                         {"holds", ok[variant]}};
        ++variant;
      }
      for (std::size_t v = 0; v < 3; ++v) {
        passed[v] += ok[v] ? 1 : 0;
      }
      if (!(ok[0] && ok[1] && ok[2])) {
        c.flag_discrepancy("every commuting bihomomorphism factors uniquely through the tensor",
                           "a verification clause fails", row);
      }
      instances.push_back(std::move(row));
    }
    Json j = {{"mode", "random"},
              {"seed", c.uint("seed", 1)},
              {"instances_checked", n},
              {"binary_ops_passed", passed[0]},
              {"generators_passed", passed[1]},
              {"op_sets_passed", passed[2]},
              {"instances", instances}};
    if (c.flag("counterexample", false)) {
      auto ce = counterexample();
      auto a = make_alphabet({ce.alpha.carrier_ptr(), ce.beta.carrier_ptr()});
      auto t = build_tensor(std::make_shared<RuleSystem const>(
                                compile_from_binary_ops(a, ce.alpha, ce.beta)),
                            L, k, c.tensor_options());
      Json q = {{"alpha", table_json(ce.alpha)},
                {"beta", table_json(ce.beta)},
                {"delta", table_json(ce.delta)},
                {"g", ce.g.table()}};
      try {
        factor_through_tensor(ce.g, *t, ce.delta);
        q["violation"] = nullptr;
        c.flag_discrepancy("a non-associative image yields a well-definedness violation",
                           "factorization succeeded", q);
      } catch (WellDefinednessViolation const& e) {
        q["violation"] = {{"class", e.class_id()},
                          {"first", e.first_member()},
                          {"second", e.second_member()}};
      }
      j["counterexample"] = q;
    }
    return j;
  }

  Json universality(Context& c) {
    if (c.p().contains("random")) {
      return universality_random(c);
    }
    auto t = c.tensor(c.system());
    auto const& a = t->alphabet();
    auto U = c.config.carrier(c.str("codomain"));
    auto const& delta = c.config.operation(c.str("delta"));
    auto const& rows = c.p()["g"];
    std::vector<Elem> table;
    for (auto const& row : rows) {
      for (auto const& e : row) {
        table.push_back(e.get<Elem>());
      }
    }
    BiMap g(a.factor_ptr(0), a.factor_ptr(1), U, table, "g");
    auto const& decl = c.config.systems.at(c.str("system"));
    auto laws = is_commuting_bihomomorphism(g, c.config.operation(decl.alpha),
                                            c.config.operation(decl.beta), delta);
    Json j = {{"left_distributive", laws.left_distributive},
              {"right_distributive", laws.right_distributive},
              {"image_commutative", laws.image_commutative},
              {"image_associative", laws.image_associative},
              {"closure_total", laws.closure_total}};
    try {
      j["factorization"] = factorization_json(factor_through_tensor(g, *t, delta));
    } catch (WellDefinednessViolation const& e) {
      j["violation"] = {{"class", e.class_id()},
                        {"first", e.first_member()},
                        {"second", e.second_member()},
                        {"message", e.what()}};
    } catch (PreconditionFailed const& e) {
      j["precondition_failed"] = e.what();
    }
    return j;
  }

  Json theorem21(Context& c) {
    Theorem21Options opts;
    opts.L = c.L();
    opts.k = c.k();
    opts.threads = c.uint("threads", 0);
    std::size_t const size = c.uint("size", 2);
    auto tt = theorem21_experiment(size, opts);
    std::string const rows_mode = c.str("rows", size <= 2 ? "all" : "flagged");
    std::set<std::uint64_t> flagged(tt.statement_mismatches.begin(),
                                    tt.statement_mismatches.end());
    flagged.insert(tt.oracle_mismatches.begin(), tt.oracle_mismatches.end());
    auto row_json = [&](Theorem21Row const& r) {
      Json j = {{"index", r.index},
                {"table", table_string(r.table)},
                {"associative", r.associative},
                {"commutative", r.commutative},
                {"surjective", r.surjective},
                {"injective", r.injective},
                {"oracle_injective", r.oracle_injective},
                {"slack", r.slack}};
      if (r.merge) {
        j["merge"] = {{"first", r.merge->first},
                      {"second", r.merge->second},
                      {"chain", chain_json(r.merge->chain)}};
      }
      if (r.unreached) {
        j["unreached"] = word_json(*r.unreached);
      }
      return j;
    };
    Json rows = Json::array();
    for (auto const& r : tt.rows) {
      if (rows_mode == "all" || (rows_mode == "flagged" && flagged.count(r.index))) {
        rows.push_back(row_json(r));
      }
    }
    for (auto i : tt.statement_mismatches) {
      auto const& r = tt.rows[i];
      c.flag_discrepancy(
          "the embedding is injective exactly when the operation is associative",
          std::string(r.associative ? "associative" : "non-associative") + " table "
              + table_string(r.table) + (r.injective ? " is injective" : " is not injective"),
          row_json(r));
    }
    for (auto i : tt.oracle_mismatches) {
      c.flag_discrepancy("injective exactly when associative and commutative (fold oracle)",
                         "table " + table_string(tt.rows[i].table) + " disagrees",
                         row_json(tt.rows[i]));
    }
    if (tt.surjective != tt.rows.size()) {
      Json w = Json::array();
      for (auto const& r : tt.rows) {
        if (!r.surjective && w.size() < listing_limit) {
          w.push_back(row_json(r));
        }
      }
      c.flag_discrepancy("the embedding is always surjective",
                         std::to_string(tt.rows.size() - tt.surjective) + " tables are not",
                         w);
    }
    Json counts = Json::array();
    for (int as = 1; as >= 0; --as) {
      for (int co = 1; co >= 0; --co) {
        for (int in = 1; in >= 0; --in) {
          counts.push_back({{"associative", as == 1},
                            {"commutative", co == 1},
                            {"injective", in == 1},
                            {"count", tt.counts[as][co][in]}});
        }
      }
    }
    return {{"size", size},
            {"L", opts.L},
            {"k", opts.k},
            {"operations", tt.rows.size()},
            {"surjective", tt.surjective},
            {"associative", tt.associative},
            {"oracle_mismatches", tt.oracle_mismatches.size()},
            {"statement_mismatches", tt.statement_mismatches.size()},
            {"contingency", counts},
            {"rows_listed", rows_mode},
            {"rows", rows}};
  }

  Json affine(Context& c) {
    AffineConfig cfg;
    cfg.a = c.uint("a", 2);
    cfg.b = c.uint("b", 2);
    cfg.N = c.uint("N", 16);
    cfg.L = c.L();
    cfg.k = c.k();
    auto r = affine_experiment(cfg);
    Json merges = Json::array();
    for (auto const& m : r.merges) {
      merges.push_back({{"first", m.first}, {"second", m.second}, {"chain", chain_json(m.chain)}});
    }
    Json samples = Json::array();
    for (std::size_t i = 0; i < r.identities.size() && samples.size() < 16; i += 7) {
      auto const& id = r.identities[i];
      Json s = {{"entries", id.entries}};
      if (id.left) {
        s["left"] = {{"value", id.left->value}, {"chain", chain_json(id.left->chain)}};
      }
      if (id.right) {
        s["right"] = {{"value", id.right->value}, {"chain", chain_json(id.right->chain)}};
      }
      samples.push_back(std::move(s));
    }
    Json coefficients = Json::array();
    for (auto const& cc : r.coefficients) {
      coefficients.push_back({{"length", cc.length},
                              {"left", cc.left},
                              {"right", cc.right},
                              {"claimed", cc.claimed},
                              {"mismatch", cc.mismatch}});
      if (cc.mismatch) {
        c.flag_discrepancy("for a = b, every grouping of a length-" + std::to_string(cc.length)
                               + " word yields coefficients a, a^2, ..., a^h",
                           "left and right groupings give other coefficients",
                           coefficients.back());
      }
    }
    if (r.left_proven != r.left_attempted || r.right_proven != r.right_attempted) {
      c.flag_discrepancy("grouping from either end is an equivalence",
                         "some grouping chain did not validate",
                         {{"left", {r.left_proven, r.left_attempted}},
                          {"right", {r.right_proven, r.right_attempted}}});
    }
    if (!r.small_distinct) {
      c.flag_discrepancy("the embedding is injective on 0..a-1", "two of them merge",
                         merges);
    }
    return {{"a", cfg.a},
            {"b", cfg.b},
            {"N", cfg.N},
            {"L", cfg.L},
            {"k", cfg.k},
            {"identities", r.identities.size()},
            {"left", {{"attempted", r.left_attempted}, {"proven", r.left_proven}}},
            {"right", {{"attempted", r.right_attempted}, {"proven", r.right_proven}}},
            {"small_distinct", r.small_distinct},
            {"merges", merges},
            {"merge_at_least_2", r.merge_above(2)},
            {"chains_valid", r.chains_valid},
            {"coefficients", coefficients},
            {"samples", samples}};
  }

  Json appendix_suite(Context& c) {
    bool all = true;
    // Ten semigroups of order <= 3: every one of order 1 and 2, then the
    // first of order 3 in table order.
    std::vector<CayleyOp> semigroups;
    for (std::size_t n = 1; n <= 3 && semigroups.size() < 10; ++n) {
      for_each_op(make_range_carrier("S", n), [](LawReport const& l) { return l.associative; },
                  [&](CayleyOp const& op) {
                    if (semigroups.size() < 10) {
                      semigroups.push_back(op);
                    }
                  });
    }
    Json free = Json::array();
    for (auto const& op : semigroups) {
      auto ff = free_fold(FiniteMap::identity(op.size()), op, 4);
      all = all && ff.holds() && ff.surjective;
      free.push_back({{"table", table_string(op.table())},
                      {"words", ff.words.size()},
                      {"homomorphism", ff.homomorphism},
                      {"triangle", ff.triangle},
                      {"unique", ff.unique},
                      {"surjective", ff.surjective}});
    }

    Json ker = Json::array();
    for (auto [s, t] : std::vector<std::pair<std::size_t, std::size_t>>{
             {4, 2}, {6, 3}, {6, 2}, {3, 3}, {4, 4}, {2, 2}}) {
      auto opS = ops::mod_add(s);
      auto opT = ops::mod_add(t);
      std::vector<Elem> m(s, 0);
      while (ker.size() < 10) {
        FiniteMap f(t, m);
        if (is_homomorphism(f, opS, opT).holds) {
          auto kf = ker_factorization(f, opS, opT);
          all = all && kf.holds();
          ker.push_back({{"source", opS.carrier().name()},
                         {"target", opT.carrier().name()},
                         {"map", m},
                         {"kernel_classes", kf.kernel.class_count},
                         {"diagram_commutes", kf.diagram_commutes},
                         {"holds", kf.holds()}});
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

    Json cayley = Json::array();
    for_each_op(make_range_carrier("S", 2), [](LawReport const& l) { return l.associative; },
                [&](CayleyOp const& op) {
                  auto e = cayley_embed(op);
                  all = all && e.holds();
                  cayley.push_back({{"table", table_string(op.table())},
                                    {"adjoined_identity", e.adjoined_identity},
                                    {"injective", e.injective},
                                    {"homomorphism", e.homomorphism}});
                });

    Json multisets = Json::array();
    for (std::size_t s = 1; s <= 3; ++s) {
      auto t = multiset_quotient(make_range_carrier("E", s), 5);
      std::vector<std::uint64_t> per_length(6, 0);
      for (std::size_t cls = 0; cls < t->stratum_class_count(); ++cls) {
        ++per_length[t->representative_length(cls)];
      }
      for (std::size_t h = 1; h <= 5; ++h) {
        std::uint64_t expected = 1;
        for (std::uint64_t i = 1; i <= h; ++i) {
          expected = expected * (s + i - 1) / i;
        }
        all = all && per_length[h] == expected;
        multisets.push_back({{"letters", s}, {"length", h}, {"classes", per_length[h]},
                             {"expected", expected}});
      }
    }

    Json pairing = Json::array();
    for (std::size_t z = 1; z <= 3; ++z) {
      for (std::size_t x = 1; x <= 3; ++x) {
        for (std::size_t y = 1; y <= 3; ++y) {
          std::vector<Elem> ft(z), gt(z);
          for (std::size_t i = 0; i < z; ++i) {
            ft[i] = static_cast<Elem>(i % x);
            gt[i] = static_cast<Elem>((2 * i + 1) % y);
          }
          auto p = cartesian_pairing(FiniteMap(x, ft), FiniteMap(y, gt));
          all = all && p.projections_hold && p.unique && p.exhaustive;
          pairing.push_back({{"Z", z}, {"X", x}, {"Y", y},
                             {"h", p.h.table},
                             {"unique", p.unique},
                             {"exhaustive", p.exhaustive},
                             {"candidates", p.candidates_checked}});
        }
      }
    }
    if (!all) {
      c.flag_discrepancy("every appendix construction verifies", "a check failed", nullptr);
    }
    return {{"free_fold", free}, {"ker_factorization", ker}, {"cayley", cayley},
            {"multisets", multisets}, {"pairing", pairing}, {"all_hold", all}};
  }

  Json equiv(Context& c) {
    auto sys = c.system();
    auto w = parse_word(sys->alphabet, c.str("word"));
    auto target = parse_word(sys->alphabet, c.str("target"));
    auto v = equiv_search(w, target, *sys, c.search_budget());
    return {{"word", word_json(w)},
            {"target", word_json(target)},
            {"status", v.proven() ? "proven" : "unknown"},
            {"steps", v.steps()},
            {"cost", v.cost},
            {"budget", c.search_budget()},
            {"chain", chain_json(v.chain)},
            {"chain_valid", v.proven() && validate_chain(v.chain, *sys)}};
  }

  Json dispatch(Context& c) {
    auto const& kind = c.spec.kind;
    if (kind == "check-op") return check_op(c);
    if (kind == "closure") return closure(c);
    if (kind == "tensor") return tensor(c);
    if (kind == "iota") return iota(c);
    if (kind == "entangled") return entangled_experiment(c);
    if (kind == "refine") return refine(c);
    if (kind == "universality") return universality(c);
    if (kind == "theorem21") return theorem21(c);
    if (kind == "affine") return affine(c);
    if (kind == "appendix-suite") return appendix_suite(c);
    if (kind == "equiv") return equiv(c);
    throw Error("unknown experiment kind '" + kind + "'");
  }
}  // namespace

Json run_experiment(ExperimentSpec const& spec, ExperimentConfig const& config,
                    RunOptions const& options) {
  auto issues = validate_experiment(spec, config);
  if (!issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  Context c{spec, config, options};
  Json result;
  try {
    result = dispatch(c);
  } catch (ConfigError const&) {
    throw;
  } catch (std::exception const& e) {
    throw RunError("experiment '" + spec.id + "' (" + spec.kind + "): " + e.what());
  }
  return {{"id", spec.id},
          {"kind", spec.kind},
          {"params", spec.params},
          {"within_cap",
           {{"L", c.L()},
            {"k", c.k()},
            {"universe_budget", c.universe_budget()},
            {"search_budget", c.search_budget()}}},
          {"result", std::move(result)},
          {"discrepancies", std::move(c.discrepancies)}};
}

Json run(ExperimentConfig const& config, std::vector<ExperimentSpec> const& specs,
         RunOptions const& options) {
  Json experiments = Json::array();
  std::size_t flags = 0;
  for (auto const& spec : specs) {
    auto e = run_experiment(spec, config, options);
    flags += e["discrepancies"].size();
    experiments.push_back(std::move(e));
  }
  return {{"schema", report_schema},
          {"source", config.source},
          {"experiments", std::move(experiments)},
          {"summary",
           {{"experiments", specs.size()},
            {"discrepancies", flags},
            {"status", flags == 0 ? "ok" : "discrepancies"}}}};
}

Json run(ExperimentConfig const& config, RunOptions const& options) {
  return run(config, config.experiments, options);
}

int exit_code(Json const& report) {
  return report["summary"]["discrepancies"].get<std::size_t>() == 0 ? 0 : 2;
}

std::string render_json(Json const& report) { return report.dump(2) + "\n"; }

namespace {
  void text(std::ostringstream& out, Json const& j, std::string const& indent) {
    for (auto const& [key, value] : j.items()) {
      if (value.is_object()) {
        out << indent << key << ":\n";
        text(out, value, indent + "  ");
      } else if (value.is_array()) {
        bool const scalars = std::all_of(value.begin(), value.end(), [](Json const& e) {
          return e.is_primitive();
        });
        if (scalars && value.size() <= 16) {
          out << indent << key << ": " << value.dump() << "\n";
          continue;
        }
        out << indent << key << ": " << value.size() << " entries\n";
        std::size_t shown = 0;
        for (auto const& e : value) {
          if (shown++ == 8) {
            out << indent << "  ...\n";
            break;
          }
          if (e.is_object()) {
            out << indent << "  -\n";
            text(out, e, indent + "    ");
          } else {
            out << indent << "  - " << e.dump() << "\n";
          }
        }
      } else {
        out << indent << key << ": "
            << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
      }
    }
  }
}  // namespace

std::string render_text(Json const& report) {
  std::ostringstream out;
  out << "report " << report["schema"].get<std::string>() << "  source "
      << report["source"].get<std::string>() << "\n";
  for (auto const& e : report["experiments"]) {
    out << "\n== " << e["id"].get<std::string>() << " (" << e["kind"].get<std::string>()
        << ")  L=" << e["within_cap"]["L"] << " k=" << e["within_cap"]["k"] << "\n";
    text(out, e["result"], "  ");
    for (auto const& d : e["discrepancies"]) {
      out << "  DISCREPANCY: " << d["claim"].get<std::string>() << "\n"
          << "    observed: " << d["observed"].get<std::string>() << "\n"
          << "    witness: " << d["witness"].dump() << "\n";
    }
  }
  auto const& s = report["summary"];
  out << "\n" << s["experiments"] << " experiments, " << s["discrepancies"]
      << " discrepancy flags: " << s["status"].get<std::string>() << "\n";
  return out.str();
}

}  // namespace tensorlab::cli
