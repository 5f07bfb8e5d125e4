#include "tensorlab/superposition.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "tensorlab/error.hpp"

namespace tensorlab {

namespace {
  struct IotaView {
    bool injective = true;
    std::optional<MergedPair> merge;
    bool surjective = true;
    std::optional<Word> unreached;
  };

  // Length-1 words are the ordinals 0..letters-1.
  IotaView inspect(EquivClasses const& classes, std::size_t letters) {
    IotaView view;
    std::unordered_map<std::size_t, Letter> first;
    for (Letter l = 0; l < letters; ++l) {
      auto [it, fresh] = first.emplace(classes.class_of(l), l);
      if (!fresh && view.injective) {
        view.injective = false;
        view.merge = MergedPair{it->second, l, classes.chain_within(it->second, l)};
      }
    }
    auto const& u = classes.universe();
    for (std::size_t c = 0; c < classes.stratum_class_count(); ++c) {
      std::size_t const r = classes.representative(c);
      if (u.length(r) >= 2) {
        view.surjective = false;
        view.unreached = u.word_value(r);
        break;
      }
    }
    return view;
  }

  // Left fold of a sorted word; undefined if a step is undefined.
  Elem fold(CayleyOp const& op, std::span<Letter const> w) {
    Elem acc = static_cast<Elem>(w[0]);
    for (std::size_t i = 1; i < w.size() && acc != undefined; ++i) {
      acc = op(acc, static_cast<Elem>(w[i]));
    }
    return acc;
  }

  std::optional<std::uint64_t> affine_value(AffineConfig const& cfg,
                                            std::uint64_t x, std::uint64_t y) {
    std::uint64_t const v = cfg.a * x + cfg.b * y;
    if (v > cfg.N) {
      return std::nullopt;
    }
    return v;
  }

  // Chain for grouping the entries pairwise from one end; nullopt if a step
  // leaves 0..N.
  std::optional<FoldProof> grouping_chain(SuperpositionSpace const& s,
                                          AffineConfig const& cfg,
                                          std::vector<Elem> entries,
                                          bool from_left) {
    FoldProof proof;
    auto const& alphabet = s.tensor().alphabet_ptr();
    auto as_word = [&](std::vector<Elem> const& es) {
      return Word::canonical(alphabet, Letters(es.begin(), es.end()));
    };
    proof.chain.push_back(as_word(entries));
    while (entries.size() > 1) {
      std::optional<std::uint64_t> v;
      if (from_left) {
        v = affine_value(cfg, entries[0], entries[1]);
        if (!v) {
          return std::nullopt;
        }
        entries.erase(entries.begin());
        entries[0] = static_cast<Elem>(*v);
      } else {
        std::size_t const n = entries.size();
        v = affine_value(cfg, entries[n - 2], entries[n - 1]);
        if (!v) {
          return std::nullopt;
        }
        entries.pop_back();
        entries.back() = static_cast<Elem>(*v);
      }
      proof.chain.push_back(as_word(entries));
    }
    proof.value = entries[0];
    proof.chain_valid = validate_chain(proof.chain, s.tensor().system());
    std::size_t const start = s.tensor().class_of(proof.chain.front());
    proof.same_class = start != WordUniverse::npos && start == s.iota(proof.value);
    return proof;
  }

  std::vector<std::uint64_t> sorted(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return v;
  }
}  // namespace

SuperpositionSpace::SuperpositionSpace(TensorPtr tensor) : tensor_(std::move(tensor)) {
  if (tensor_->alphabet().factor_count() != 1) {
    throw ShapeMismatch("superposition space needs a one-factor alphabet");
  }
}

Word SuperpositionSpace::word(std::vector<Elem> const& entries) const {
  return Word::canonical(tensor_->alphabet_ptr(),
                         Letters(entries.begin(), entries.end()));
}

std::vector<Relation> relations_from_op(CayleyOp const& op) {
  std::vector<Relation> out;
  std::size_t const n = op.size();
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (op.defined(x, y)) {
        out.push_back({{std::min(x, y), std::max(x, y)}, {op(x, y)}});
      }
    }
  }
  return out;
}

std::vector<Relation> relations_from_triples(
    std::vector<std::array<Elem, 3>> const& triples) {
  std::vector<Relation> out;
  out.reserve(triples.size());
  for (auto const& [y1, y2, y3] : triples) {
    out.push_back({{std::min(y1, y2), std::max(y1, y2)}, {y3}});
  }
  return out;
}

CarrierPtr product_carrier(Carrier const& K, Carrier const& X) {
  std::vector<std::string> names;
  names.reserve(K.size() * X.size());
  for (Elem c = 0; c < K.size(); ++c) {
    for (Elem x = 0; x < X.size(); ++x) {
      names.push_back("(" + K.element(c) + "," + X.element(x) + ")");
    }
  }
  return make_carrier(K.name() + "x" + X.name(), std::move(names));
}

SuperpositionSpace build_superposition(CarrierPtr X,
                                       std::vector<Relation> const& relations,
                                       std::size_t L, std::size_t k,
                                       TensorOptions options) {
  auto alphabet = make_alphabet({std::move(X)});
  auto sys = std::make_shared<RuleSystem const>(
      compile_explicit(alphabet, relations, "superposition"));
  return SuperpositionSpace(build_tensor(sys, L, k, options));
}

Theorem21Row theorem21_row(CayleyOp const& op, std::size_t L, std::size_t k,
                           std::size_t escalation) {
  auto const laws = check_op_laws(op);
  if (!laws.total) {
    throw PreconditionFailed("theorem21_row: operation '" + op.name()
                             + "' is partial");
  }
  Theorem21Row row;
  row.table = op.table();
  row.associative = laws.associative;
  row.commutative = laws.commutative;
  row.oracle_injective = laws.associative && laws.commutative;
  row.stated_injective = laws.associative;

  auto s = build_superposition(op.carrier_ptr(), relations_from_op(op), L, k);
  auto view = inspect(s.tensor().classes(), op.size());
  row.slack = k;
  for (std::size_t extra = 1;
       extra <= escalation && (view.injective != row.oracle_injective || !view.surjective);
       ++extra) {
    auto wider = s.tensor().wider(extra);
    if (!wider) {
      break;
    }
    auto next = inspect(*wider, op.size());
    // Merges found with less slack persist; only adopt new evidence.
    if (view.injective && !next.injective) {
      view.injective = false;
      view.merge = next.merge;
      row.slack = k + extra;
    }
    if (!view.surjective && next.surjective) {
      view.surjective = true;
      view.unreached.reset();
    }
  }
  row.injective = view.injective;
  row.surjective = view.surjective;
  row.merge = std::move(view.merge);
  row.unreached = std::move(view.unreached);
  return row;
}

TruthTable theorem21_experiment(std::size_t size, Theorem21Options options) {
  if (size < 1 || size > enumerate_ops_limit) {
    throw CarrierTooLarge("theorem21_experiment: carrier size must be 1..3");
  }
  auto carrier = make_range_carrier("X", size);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < size * size; ++i) {
    total *= size;
  }
  TruthTable tt;
  tt.size = size;
  tt.L = options.L;
  tt.k = options.k;
  tt.rows.resize(total);

  std::size_t threads = options.threads;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<std::size_t>(threads, total);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::uint64_t i = next++; i < total; i = next++) {
        auto row = theorem21_row(op_from_index(carrier, i), options.L, options.k,
                                 options.escalation);
        row.index = i;
        tt.rows[i] = std::move(row);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      failure = std::current_exception();
      next = total;
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  for (auto const& row : tt.rows) {
    ++tt.counts[row.associative][row.commutative][row.injective];
    tt.surjective += row.surjective ? 1 : 0;
    tt.associative += row.associative ? 1 : 0;
    if (!row.matches_oracle()) {
      tt.oracle_mismatches.push_back(row.index);
    }
    if (!row.matches_statement()) {
      tt.statement_mismatches.push_back(row.index);
    }
  }
  return tt;
}

IsoReport semigroup_iso_check(CayleyOp const& op, std::size_t L, std::size_t k) {
  auto const laws = check_op_laws(op);
  if (!laws.total) {
    throw PreconditionFailed("semigroup_iso_check: operation '" + op.name()
                             + "' is partial");
  }
  if (!laws.associative) {
    throw NotAssociative("semigroup_iso_check: operation '" + op.name()
                         + "' is not associative");
  }
  IsoReport r;
  r.commutative = laws.commutative;
  auto s = build_superposition(op.carrier_ptr(), relations_from_op(op), L, k);
  auto const& t = s.tensor();
  auto view = inspect(t.classes(), op.size());
  r.injective = view.injective;
  r.surjective = view.surjective;
  r.merge = std::move(view.merge);

  std::size_t const n = op.size();
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      ++r.homomorphism_checks;
      auto g = t.gamma(s.iota(x), s.iota(y));
      if (!g || *g != s.iota(op(x, y))) {
        r.homomorphism = false;
        if (!r.homomorphism_witness) {
          r.homomorphism_witness = {x, y};
        }
      }
    }
  }

  auto const& classes = t.classes();
  auto const& u = t.universe();
  std::vector<std::size_t> hits(n, 0);
  for (std::size_t c = 0; c < t.stratum_class_count() && r.fold_bijective; ++c) {
    auto const members = classes.members(c);
    Elem const v = fold(op, u.word(members.front()));
    for (std::size_t m : members) {
      if (fold(op, u.word(m)) != v) {
        r.fold_bijective = false;
        break;
      }
    }
    ++hits[v];
  }
  r.fold_bijective = r.fold_bijective && t.stratum_class_count() == n
                     && std::all_of(hits.begin(), hits.end(),
                                    [](std::size_t h) { return h == 1; });
  return r;
}

void validate(AffineConfig const& cfg) {
  if (cfg.a < 1 || cfg.b < 1 || cfg.a + cfg.b < 3) {
    throw InvalidCap("affine: need a, b >= 1 and a + b >= 3, got a = "
                     + std::to_string(cfg.a) + ", b = " + std::to_string(cfg.b));
  }
  if (cfg.N < 1 || cfg.L < 1) {
    throw InvalidCap("affine: need N >= 1 and L >= 1");
  }
}

std::vector<std::uint64_t> left_coefficients(std::uint64_t a, std::uint64_t b,
                                             std::size_t h) {
  // a^{h-1}, a^{h-2} b, ..., a b, b
  std::vector<std::uint64_t> c(h);
  std::uint64_t p = 1;
  for (std::size_t i = h; i-- > 1;) {
    c[i] = p * b;
    p *= a;
  }
  c[0] = p;
  return c;
}

std::vector<std::uint64_t> right_coefficients(std::uint64_t a, std::uint64_t b,
                                              std::size_t h) {
  // a, a b, a b^2, ..., a b^{h-2}, b^{h-1}
  std::vector<std::uint64_t> c(h);
  std::uint64_t p = 1;
  for (std::size_t i = 0; i + 1 < h; ++i) {
    c[i] = a * p;
    p *= b;
  }
  c[h - 1] = p;
  return c;
}

bool AffineReport::merge_above(Elem bound) const {
  return std::any_of(merges.begin(), merges.end(), [&](MergedPair const& m) {
    return m.first >= bound && m.second >= bound;
  });
}

AffineReport affine_experiment(AffineConfig const& cfg) {
  validate(cfg);
  AffineReport report;
  report.config = cfg;
  auto op = ops::affine(cfg.a, cfg.b, cfg.N);
  auto s = build_superposition(op.carrier_ptr(), relations_from_op(op), cfg.L, cfg.k);
  auto const& t = s.tensor();
  std::size_t const n = op.size();

  for (std::size_t h = 2; h <= cfg.L; ++h) {
    std::vector<Elem> entries(h, 0);
    while (true) {
      FoldIdentity id;
      id.entries = entries;
      id.left = grouping_chain(s, cfg, entries, true);
      id.right = grouping_chain(s, cfg, entries, false);
      if (id.left || id.right) {
        if (id.left) {
          ++report.left_attempted;
          report.left_proven += id.left->proven() ? 1 : 0;
        }
        if (id.right) {
          ++report.right_attempted;
          report.right_proven += id.right->proven() ? 1 : 0;
        }
        report.identities.push_back(std::move(id));
      }
      std::size_t i = h;
      while (i > 0 && entries[i - 1] + 1 == n) {
        entries[--i] = 0;
      }
      if (i == 0) {
        break;
      }
      ++entries[i - 1];
    }
  }

  for (Elem x = 0; x < cfg.a && x < n; ++x) {
    for (Elem y = x + 1; y < cfg.a && y < n; ++y) {
      if (s.iota(x) == s.iota(y)) {
        report.small_distinct = false;
      }
    }
  }

  auto const& classes = t.classes();
  std::map<std::size_t, Letter> first;
  for (Letter l = 0; l < n; ++l) {
    auto [it, fresh] = first.emplace(classes.class_of(l), l);
    if (!fresh) {
      MergedPair m{it->second, l, classes.chain_within(it->second, l)};
      report.chains_valid = report.chains_valid && !m.chain.empty()
                            && validate_chain(m.chain, t.system());
      report.merges.push_back(std::move(m));
    }
  }

  for (std::size_t h = 2; h <= cfg.L; ++h) {
    CoefficientCheck c;
    c.length = h;
    c.left = left_coefficients(cfg.a, cfg.b, h);
    c.right = right_coefficients(cfg.a, cfg.b, h);
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < h; ++i) {
      p *= cfg.a;
      c.claimed.push_back(p);
    }
    c.mismatch = cfg.a == cfg.b && sorted(c.claimed) != sorted(c.left)
                 && sorted(c.claimed) != sorted(c.right);
    report.coefficients.push_back(std::move(c));
  }
  return report;
}

}  // namespace tensorlab
