#include "tensorlab/tensor.hpp"

#include <algorithm>
#include <unordered_map>

#include "tensorlab/error.hpp"

namespace tensorlab {

namespace {
  constexpr std::size_t kept_examples = 8;

  Letters merged(std::span<Letter const> a, std::span<Letter const> b) {
    Letters out(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
    return out;
  }

  std::size_t ordinal_in(EquivClasses const& classes, Word const& w) {
    return classes.universe().ordinal(w);
  }
}  // namespace

char const* to_string(CapArtifact::Settled s) {
  switch (s) {
    case CapArtifact::Settled::within_cap: return "within-cap";
    case CapArtifact::Settled::wider_slack: return "wider-slack";
    case CapArtifact::Settled::lifted_chain: return "lifted-chain";
    case CapArtifact::Settled::search: return "search";
    case CapArtifact::Settled::unresolved: return "unresolved";
  }
  return "unresolved";
}

TensorSpace::TensorSpace(ClassesPtr classes, TensorOptions options)
    : classes_(std::move(classes)),
      options_(options),
      cache_(std::make_shared<Cache>()) {
  std::size_t const s = alphabet().size();
  iota_.resize(s);
  for (Letter t = 0; t < s; ++t) {
    Letter const one[] = {t};
    iota_[t] = classes_->class_of(universe().ordinal(std::span<Letter const>(one)));
  }
  cache_->wider.resize(options_.escalation);
}

std::optional<std::size_t> TensorSpace::gamma(std::size_t c,
                                              std::size_t d) const {
  auto const w = merged(representative_letters(c), representative_letters(d));
  std::size_t const ord = universe().ordinal(w);
  if (ord == npos) {
    return std::nullopt;
  }
  return classes_->class_of(ord);
}

Word TensorSpace::representative(std::size_t c) const {
  return universe().word_value(classes_->representative(c));
}

ClassesPtr TensorSpace::wider(std::size_t extra) const {
  if (extra == 0) {
    return classes_;
  }
  if (extra > cache_->wider.size()) {
    return nullptr;
  }
  std::lock_guard lock(cache_->mutex);
  auto& slot = cache_->wider[extra - 1];
  if (!slot) {
    try {
      slot = saturate(system_ptr(), cap(), slack() + extra,
                      options_.universe_budget);
    } catch (BudgetExceeded const&) {
      slot = ClassesPtr{};
    }
  }
  return *slot;
}

Equality TensorSpace::prove_equal(Word const& a, Word const& b) const {
  Equality eq;
  for (std::size_t extra = 0; extra <= options_.escalation; ++extra) {
    auto classes = wider(extra);
    if (!classes) {
      break;
    }
    std::size_t const x = ordinal_in(*classes, a);
    std::size_t const y = ordinal_in(*classes, b);
    if (x != npos && y != npos && classes->same(x, y)) {
      eq.proven = true;
      eq.how = extra == 0 ? CapArtifact::Settled::within_cap
                          : CapArtifact::Settled::wider_slack;
      eq.slack = slack() + extra;
      eq.chain = classes->chain_within(x, y);
      return eq;
    }
  }
  auto verdict = equiv_search(a, b, system(), options_.search_budget);
  if (verdict.proven()) {
    eq.proven = true;
    eq.how = CapArtifact::Settled::search;
    eq.chain = std::move(verdict.chain);
  }
  return eq;
}

WellDefinedness check_well_definedness(TensorSpace const& t) {
  WellDefinedness wd;
  auto const& classes = t.classes();
  auto const& u = t.universe();
  std::size_t const max_len = u.max_length();
  // Chains from a word to its representative, shared by every context.
  std::unordered_map<std::size_t, std::vector<Word>> to_rep;

  for (std::size_t x = 0; x < u.size(); ++x) {
    std::size_t const r = classes.representative(classes.class_of(x));
    if (r == x) {
      continue;
    }
    std::size_t const room = max_len - u.length(x);
    if (room == 0) {
      continue;
    }
    std::size_t const contexts = u.count_up_to(room);
    for (std::size_t w = 0; w < contexts; ++w) {
      if (wd.pairs_checked >= t.options().pair_budget) {
        wd.exhaustive = false;
        return wd;
      }
      ++wd.pairs_checked;
      auto const xw = merged(u.word(x), u.word(w));
      auto const rw = merged(u.word(r), u.word(w));
      if (classes.same(u.ordinal(xw), u.ordinal(rw))) {
        continue;
      }
      ++wd.mismatches;
      CapArtifact art{Word::raw(u.alphabet_ptr(), xw),
                      Word::raw(u.alphabet_ptr(), rw),
                      CapArtifact::Settled::unresolved, 0, {}};
      for (std::size_t extra = 1; extra <= t.options().escalation; ++extra) {
        auto wide = t.wider(extra);
        if (wide && wide->same(ordinal_in(*wide, art.left),
                               ordinal_in(*wide, art.right))) {
          art.how = CapArtifact::Settled::wider_slack;
          art.slack = t.slack() + extra;
          break;
        }
      }
      if (art.how == CapArtifact::Settled::unresolved) {
        auto it = to_rep.find(x);
        if (it == to_rep.end()) {
          it = to_rep.emplace(x, classes.chain_within(x, r)).first;
        }
        Word const context = u.word_value(w);
        std::vector<Word> lifted;
        lifted.reserve(it->second.size());
        for (auto const& link : it->second) {
          lifted.push_back(concat(link, context));
        }
        if (!lifted.empty() && validate_chain(lifted, t.system())) {
          art.how = CapArtifact::Settled::lifted_chain;
          art.chain = std::move(lifted);
        }
      }
      switch (art.how) {
        case CapArtifact::Settled::wider_slack: ++wd.settled_by_slack; break;
        case CapArtifact::Settled::lifted_chain: ++wd.settled_by_lifting; break;
        default: ++wd.unresolved; break;
      }
      if (wd.examples.size() < kept_examples
          || art.how == CapArtifact::Settled::unresolved) {
        wd.examples.push_back(std::move(art));
      }
    }
  }
  return wd;
}

TensorPtr build_tensor(RuleSystemPtr sys, std::size_t L, std::size_t k,
                       TensorOptions options) {
  auto classes = saturate(std::move(sys), L, k, options.universe_budget);
  auto t = std::make_shared<TensorSpace>(std::move(classes), options);
  t->wd_ = check_well_definedness(*t);
  if (!t->wd_.holds()) {
    for (auto const& art : t->wd_.examples) {
      if (art.how == CapArtifact::Settled::unresolved) {
        throw WellDefinednessViolation(
            "induced operation depends on the chosen class member",
            t->class_of(art.left), format_word(art.left),
            format_word(art.right));
      }
    }
  }
  return t;
}

GammaLaws check_gamma_laws(TensorSpace const& t, std::uint64_t triple_budget) {
  GammaLaws laws;
  std::size_t const n = t.stratum_class_count();
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t d = c + 1; d < n; ++d) {
      ++laws.pairs_checked;
      if (t.gamma(c, d) != t.gamma(d, c)) {
        ++laws.commutativity_failures;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto ab = t.gamma(a, b);
      if (!ab) {
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (laws.triples_checked >= triple_budget) {
          laws.exhaustive = false;
          return laws;
        }
        auto bc = t.gamma(b, c);
        if (!bc) {
          continue;
        }
        auto left = t.gamma(*ab, c);
        auto right = t.gamma(a, *bc);
        if (!left || !right) {
          continue;
        }
        ++laws.triples_checked;
        if (*left == *right) {
          continue;
        }
        ++laws.associativity_mismatches;
        CapArtifact art{concat(t.representative(*ab), t.representative(c)),
                        concat(t.representative(a), t.representative(*bc)),
                        CapArtifact::Settled::unresolved, 0, {}};
        auto eq = t.prove_equal(art.left, art.right);
        if (eq.proven) {
          ++laws.associativity_settled;
          art.how = eq.how;
          art.slack = eq.slack;
          art.chain = std::move(eq.chain);
        }
        if (laws.examples.size() < kept_examples) {
          laws.examples.push_back(std::move(art));
        }
      }
    }
  }
  return laws;
}

IotaReport analyze_iota(TensorSpace const& t) {
  IotaReport report;
  report.cap = t.cap();
  report.slack = t.slack();
  auto const& classes = t.classes();
  std::size_t const s = t.alphabet().size();
  // Length-1 words occupy ordinals 0..s-1 in letter order.
  std::unordered_map<std::size_t, Letter> first_letter;
  for (Letter l = 0; l < s; ++l) {
    auto [it, fresh] = first_letter.emplace(t.iota(l), l);
    if (!fresh) {
      report.injective_within_cap = false;
      report.merged.push_back(
          {it->second, l, classes.chain_within(it->second, l)});
    }
  }
  report.unreached = entangled(t);
  report.surjective_within_cap = report.unreached.empty();
  for (std::size_t c : report.unreached) {
    report.unreached_representatives.push_back(t.representative(c));
  }
  return report;
}

std::vector<std::size_t> entangled(TensorSpace const& t) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < t.stratum_class_count(); ++c) {
    if (t.representative_length(c) >= 2) {
      out.push_back(c);
    }
  }
  return out;
}

RefinementMap refinement(TensorPtr source, TensorPtr target) {
  if (!same_alphabet(source->alphabet(), target->alphabet())) {
    throw AlphabetMismatch("refinement: tensors use different alphabets");
  }
  if (source->cap() != target->cap() || source->slack() != target->slack()) {
    throw ShapeMismatch("refinement: tensors use different caps");
  }
  if (!source->system().rules_subset_of(target->system())) {
    throw RuleSetNotNested(
        "refinement: source rules are not contained in target rules");
  }
  RefinementMap r;
  r.source = source;
  r.target = target;
  auto const& sc = source->classes();
  auto const& tc = target->classes();
  r.map.resize(sc.class_count());
  std::vector<bool> hit(tc.class_count(), false);
  for (std::size_t c = 0; c < sc.class_count(); ++c) {
    r.map[c] = tc.class_of(sc.representative(c));
    hit[r.map[c]] = true;
    for (std::size_t m : sc.members(c)) {
      if (tc.class_of(m) != r.map[c]) {
        r.well_defined = false;
      }
    }
  }
  r.surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });

  std::size_t const n = source->stratum_class_count();
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t d = c; d < n; ++d) {
      auto g = source->gamma(c, d);
      if (!g) {
        continue;
      }
      auto h = target->gamma(r.map[c], r.map[d]);
      if (!h) {
        continue;
      }
      ++r.homomorphism_checks;
      if (r.map[*g] == *h) {
        continue;
      }
      auto eq = target->prove_equal(
          target->representative(r.map[*g]),
          concat(target->representative(r.map[c]),
                 target->representative(r.map[d])));
      if (eq.proven) {
        ++r.settled_beyond_cap;
      } else {
        r.homomorphism = false;
      }
    }
  }
  return r;
}

TensorPtr multiset_quotient(CarrierPtr E, std::size_t L) {
  auto alphabet = make_alphabet({std::move(E)});
  return build_tensor(std::make_shared<RuleSystem const>(empty_system(alphabet)),
                      L, 0);
}

}  // namespace tensorlab
