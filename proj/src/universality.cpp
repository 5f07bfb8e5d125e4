#include "tensorlab/universality.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "tensorlab/error.hpp"

namespace tensorlab {

////////////////////////////////////////////////////////////////////////////
// Maps
////////////////////////////////////////////////////////////////////////////

FiniteMap::FiniteMap(std::size_t codomain, std::vector<Elem> t, std::string n)
    : domain_size(t.size()),
      codomain_size(codomain),
      table(std::move(t)),
      name(std::move(n)) {
  for (Elem v : table) {
    if (v >= codomain_size) {
      throw ShapeMismatch("finite map '" + name + "' leaves its codomain");
    }
  }
}

FiniteMap FiniteMap::identity(std::size_t n) {
  std::vector<Elem> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<Elem>(i);
  }
  return FiniteMap(n, std::move(t), "id");
}

FiniteMap FiniteMap::constant(std::size_t domain, std::size_t codomain,
                              Elem value) {
  return FiniteMap(codomain, std::vector<Elem>(domain, value),
                   "const " + std::to_string(value));
}

BiMap::BiMap(CarrierPtr X, CarrierPtr Y, CarrierPtr U, std::vector<Elem> table,
             std::string name)
    : x_(std::move(X)),
      y_(std::move(Y)),
      u_(std::move(U)),
      table_(std::move(table)),
      name_(std::move(name)) {
  if (table_.size() != x_->size() * y_->size()) {
    throw ShapeMismatch("bimap table has " + std::to_string(table_.size())
                        + " entries, expected "
                        + std::to_string(x_->size() * y_->size()));
  }
  for (Elem v : table_) {
    if (v >= u_->size()) {
      throw ShapeMismatch("bimap value outside " + u_->name());
    }
  }
}

BiMap BiMap::from_function(CarrierPtr X, CarrierPtr Y, CarrierPtr U,
                           std::function<Elem(Elem, Elem)> const& f,
                           std::string name) {
  std::vector<Elem> t;
  t.reserve(X->size() * Y->size());
  for (Elem x = 0; x < X->size(); ++x) {
    for (Elem y = 0; y < Y->size(); ++y) {
      t.push_back(f(x, y));
    }
  }
  return BiMap(std::move(X), std::move(Y), std::move(U), std::move(t),
               std::move(name));
}

void for_each_bimap(CarrierPtr const& X, CarrierPtr const& Y,
                    CarrierPtr const& U,
                    std::function<void(BiMap const&)> const& fn) {
  std::size_t const cells = X->size() * Y->size();
  Elem const base = static_cast<Elem>(U->size());
  std::vector<Elem> t(cells, 0);
  while (true) {
    fn(BiMap(X, Y, U, t));
    std::size_t i = cells;
    while (i > 0 && t[i - 1] + 1 == base) {
      t[--i] = 0;
    }
    if (i == 0) {
      return;
    }
    ++t[i - 1];
  }
}

HomomorphismReport is_homomorphism(FiniteMap const& f, CayleyOp const& opS,
                                   CayleyOp const& opT) {
  if (f.domain_size != opS.size() || f.codomain_size != opT.size()) {
    throw ShapeMismatch("is_homomorphism: map shape does not match operations");
  }
  HomomorphismReport r;
  for (Elem x = 0; x < opS.size(); ++x) {
    for (Elem y = 0; y < opS.size(); ++y) {
      if (!opS.defined(x, y)) {
        continue;
      }
      ++r.checked;
      Elem const image = opT(f(x), f(y));
      if (image == undefined || image != f(opS(x, y))) {
        r.holds = false;
        r.witness = {x, y};
        return r;
      }
    }
  }
  return r;
}

////////////////////////////////////////////////////////////////////////////
// Bihomomorphisms
////////////////////////////////////////////////////////////////////////////

namespace {
  void require_bimap_shape(BiMap const& g, CayleyOp const& delta) {
    if (!same_carrier(*g.U(), delta.carrier())) {
      throw CarrierMismatch("δ lives on '" + delta.carrier().name()
                            + "', g maps into '" + g.U()->name() + "'");
    }
  }
}  // namespace

BihomReport image_laws(BiMap const& g, CayleyOp const& delta) {
  require_bimap_shape(g, delta);
  BihomReport r;
  Subset image(g.U());
  for (Elem v : g.table()) {
    image.insert(v);
  }
  r.image = image.elements();
  for (Elem a : r.image) {
    for (Elem b : r.image) {
      if (a < b && delta(a, b) != delta(b, a) && !r.commutativity_witness) {
        r.image_commutative = false;
        r.commutativity_witness = {a, b};
      }
    }
  }
  auto closure = stable_closure(delta, image);
  r.image_closure = closure.elements();
  for (Elem a : r.image_closure) {
    for (Elem b : r.image_closure) {
      Elem const ab = delta(a, b);
      if (ab == undefined) {
        r.closure_total = false;
        continue;
      }
      if (!r.image_associative) {
        continue;
      }
      for (Elem c : r.image_closure) {
        Elem const bc = delta(b, c);
        if (bc == undefined) {
          continue;
        }
        Elem const left = delta(ab, c);
        Elem const right = delta(a, bc);
        if (left != undefined && right != undefined && left != right) {
          r.image_associative = false;
          r.associativity_witness = {{a, b, c}};
          break;
        }
      }
    }
  }
  return r;
}

BihomReport is_commuting_bihomomorphism(BiMap const& g, CayleyOp const& alpha,
                                        CayleyOp const& beta,
                                        CayleyOp const& delta) {
  if (!same_carrier(*g.X(), alpha.carrier())
      || !same_carrier(*g.Y(), beta.carrier())) {
    throw CarrierMismatch("is_commuting_bihomomorphism: g and α, β disagree");
  }
  BihomReport r = image_laws(g, delta);
  Elem const nx = static_cast<Elem>(g.X()->size());
  Elem const ny = static_cast<Elem>(g.Y()->size());
  for (Elem x = 0; x < nx && r.left_distributive; ++x) {
    for (Elem xp = 0; xp < nx && r.left_distributive; ++xp) {
      if (!alpha.defined(x, xp)) {
        continue;
      }
      for (Elem y = 0; y < ny; ++y) {
        Elem const lhs = g(alpha(x, xp), y);
        Elem const rhs = delta(g(x, y), g(xp, y));
        if (lhs != rhs) {
          r.left_distributive = false;
          r.left_witness = {{x, xp, y}};
          break;
        }
      }
    }
  }
  for (Elem x = 0; x < nx && r.right_distributive; ++x) {
    for (Elem y = 0; y < ny && r.right_distributive; ++y) {
      for (Elem yp = 0; yp < ny; ++yp) {
        if (!beta.defined(y, yp)) {
          continue;
        }
        Elem const lhs = g(x, beta(y, yp));
        Elem const rhs = delta(g(x, y), g(x, yp));
        if (lhs != rhs) {
          r.right_distributive = false;
          r.right_witness = {{x, y, yp}};
          break;
        }
      }
    }
  }
  return r;
}

Elem fold_word(BiMap const& g, CayleyOp const& delta,
               TupleAlphabet const& alphabet, std::span<Letter const> word) {
  if (word.empty()) {
    return undefined;
  }
  auto value = [&](Letter l) {
    return g(alphabet.component(l, 0), alphabet.component(l, 1));
  };
  Elem acc = value(word[0]);
  for (std::size_t i = 1; i < word.size() && acc != undefined; ++i) {
    acc = delta(acc, value(word[i]));
  }
  return acc;
}

namespace {
  void require_tensor_shape(BiMap const& g, TupleAlphabet const& alphabet) {
    if (alphabet.factor_count() != 2
        || !same_carrier(alphabet.factor(0), *g.X())
        || !same_carrier(alphabet.factor(1), *g.Y())) {
      throw CarrierMismatch("g is not defined on the tensor's factors");
    }
  }
}  // namespace

bool respects_rules(BiMap const& g, CayleyOp const& delta,
                    RuleSystem const& sys) {
  require_tensor_shape(g, *sys.alphabet);
  for (auto const& rule : sys.rules) {
    Elem const l = fold_word(g, delta, *sys.alphabet, rule.left);
    Elem const r = fold_word(g, delta, *sys.alphabet, rule.right);
    if (l == undefined || r == undefined || l != r) {
      return false;
    }
  }
  return true;
}

////////////////////////////////////////////////////////////////////////////
// Factorization through the tensor
////////////////////////////////////////////////////////////////////////////

Factorization factor_through_tensor(BiMap const& g, TensorSpace const& t,
                                    CayleyOp const& delta) {
  auto const& alphabet = t.alphabet();
  require_tensor_shape(g, alphabet);
  auto const laws = image_laws(g, delta);
  if (!laws.image_commutative) {
    throw PreconditionFailed("δ is not commutative on the image of g");
  }
  if (!laws.closure_total) {
    throw PreconditionFailed("δ is partial on the closure of the image of g");
  }
  if (!respects_rules(g, delta, t.system())) {
    throw PreconditionFailed("g does not respect the rules of the tensor");
  }

  auto const& classes = t.classes();
  auto const& u = t.universe();
  std::size_t const n = classes.class_count();
  std::vector<Elem> h(n);
  for (std::size_t c = 0; c < n; ++c) {
    h[c] = fold_word(g, delta, alphabet, t.representative_letters(c));
  }

  Factorization f;
  // (a) every member folds like the representative.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t m : classes.members(c)) {
      ++f.members_checked;
      if (fold_word(g, delta, alphabet, u.word(m)) != h[c]) {
        f.well_defined = false;
        std::string what = laws.image_associative
                               ? "class members fold to different values"
                               : "δ is not associative on the image of g: "
                                 "class members fold to different values";
        throw WellDefinednessViolation(what, c, format_word(t.representative(c)),
                                       format_word(u.word_value(m)));
      }
    }
  }
  if (!laws.image_associative) {
    throw PreconditionFailed(
        "δ is not associative on the image of g; no class within cap "
        "exposes it");
  }
  f.h = FiniteMap(g.U()->size(), h, "h");

  // (b) h ∘ ι = g.
  Elem const nx = static_cast<Elem>(g.X()->size());
  Elem const ny = static_cast<Elem>(g.Y()->size());
  for (Elem x = 0; x < nx; ++x) {
    for (Elem y = 0; y < ny; ++y) {
      Elem const tuple[] = {x, y};
      if (h[t.iota(tuple)] != g(x, y)) {
        f.triangle = false;
      }
    }
  }

  // (c) h(γ(c, d)) = δ(h(c), h(d)).
  std::size_t const strat = t.stratum_class_count();
  for (std::size_t c = 0; c < strat; ++c) {
    for (std::size_t d = c; d < strat; ++d) {
      auto cd = t.gamma(c, d);
      if (!cd) {
        continue;
      }
      ++f.homomorphism_checks;
      if (h[*cd] != delta(h[c], h[d])) {
        f.homomorphism = false;
      }
    }
  }

  // (d) Propagate the values forced by h ∘ ι = g and γ-compatibility.
  std::vector<Elem> forced(n, undefined);
  std::vector<std::size_t> reached;
  std::deque<std::size_t> fresh;
  bool conflict = false;
  auto force = [&](std::size_t c, Elem v) {
    if (forced[c] == undefined) {
      forced[c] = v;
      fresh.push_back(c);
    } else if (forced[c] != v) {
      conflict = true;
    }
  };
  for (Elem x = 0; x < nx; ++x) {
    for (Elem y = 0; y < ny; ++y) {
      Elem const tuple[] = {x, y};
      force(t.iota(tuple), g(x, y));
    }
  }
  while (!fresh.empty()) {
    std::size_t const c = fresh.front();
    fresh.pop_front();
    reached.push_back(c);
    for (std::size_t d : reached) {
      if (auto cd = t.gamma(c, d)) {
        force(*cd, delta(forced[c], forced[d]));
      }
    }
  }
  f.reachable = reached.size();
  f.unique = !conflict;
  for (std::size_t c : reached) {
    if (forced[c] != h[c]) {
      f.unique = false;
    }
  }
  return f;
}

RefinedFactorization factor_through_refinement(BiMap const& g,
                                               RefinementMap const& r,
                                               CayleyOp const& delta) {
  RefinedFactorization out;
  out.fine = factor_through_tensor(g, *r.source, delta);
  out.coarse = factor_through_tensor(g, *r.target, delta);
  for (std::size_t c = 0; c < r.map.size(); ++c) {
    if (out.fine.h(c) != out.coarse.h(r.map[c])) {
      out.consistent = false;
    }
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Free semigroup
////////////////////////////////////////////////////////////////////////////

std::size_t FreeFold::index_of(std::span<Letter const> w) const {
  std::size_t offset = 0;
  std::size_t block = 1;
  for (std::size_t h = 1; h < w.size(); ++h) {
    block *= letters;
    offset += block;
  }
  std::size_t rank = 0;
  for (Letter l : w) {
    rank = rank * letters + l;
  }
  return offset + rank;
}

bool respects_concatenation(FreeFold const& ff, std::vector<Elem> const& values,
                            CayleyOp const& opS) {
  for (std::size_t i = 0; i < ff.words.size(); ++i) {
    auto const& w = ff.words[i];
    for (std::size_t split = 1; split < w.size(); ++split) {
      std::span<Letter const> const all(w);
      Elem const left = values[ff.index_of(all.first(split))];
      Elem const right = values[ff.index_of(all.subspan(split))];
      if (opS(left, right) != values[i]) {
        return false;
      }
    }
  }
  return true;
}

FreeFold free_fold(FiniteMap const& j, CayleyOp const& opS,
                   std::size_t max_length) {
  if (j.codomain_size != opS.size()) {
    throw ShapeMismatch("free_fold: j does not map into the semigroup");
  }
  auto const laws = check_op_laws(opS);
  if (!laws.total) {
    throw PreconditionFailed("free_fold: the semigroup operation is partial");
  }
  if (!laws.associative) {
    throw NotAssociative("free_fold: '" + opS.name() + "' is not associative");
  }
  FreeFold ff;
  ff.letters = j.domain_size;
  ff.max_length = max_length;
  for (std::size_t h = 1; h <= max_length; ++h) {
    Letters w(h, 0);
    while (true) {
      ff.words.push_back(w);
      std::size_t i = h;
      while (i > 0 && w[i - 1] + 1 == ff.letters) {
        w[--i] = 0;
      }
      if (i == 0) {
        break;
      }
      ++w[i - 1];
    }
  }
  ff.values.reserve(ff.words.size());
  for (auto const& w : ff.words) {
    Elem acc = j(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
      acc = opS(acc, j(w[i]));
    }
    ff.values.push_back(acc);
  }
  for (auto const& w : ff.words) {
    ff.homomorphism_checks += w.size() - 1;
  }
  ff.homomorphism = respects_concatenation(ff, ff.values, opS);
  for (Letter a = 0; a < ff.letters; ++a) {
    Letter const one[] = {a};
    if (ff.values[ff.index_of(one)] != j(a)) {
      ff.triangle = false;
    }
  }
  // Any homomorphism extending j is forced on w = w' a by f(w') ⋆ j(a).
  for (std::size_t i = 0; i < ff.words.size(); ++i) {
    auto const& w = ff.words[i];
    if (w.size() < 2) {
      continue;
    }
    std::span<Letter const> const all(w);
    Elem const forced = opS(ff.values[ff.index_of(all.first(w.size() - 1))],
                            j(w.back()));
    if (forced != ff.values[i]) {
      ff.unique = false;
    }
  }
  std::vector<bool> hit(opS.size(), false);
  for (Elem v : ff.values) {
    hit[v] = true;
  }
  ff.surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  return ff;
}

////////////////////////////////////////////////////////////////////////////
// Kernel factorization
////////////////////////////////////////////////////////////////////////////

CongruenceWitness check_congruence(CayleyOp const& op,
                                   std::vector<std::size_t> class_of) {
  if (class_of.size() != op.size()) {
    throw ShapeMismatch("check_congruence: partition does not cover the carrier");
  }
  // Renumber classes by least member.
  std::map<std::size_t, std::size_t> renumber;
  for (auto& c : class_of) {
    auto [it, fresh] = renumber.emplace(c, renumber.size());
    c = it->second;
  }
  CongruenceWitness w{op, std::move(class_of), renumber.size(), true, {}};
  Elem const n = static_cast<Elem>(op.size());
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      if (a == b || w.class_of[a] != w.class_of[b]) {
        continue;
      }
      for (Elem c = 0; c < n; ++c) {
        if (w.class_of[op(a, c)] != w.class_of[op(b, c)]
            || w.class_of[op(c, a)] != w.class_of[op(c, b)]) {
          w.is_congruence = false;
          w.witness = {{a, b, c}};
          return w;
        }
      }
    }
  }
  return w;
}

KerFactorization ker_factorization(FiniteMap const& f, CayleyOp const& opS,
                                   CayleyOp const& opT) {
  if (!opS.total() || !opT.total()) {
    throw NotAHomomorphism("ker_factorization: operations must be total");
  }
  auto hom = is_homomorphism(f, opS, opT);
  if (!hom.holds) {
    throw NotAHomomorphism("ker_factorization: '" + f.name
                           + "' is not a homomorphism");
  }
  std::vector<std::size_t> fiber(f.table.begin(), f.table.end());
  auto kernel = check_congruence(opS, fiber);
  std::size_t const k = kernel.class_count;
  Elem const n = static_cast<Elem>(opS.size());

  std::vector<Elem> least(k, undefined);
  for (Elem u = 0; u < n; ++u) {
    auto& slot = least[kernel.class_of[u]];
    if (slot == undefined) {
      slot = u;
    }
  }
  std::vector<std::string> names;
  for (Elem u : least) {
    names.push_back("[" + opS.carrier().element(u) + "]");
  }
  auto qcarrier = make_carrier(opS.carrier().name() + "/ker", names);
  std::vector<Elem> qtable(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      qtable[a * k + b] = static_cast<Elem>(kernel.class_of[opS(least[a], least[b])]);
    }
  }
  std::vector<Elem> proj(n);
  for (Elem u = 0; u < n; ++u) {
    proj[u] = static_cast<Elem>(kernel.class_of[u]);
  }
  std::vector<Elem> mono(k);
  for (std::size_t c = 0; c < k; ++c) {
    mono[c] = f(least[c]);
  }
  KerFactorization out{std::move(kernel), CayleyOp(qcarrier, qtable, "quotient"),
                       FiniteMap(k, proj, "projection"),
                       FiniteMap(opT.size(), mono, "mono")};
  for (Elem u = 0; u < n; ++u) {
    for (Elem v = 0; v < n; ++v) {
      if (out.quotient(proj[u], proj[v]) != proj[opS(u, v)]) {
        out.quotient_well_defined = false;
      }
    }
    if (out.mono(out.projection(u)) != f(u)) {
      out.diagram_commutes = false;
    }
  }
  std::vector<Elem> sorted = mono;
  std::sort(sorted.begin(), sorted.end());
  out.mono_injective =
      std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  out.mono_homomorphism = is_homomorphism(out.mono, out.quotient, opT).holds;
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Cayley embedding
////////////////////////////////////////////////////////////////////////////

CayleyEmbedding cayley_embed(CayleyOp const& opS) {
  auto const laws = check_op_laws(opS);
  if (!laws.total) {
    throw PreconditionFailed("cayley_embed: the operation is partial");
  }
  if (!laws.associative) {
    throw NotAssociative("cayley_embed: '" + opS.name() + "' is not associative");
  }
  CayleyEmbedding e;
  Elem const n = static_cast<Elem>(opS.size());
  for (Elem cand = 0; cand < n && !e.neutral; ++cand) {
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x) {
      ok = opS(cand, x) == x && opS(x, cand) == x;
    }
    if (ok) {
      e.neutral = cand;
    }
  }
  e.adjoined_identity = !e.neutral;
  e.monoid_size = n + (e.adjoined_identity ? 1 : 0);
  Elem const adjoined = n;
  // u ⋆ x on S¹, where the adjoined element acts as a two-sided unit.
  auto mul = [&](Elem u, Elem x) {
    if (e.adjoined_identity && x == adjoined) {
      return u;
    }
    return opS(u, x);
  };
  e.translations.assign(n, std::vector<Elem>(e.monoid_size));
  for (Elem u = 0; u < n; ++u) {
    for (Elem x = 0; x < e.monoid_size; ++x) {
      e.translations[u][x] = mul(u, x);
    }
  }
  for (Elem u = 0; u < n; ++u) {
    for (Elem v = 0; v < n; ++v) {
      auto const& uv = e.translations[opS(u, v)];
      for (Elem x = 0; x < e.monoid_size; ++x) {
        if (uv[x] != e.translations[u][e.translations[v][x]]) {
          e.homomorphism = false;
        }
      }
      if (u < v && e.translations[u] == e.translations[v]) {
        e.injective = false;
      }
    }
  }
  return e;
}

////////////////////////////////////////////////////////////////////////////
// Cartesian pairing
////////////////////////////////////////////////////////////////////////////

Pairing cartesian_pairing(FiniteMap const& f, FiniteMap const& g,
                          std::uint64_t exhaustive_limit) {
  if (f.domain_size != g.domain_size) {
    throw ShapeMismatch("cartesian_pairing: f and g have different domains");
  }
  std::size_t const nz = f.domain_size;
  std::size_t const ny = g.codomain_size;
  std::size_t const pairs = f.codomain_size * ny;
  std::vector<Elem> t(nz);
  for (std::size_t z = 0; z < nz; ++z) {
    t[z] = static_cast<Elem>(f(z) * ny + g(z));
  }
  Pairing p;
  p.h = FiniteMap(pairs, t, "pairing");
  auto satisfies = [&](std::vector<Elem> const& cand) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (cand[z] / ny != f(z) || cand[z] % ny != g(z)) {
        return false;
      }
    }
    return true;
  };
  p.projections_hold = satisfies(t);

  std::uint64_t total = 1;
  for (std::size_t z = 0; z < nz && total <= exhaustive_limit; ++z) {
    total *= pairs;
  }
  if (total > exhaustive_limit || pairs == 0) {
    p.exhaustive = false;
    return p;
  }
  std::uint64_t solutions = 0;
  std::vector<Elem> cand(nz, 0);
  while (true) {
    ++p.candidates_checked;
    if (satisfies(cand)) {
      ++solutions;
      if (cand != t) {
        p.unique = false;
      }
    }
    std::size_t i = nz;
    while (i > 0 && cand[i - 1] + 1 == pairs) {
      cand[--i] = 0;
    }
    if (i == 0) {
      break;
    }
    ++cand[i - 1];
  }
  p.unique = p.unique && solutions == 1;
  return p;
}

}  // namespace tensorlab
