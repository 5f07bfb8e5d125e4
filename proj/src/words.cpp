#include "tensorlab/words.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tensorlab {

TupleAlphabet::TupleAlphabet(std::vector<CarrierPtr> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw Error("an alphabet needs at least one factor");
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= factors_[i]->size();
  }
}

Letter TupleAlphabet::encode(std::span<Elem const> tuple) const {
  if (tuple.size() != factors_.size()) {
    throw ShapeMismatch("tuple has " + std::to_string(tuple.size())
                        + " components, alphabet has "
                        + std::to_string(factors_.size()) + " factors");
  }
  std::size_t letter = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= factors_[i]->size()) {
      throw Error("tuple component " + std::to_string(tuple[i])
                  + " outside factor '" + factors_[i]->name() + "'");
    }
    letter += tuple[i] * strides_[i];
  }
  return static_cast<Letter>(letter);
}

std::vector<Elem> TupleAlphabet::decode(Letter letter) const {
  std::vector<Elem> tuple(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    tuple[i] = component(letter, i);
  }
  return tuple;
}

Elem TupleAlphabet::component(Letter letter, std::size_t factor) const {
  return static_cast<Elem>((letter / strides_[factor])
                           % factors_[factor]->size());
}

Letter TupleAlphabet::with_component(Letter letter, std::size_t factor,
                                     Elem value) const {
  Elem const old = component(letter, factor);
  return static_cast<Letter>(letter - old * strides_[factor]
                             + value * strides_[factor]);
}

std::string TupleAlphabet::format_letter(Letter letter) const {
  if (factors_.size() == 1) {
    return factors_[0]->element(letter);
  }
  std::string out = "(";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += factors_[i]->element(component(letter, i));
  }
  out += ')';
  return out;
}

namespace {
  std::string_view trim(std::string_view s) {
    auto const first = s.find_first_not_of(" \t\n\r");
    if (first == std::string_view::npos) {
      return {};
    }
    auto const last = s.find_last_not_of(" \t\n\r");
    return s.substr(first, last - first + 1);
  }
}  // namespace

std::optional<Letter> TupleAlphabet::parse_letter(std::string_view text) const {
  text = trim(text);
  if (factors_.size() == 1) {
    if (auto exact = factors_[0]->index_of(text)) {
      return static_cast<Letter>(*exact);
    }
    if (!text.empty() && text.front() == '(' && text.back() == ')') {
      text = trim(text.substr(1, text.size() - 2));
    }
    auto i = factors_[0]->index_of(text);
    if (!i) {
      return std::nullopt;
    }
    return static_cast<Letter>(*i);
  }
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    return std::nullopt;
  }
  text = text.substr(1, text.size() - 2);
  std::vector<Elem> tuple;
  std::size_t start = 0;
  while (true) {
    auto const comma = text.find(',', start);
    auto part = trim(text.substr(start, comma == std::string_view::npos
                                            ? std::string_view::npos
                                            : comma - start));
    if (tuple.size() >= factors_.size()) {
      return std::nullopt;
    }
    auto i = factors_[tuple.size()]->index_of(part);
    if (!i) {
      return std::nullopt;
    }
    tuple.push_back(*i);
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  if (tuple.size() != factors_.size()) {
    return std::nullopt;
  }
  return encode(tuple);
}

bool TupleAlphabet::operator==(TupleAlphabet const& other) const {
  if (factors_.size() != other.factors_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!same_carrier(*factors_[i], *other.factors_[i])) {
      return false;
    }
  }
  return true;
}

AlphabetPtr make_alphabet(std::vector<CarrierPtr> factors) {
  return std::make_shared<TupleAlphabet const>(std::move(factors));
}

bool same_alphabet(TupleAlphabet const& a, TupleAlphabet const& b) {
  return &a == &b || a == b;
}

////////////////////////////////////////////////////////////////////////////
// Word
////////////////////////////////////////////////////////////////////////////

Word::Word(AlphabetPtr alphabet, Letters letters, bool canonical)
    : alphabet_(std::move(alphabet)),
      letters_(std::move(letters)),
      canonical_(canonical) {
  if (letters_.empty()) {
    throw Error("words are nonempty");
  }
  for (Letter l : letters_) {
    if (l >= alphabet_->size()) {
      throw Error("letter " + std::to_string(l) + " outside the alphabet");
    }
  }
}

Word Word::canonical(AlphabetPtr alphabet, Letters letters) {
  std::sort(letters.begin(), letters.end());
  return Word(std::move(alphabet), std::move(letters), true);
}

Word Word::raw(AlphabetPtr alphabet, Letters letters) {
  bool const sorted = std::is_sorted(letters.begin(), letters.end());
  return Word(std::move(alphabet), std::move(letters), sorted);
}

Word Word::single(AlphabetPtr alphabet, Letter letter) {
  return Word(std::move(alphabet), Letters{letter}, true);
}

bool Word::operator<(Word const& other) const {
  if (length() != other.length()) {
    return length() < other.length();
  }
  return letters_ < other.letters_;
}

namespace {
  void require_same_alphabet(Word const& u, Word const& w) {
    if (!same_alphabet(u.alphabet(), w.alphabet())) {
      throw AlphabetMismatch("words over different alphabets");
    }
  }
}  // namespace

Word concat(Word const& u, Word const& w) {
  require_same_alphabet(u, w);
  Letters out;
  out.reserve(u.length() + w.length());
  if (u.is_canonical() && w.is_canonical()) {
    std::merge(u.letters().begin(), u.letters().end(), w.letters().begin(),
               w.letters().end(), std::back_inserter(out));
    return Word::raw(u.alphabet_ptr(), std::move(out));
  }
  out = u.letters();
  out.insert(out.end(), w.letters().begin(), w.letters().end());
  return Word::canonical(u.alphabet_ptr(), std::move(out));
}

Word juxtapose(Word const& u, Word const& w) {
  require_same_alphabet(u, w);
  Letters out = u.letters();
  out.insert(out.end(), w.letters().begin(), w.letters().end());
  return Word::raw(u.alphabet_ptr(), std::move(out));
}

Word canonical(Word const& w) {
  if (w.is_canonical()) {
    return w;
  }
  return Word::canonical(w.alphabet_ptr(), w.letters());
}

std::string format_letters(TupleAlphabet const& alphabet,
                           std::span<Letter const> letters) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0) {
      out += " | ";
    }
    out += alphabet.format_letter(letters[i]);
  }
  return out;
}

std::string format_word(Word const& w) {
  return format_letters(w.alphabet(), w.letters());
}

Word parse_word(AlphabetPtr const& alphabet, std::string_view text,
                bool keep_order) {
  // "γ" is two bytes in UTF-8; normalize it to '|'.
  std::string normalized;
  normalized.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.substr(i, 2) == "\xce\xb3") {
      normalized += '|';
      ++i;
    } else {
      normalized += text[i];
    }
  }
  Letters letters;
  std::string_view rest = normalized;
  while (true) {
    auto const bar = rest.find('|');
    auto part = trim(rest.substr(0, bar));
    if (part.empty()) {
      throw Error("empty entry in word '" + std::string(text) + "'");
    }
    auto letter = alphabet->parse_letter(part);
    if (!letter) {
      throw Error("cannot parse '" + std::string(part) + "' as a letter");
    }
    letters.push_back(*letter);
    if (bar == std::string_view::npos) {
      break;
    }
    rest = rest.substr(bar + 1);
  }
  if (keep_order) {
    return Word::raw(alphabet, std::move(letters));
  }
  return Word::canonical(alphabet, std::move(letters));
}

////////////////////////////////////////////////////////////////////////////
// Rules
////////////////////////////////////////////////////////////////////////////

std::pair<Letters, Letters> Rule::normalized() const {
  if (right < left) {
    return {right, left};
  }
  return {left, right};
}

std::string to_string(Provenance::Kind kind) {
  switch (kind) {
    case Provenance::Kind::binary_ops:
      return "binary-ops";
    case Provenance::Kind::generators:
      return "generators";
    case Provenance::Kind::op_sets:
      return "op-sets";
    case Provenance::Kind::explicit_relations:
      return "explicit";
  }
  return "unknown";
}

bool RuleSystem::has_deletion_rules() const {
  return std::any_of(rules.begin(), rules.end(),
                     [](Rule const& r) { return r.is_deletion(); });
}

bool RuleSystem::rules_subset_of(RuleSystem const& other) const {
  std::set<std::pair<Letters, Letters>> theirs;
  for (auto const& r : other.rules) {
    theirs.insert(r.normalized());
  }
  return std::all_of(rules.begin(), rules.end(), [&](Rule const& r) {
    return theirs.count(r.normalized()) > 0;
  });
}

RuleSystem empty_system(AlphabetPtr alphabet) {
  RuleSystem sys;
  sys.alphabet = std::move(alphabet);
  sys.provenance.kind = Provenance::Kind::explicit_relations;
  sys.provenance.description = "permutation only";
  return sys;
}

namespace {
  void require_factor(TupleAlphabet const& alphabet, std::size_t factor,
                      CayleyOp const& op) {
    if (alphabet.factor_count() != 2) {
      throw FactorMismatch("binary-operation rules need a two-factor alphabet");
    }
    if (!same_carrier(alphabet.factor(factor), op.carrier())) {
      throw FactorMismatch("operation '" + op.name() + "' lives on '"
                           + op.carrier().name() + "', factor "
                           + std::to_string(factor) + " is '"
                           + alphabet.factor(factor).name() + "'");
    }
  }

  Letters sorted_pair(Letter a, Letter b) {
    return a <= b ? Letters{a, b} : Letters{b, a};
  }

  // Appends the instantiations of one operation acting on `side`.
  void add_op_rules(TupleAlphabet const& alphabet, std::size_t side,
                    CayleyOp const& op, std::vector<Rule>& rules,
                    std::set<RuleOrigin>* seen) {
    std::size_t const other = 1 - side;
    auto const n = static_cast<Elem>(op.size());
    auto const m = static_cast<Elem>(alphabet.factor(other).size());
    char const* sym = side == 0 ? "α" : "β";
    for (Elem x = 0; x < n; ++x) {
      for (Elem x2 = 0; x2 < n; ++x2) {
        Elem const v = op(x, x2);
        if (v == undefined) {
          continue;
        }
        for (Elem c = 0; c < m; ++c) {
          RuleOrigin origin;
          origin.kind = RuleOrigin::Kind::binary_op;
          origin.side = side;
          origin.first = x;
          origin.second = x2;
          origin.fixed = c;
          // Operations agreeing on an entry instantiate the same rule.
          origin.relation = v;
          if (seen != nullptr && !seen->insert(origin).second) {
            continue;
          }
          std::vector<Elem> t(2);
          t[other] = c;
          t[side] = x;
          Letter const a = alphabet.encode(t);
          t[side] = x2;
          Letter const b = alphabet.encode(t);
          t[side] = v;
          Letter const r = alphabet.encode(t);
          Rule rule;
          rule.left = sorted_pair(a, b);
          rule.right = Letters{r};
          rule.label = std::string(sym) + "(" + op.carrier().element(x) + ","
                       + op.carrier().element(x2) + ")="
                       + op.carrier().element(v) + " @"
                       + alphabet.factor(other).element(c);
          rule.origin = origin;
          rules.push_back(std::move(rule));
        }
      }
    }
  }
}  // namespace

RuleSystem compile_from_binary_ops(AlphabetPtr const& alphabet,
                                   CayleyOp const& alpha,
                                   CayleyOp const& beta) {
  require_factor(*alphabet, 0, alpha);
  require_factor(*alphabet, 1, beta);
  RuleSystem sys;
  sys.alphabet = alphabet;
  add_op_rules(*alphabet, 0, alpha, sys.rules, nullptr);
  add_op_rules(*alphabet, 1, beta, sys.rules, nullptr);
  sys.provenance.kind = Provenance::Kind::binary_ops;
  sys.provenance.description
      = "binary ops α=" + alpha.name() + ", β=" + beta.name();
  return sys;
}

RuleSystem compile_from_op_sets(AlphabetPtr const& alphabet,
                                std::vector<CayleyOp> const& xs,
                                std::vector<CayleyOp> const& ys) {
  RuleSystem sys;
  sys.alphabet = alphabet;
  std::set<RuleOrigin> seen;
  std::string names_x;
  std::string names_y;
  for (auto const& op : xs) {
    require_factor(*alphabet, 0, op);
    add_op_rules(*alphabet, 0, op, sys.rules, &seen);
    names_x += (names_x.empty() ? "" : ", ") + op.name();
  }
  for (auto const& op : ys) {
    require_factor(*alphabet, 1, op);
    add_op_rules(*alphabet, 1, op, sys.rules, &seen);
    names_y += (names_y.empty() ? "" : ", ") + op.name();
  }
  sys.provenance.kind = Provenance::Kind::op_sets;
  sys.provenance.description
      = "op sets A={" + names_x + "}, B={" + names_y + "}";
  return sys;
}

RuleSystem compile_from_generators(AlphabetPtr const& alphabet,
                                   Generator const& psi, Generator const& phi,
                                   std::vector<CayleyOp> candidates_x,
                                   std::vector<CayleyOp> candidates_y) {
  if (alphabet->factor_count() != 2) {
    throw FactorMismatch("generator rules need a two-factor alphabet");
  }
  if (!same_carrier(alphabet->factor(0), psi.carrier())
      || !same_carrier(alphabet->factor(1), phi.carrier())) {
    throw FactorMismatch("generators do not live on the alphabet factors");
  }
  if (candidates_x.empty()) {
    candidates_x = enumerate_ops(alphabet->factor_ptr(0));
  }
  if (candidates_y.empty()) {
    candidates_y = enumerate_ops(alphabet->factor_ptr(1));
  }
  std::vector<CayleyOp> xs;
  std::vector<CayleyOp> ys;
  for (auto& op : candidates_x) {
    if (is_compatible(op, psi)) {
      xs.push_back(std::move(op));
    }
  }
  for (auto& op : candidates_y) {
    if (is_compatible(op, phi)) {
      ys.push_back(std::move(op));
    }
  }
  RuleSystem sys = compile_from_op_sets(alphabet, xs, ys);
  sys.provenance.kind = Provenance::Kind::generators;
  sys.provenance.description = "generators ψ=" + psi.name() + ", φ="
                               + phi.name() + " (" + std::to_string(xs.size())
                               + "+" + std::to_string(ys.size())
                               + " compatible operations)";
  for (auto const& op : xs) {
    sys.provenance.passed_x.push_back(op.name());
  }
  for (auto const& op : ys) {
    sys.provenance.passed_y.push_back(op.name());
  }
  return sys;
}

RuleSystem compile_explicit(AlphabetPtr const& alphabet,
                            std::vector<Relation> const& relations,
                            std::string description) {
  RuleSystem sys;
  sys.alphabet = alphabet;
  for (std::size_t i = 0; i < relations.size(); ++i) {
    auto const& rel = relations[i];
    if (rel.left.empty() && rel.right.empty()) {
      throw InvalidRule("relation " + std::to_string(i)
                        + " has both sides empty (n + m >= 1 is required)");
    }
    Rule rule;
    rule.left = rel.left;
    rule.right = rel.right;
    for (auto* side : {&rule.left, &rule.right}) {
      for (Letter l : *side) {
        if (l >= alphabet->size()) {
          throw InvalidRule("relation " + std::to_string(i)
                            + " uses a letter outside the alphabet");
        }
      }
      std::sort(side->begin(), side->end());
    }
    rule.label = "[" + format_letters(*alphabet, rule.left) + "] <-> ["
                 + format_letters(*alphabet, rule.right) + "]";
    rule.origin.kind = RuleOrigin::Kind::explicit_relation;
    rule.origin.relation = i;
    sys.rules.push_back(std::move(rule));
  }
  sys.provenance.kind = Provenance::Kind::explicit_relations;
  sys.provenance.description = std::move(description);
  return sys;
}

////////////////////////////////////////////////////////////////////////////
// Rewriting
////////////////////////////////////////////////////////////////////////////

bool contains_multiset(std::span<Letter const> haystack,
                       std::span<Letter const> needle) {
  return std::includes(haystack.begin(), haystack.end(), needle.begin(),
                       needle.end());
}

Letters replace_multiset(std::span<Letter const> w,
                         std::span<Letter const> remove,
                         std::span<Letter const> add) {
  Letters rest;
  rest.reserve(w.size());
  std::set_difference(w.begin(), w.end(), remove.begin(), remove.end(),
                      std::back_inserter(rest));
  Letters out;
  out.reserve(rest.size() + add.size());
  std::merge(rest.begin(), rest.end(), add.begin(), add.end(),
             std::back_inserter(out));
  return out;
}

void for_each_neighbor(std::span<Letter const> w, RuleSystem const& sys,
                       std::function<void(Letters const&)> const& emit) {
  for (auto const& rule : sys.rules) {
    for (int direction = 0; direction < 2; ++direction) {
      auto const& from = direction == 0 ? rule.left : rule.right;
      auto const& to = direction == 0 ? rule.right : rule.left;
      if (direction == 1 && rule.left == rule.right) {
        break;
      }
      if (!contains_multiset(w, from)) {
        continue;
      }
      if (w.size() == from.size() && to.empty()) {
        continue;
      }
      emit(replace_multiset(w, from, to));
    }
  }
}

std::vector<Word> one_step(Word const& w, RuleSystem const& sys) {
  if (!same_alphabet(w.alphabet(), *sys.alphabet)) {
    throw AlphabetMismatch("one_step: word and rule system alphabets differ");
  }
  Word const c = canonical(w);
  std::set<Letters> found;
  for_each_neighbor(c.letters(), sys,
                    [&](Letters const& next) { found.insert(next); });
  std::vector<Word> out;
  out.reserve(found.size());
  for (auto const& letters : found) {
    out.push_back(Word::raw(w.alphabet_ptr(), letters));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool validate_chain(std::vector<Word> const& chain, RuleSystem const& sys) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    auto next = one_step(chain[i], sys);
    auto target = canonical(chain[i + 1]);
    if (!std::binary_search(next.begin(), next.end(), target)) {
      return false;
    }
  }
  return true;
}

}  // namespace tensorlab
