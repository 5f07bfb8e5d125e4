#pragma once

// The free word semigroup over a product of carriers and the ground
// rewrite rules that generate the tensor-product congruences.
//
// A letter is one tuple of the product alphabet, encoded mixed-radix with
// factor 0 most significant, so numeric letter order is lexicographic tuple
// order. Canonical words are sorted letter sequences: the permutation rule
// is absorbed into the representation and never stored as a rule.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tensorlab/finite_algebra.hpp"

namespace tensorlab {

using Letter = std::uint32_t;
using Letters = std::vector<Letter>;

class TupleAlphabet {
 public:
  explicit TupleAlphabet(std::vector<CarrierPtr> factors);

  std::size_t factor_count() const noexcept { return factors_.size(); }
  std::size_t size() const noexcept { return size_; }
  Carrier const& factor(std::size_t i) const { return *factors_.at(i); }
  CarrierPtr const& factor_ptr(std::size_t i) const { return factors_.at(i); }

  Letter encode(std::span<Elem const> tuple) const;
  std::vector<Elem> decode(Letter letter) const;
  Elem component(Letter letter, std::size_t factor) const;
  /// Letter with component `factor` replaced by `value`.
  Letter with_component(Letter letter, std::size_t factor, Elem value) const;

  /// "(x,y)" for several factors, the bare element name for one factor.
  std::string format_letter(Letter letter) const;
  std::optional<Letter> parse_letter(std::string_view text) const;

  bool operator==(TupleAlphabet const& other) const;

 private:
  std::vector<CarrierPtr> factors_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

using AlphabetPtr = std::shared_ptr<TupleAlphabet const>;

AlphabetPtr make_alphabet(std::vector<CarrierPtr> factors);
bool same_alphabet(TupleAlphabet const& a, TupleAlphabet const& b);

/// A nonempty sequence of letters. Canonical words are sorted.
class Word {
 public:
  /// Sorts `letters`.
  static Word canonical(AlphabetPtr alphabet, Letters letters);
  /// Keeps the order of `letters`.
  static Word raw(AlphabetPtr alphabet, Letters letters);
  static Word single(AlphabetPtr alphabet, Letter letter);

  AlphabetPtr const& alphabet_ptr() const noexcept { return alphabet_; }
  TupleAlphabet const& alphabet() const noexcept { return *alphabet_; }
  std::size_t length() const noexcept { return letters_.size(); }
  Letters const& letters() const noexcept { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  bool is_canonical() const noexcept { return canonical_; }

  bool operator==(Word const& other) const {
    return letters_ == other.letters_ && canonical_ == other.canonical_;
  }
  bool operator<(Word const& other) const;

 private:
  Word(AlphabetPtr alphabet, Letters letters, bool canonical);

  AlphabetPtr alphabet_;
  Letters letters_;
  bool canonical_;
};

/// Canonical form of the juxtaposition u w.
Word concat(Word const& u, Word const& w);
/// Juxtaposition without canonicalizing.
Word juxtapose(Word const& u, Word const& w);
Word canonical(Word const& w);

/// Entries separated by " | ", e.g. "(0,1) | (1,0)" or "1 | 0".
std::string format_word(Word const& w);
std::string format_letters(TupleAlphabet const& alphabet,
                           std::span<Letter const> letters);
/// Accepts "|" or "γ" as separators; canonicalizes unless `keep_order`.
Word parse_word(AlphabetPtr const& alphabet, std::string_view text,
                bool keep_order = false);

/// Where a rule came from; `side` is 0 for rules from factor-0 operations.
struct RuleOrigin {
  enum class Kind { binary_op, explicit_relation };
  Kind kind = Kind::explicit_relation;
  std::size_t side = 0;
  Elem first = 0;
  Elem second = 0;
  Elem fixed = 0;
  std::size_t relation = 0;

  auto operator<=>(RuleOrigin const&) const = default;
};

/// A symmetric block replacement: `left` may be replaced by `right` anywhere
/// in a word and vice versa. Both sides are sorted multisets of letters.
struct Rule {
  Letters left;
  Letters right;
  std::string label;
  RuleOrigin origin;

  bool is_identity() const noexcept { return left == right; }
  /// One side empty: applying it may shrink or grow a word by a whole block.
  bool is_deletion() const noexcept { return left.empty() || right.empty(); }
  /// (min, max) of the two sides, the key under which symmetric rules agree.
  std::pair<Letters, Letters> normalized() const;
};

struct Provenance {
  enum class Kind { binary_ops, generators, op_sets, explicit_relations };
  Kind kind = Kind::explicit_relations;
  std::string description;
  /// Generator compilation: names of candidate operations that passed.
  std::vector<std::string> passed_x;
  std::vector<std::string> passed_y;
};

std::string to_string(Provenance::Kind kind);

struct RuleSystem {
  AlphabetPtr alphabet;
  std::vector<Rule> rules;
  Provenance provenance;

  bool has_deletion_rules() const;
  /// True iff every rule of this system is (up to symmetry) a rule of
  /// `other`.
  bool rules_subset_of(RuleSystem const& other) const;
};

using RuleSystemPtr = std::shared_ptr<RuleSystem const>;

RuleSystem empty_system(AlphabetPtr alphabet);

/// Rules {(x,y),(x',y)} <-> {(α(x,x'),y)} for each defined α-entry and each
/// y, and {(x,y),(x,y')} <-> {(x,β(y,y'))} for each defined β-entry and each
/// x. One rule per instantiation.
RuleSystem compile_from_binary_ops(AlphabetPtr const& alphabet,
                                   CayleyOp const& alpha, CayleyOp const& beta);

/// Union over all α ∈ xs, β ∈ ys of compile_from_binary_ops, with
/// instantiations that coincide across operations kept once.
RuleSystem compile_from_op_sets(AlphabetPtr const& alphabet,
                                std::vector<CayleyOp> const& xs,
                                std::vector<CayleyOp> const& ys);

/// Filters candidates by compatibility with ψ (resp. φ), then compiles as
/// op sets. An empty candidate list means every total operation on the
/// factor (carriers of size <= 3 only).
RuleSystem compile_from_generators(AlphabetPtr const& alphabet,
                                   Generator const& psi, Generator const& phi,
                                   std::vector<CayleyOp> candidates_x = {},
                                   std::vector<CayleyOp> candidates_y = {});

struct Relation {
  Letters left;
  Letters right;
};

/// One symmetric rule per relation; rejects relations with both sides empty.
RuleSystem compile_explicit(AlphabetPtr const& alphabet,
                            std::vector<Relation> const& relations,
                            std::string description = "explicit");

/// Calls `emit` with every sorted word reachable from the sorted word `w`
/// by one application of one rule in either direction. The empty word is
/// never emitted. Duplicates are possible.
void for_each_neighbor(std::span<Letter const> w, RuleSystem const& sys,
                       std::function<void(Letters const&)> const& emit);

/// Sorted, duplicate-free set of one-step rewrites of a canonical word.
std::vector<Word> one_step(Word const& w, RuleSystem const& sys);

/// Every link c_i -> c_{i+1} of `chain` is a one-step rewrite.
bool validate_chain(std::vector<Word> const& chain, RuleSystem const& sys);

/// Multiset helpers over sorted letter sequences.
bool contains_multiset(std::span<Letter const> haystack,
                       std::span<Letter const> needle);
Letters replace_multiset(std::span<Letter const> w,
                         std::span<Letter const> remove,
                         std::span<Letter const> add);

}  // namespace tensorlab
