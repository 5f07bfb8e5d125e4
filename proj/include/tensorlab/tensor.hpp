#pragma once

// The tensor product as the quotient of the bounded word semigroup by a
// saturated rule system: the embedding ι of tuples, the induced operation γ
// on classes, and the analyses built on them. All verdicts are within cap.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "tensorlab/closure.hpp"

namespace tensorlab {

struct TensorOptions {
  std::uint64_t universe_budget = default_universe_budget;
  /// Word pairs examined by the well-definedness check.
  std::uint64_t pair_budget = 2'000'000;
  /// Extra slack steps tried before a mismatch is settled by a lifted chain.
  std::size_t escalation = 2;
  std::size_t search_budget = default_search_budget;
};

/// A pair of words that the capped partition separates although they are
/// equivalent, together with how the equivalence was established.
struct CapArtifact {
  enum class Settled { within_cap, wider_slack, lifted_chain, search, unresolved };
  Word left;
  Word right;
  Settled how = Settled::unresolved;
  /// Slack at which the two words first share a class (wider_slack).
  std::size_t slack = 0;
  /// Validated chain left -> right (lifted_chain, search).
  std::vector<Word> chain;
};

char const* to_string(CapArtifact::Settled s);

/// Outcome of checking class(u w) = class(rep(u) w) over word pairs.
struct WellDefinedness {
  std::uint64_t pairs_checked = 0;
  bool exhaustive = true;
  std::uint64_t mismatches = 0;
  std::uint64_t settled_by_slack = 0;
  std::uint64_t settled_by_lifting = 0;
  std::uint64_t unresolved = 0;
  /// The first few mismatches, in enumeration order.
  std::vector<CapArtifact> examples;

  bool holds() const noexcept { return unresolved == 0; }
};

/// Proof attempt for the equivalence of two words.
struct Equality {
  bool proven = false;
  CapArtifact::Settled how = CapArtifact::Settled::unresolved;
  /// Slack of the first partition in which the words share a class.
  std::size_t slack = 0;
  /// One-step rewrites from the first word to the second.
  std::vector<Word> chain;
};

class TensorSpace {
 public:
  TensorSpace(ClassesPtr classes, TensorOptions options);

  EquivClasses const& classes() const noexcept { return *classes_; }
  ClassesPtr const& classes_ptr() const noexcept { return classes_; }
  WordUniverse const& universe() const noexcept { return classes_->universe(); }
  TupleAlphabet const& alphabet() const noexcept {
    return classes_->universe().alphabet();
  }
  AlphabetPtr const& alphabet_ptr() const noexcept {
    return classes_->universe().alphabet_ptr();
  }
  RuleSystem const& system() const noexcept { return classes_->system(); }
  RuleSystemPtr const& system_ptr() const noexcept {
    return classes_->system_ptr();
  }
  std::size_t cap() const noexcept { return universe().cap(); }
  std::size_t slack() const noexcept { return universe().slack(); }
  TensorOptions const& options() const noexcept { return options_; }

  /// Every class, bridge-only ones included.
  std::size_t class_count() const noexcept { return classes_->class_count(); }
  /// Classes whose representative has length <= L; their ids are 0..n-1.
  std::size_t stratum_class_count() const noexcept {
    return classes_->stratum_class_count();
  }

  std::size_t iota(Letter t) const { return iota_.at(t); }
  std::size_t iota(std::span<Elem const> tuple) const {
    return iota(alphabet().encode(tuple));
  }
  /// Class of rep(c) rep(d), or nullopt if that word exceeds L + k.
  std::optional<std::size_t> gamma(std::size_t c, std::size_t d) const;

  Word representative(std::size_t c) const;
  std::span<Letter const> representative_letters(std::size_t c) const {
    return universe().word(classes_->representative(c));
  }
  std::size_t representative_length(std::size_t c) const {
    return universe().length(classes_->representative(c));
  }
  /// Class of a word, or npos outside the universe.
  std::size_t class_of(Word const& w) const { return classes_->class_of_word(w); }

  WellDefinedness const& well_definedness() const noexcept { return wd_; }

  /// Tries, in order: the tensor's own partition, the same rules saturated
  /// with extra slack, and an uncapped search.
  Equality prove_equal(Word const& a, Word const& b) const;

  /// The same rule system saturated at slack k + extra, or null if that
  /// universe exceeds the budget.
  ClassesPtr wider(std::size_t extra) const;

  static constexpr std::size_t npos = EquivClasses::npos;

 private:
  friend std::shared_ptr<TensorSpace const> build_tensor(RuleSystemPtr,
                                                         std::size_t,
                                                         std::size_t,
                                                         TensorOptions);
  struct Cache {
    std::mutex mutex;
    std::vector<std::optional<ClassesPtr>> wider;
  };

  ClassesPtr classes_;
  TensorOptions options_;
  std::vector<std::size_t> iota_;
  WellDefinedness wd_;
  std::shared_ptr<Cache> cache_;
};

using TensorPtr = std::shared_ptr<TensorSpace const>;

/// Saturates, assembles ι and γ, and checks that γ does not depend on the
/// chosen class members. Throws WellDefinednessViolation for a mismatch that
/// no escalation stage settles.
TensorPtr build_tensor(RuleSystemPtr sys, std::size_t L, std::size_t k,
                       TensorOptions options = {});

/// The check used by build_tensor, exposed for reporting.
WellDefinedness check_well_definedness(TensorSpace const& t);

struct GammaLaws {
  std::uint64_t pairs_checked = 0;
  std::uint64_t triples_checked = 0;
  bool exhaustive = true;
  std::uint64_t commutativity_failures = 0;
  /// Triples whose groupings land in different capped classes.
  std::uint64_t associativity_mismatches = 0;
  std::uint64_t associativity_settled = 0;
  std::vector<CapArtifact> examples;

  bool holds() const noexcept {
    return commutativity_failures == 0
           && associativity_mismatches == associativity_settled;
  }
};

/// Commutativity and associativity of γ over stratum classes where the
/// groupings are defined.
GammaLaws check_gamma_laws(TensorSpace const& t,
                           std::uint64_t triple_budget = 2'000'000);

struct MergedPair {
  Letter first;
  Letter second;
  std::vector<Word> chain;
};

struct IotaReport {
  std::size_t cap = 0;
  std::size_t slack = 0;
  bool injective_within_cap = true;
  std::vector<MergedPair> merged;
  bool surjective_within_cap = true;
  std::vector<std::size_t> unreached;
  std::vector<Word> unreached_representatives;
};

IotaReport analyze_iota(TensorSpace const& t);

/// Stratum classes containing no length-1 word.
std::vector<std::size_t> entangled(TensorSpace const& t);

struct RefinementMap {
  TensorPtr source;
  TensorPtr target;
  std::vector<std::size_t> map;
  bool well_defined = true;
  bool surjective = true;
  bool homomorphism = true;
  std::uint64_t homomorphism_checks = 0;
  /// Homomorphism cells that needed more than the capped partition.
  std::uint64_t settled_beyond_cap = 0;

  bool holds() const noexcept {
    return well_defined && surjective && homomorphism;
  }
};

/// Source class -> target class of its representative. Requires the same
/// alphabet and caps and source rules contained in target rules.
RefinementMap refinement(TensorPtr source, TensorPtr target);

/// (|E|^+, concatenation) modulo permutation, lengths 1..L.
TensorPtr multiset_quotient(CarrierPtr E, std::size_t L);

}  // namespace tensorlab
