#pragma once

// The one-factor specialization of the tensor quotient: superposition spaces
// over a single carrier, the injectivity truth table over all operations of
// a small carrier, the semigroup isomorphism check, the capped affine
// example and the (2+1)-relation template over a product carrier.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tensorlab/tensor.hpp"

namespace tensorlab {

/// A tensor space whose alphabet has exactly one factor; letters are the
/// carrier's elements.
class SuperpositionSpace {
 public:
  explicit SuperpositionSpace(TensorPtr tensor);

  TensorPtr const& tensor_ptr() const noexcept { return tensor_; }
  TensorSpace const& tensor() const noexcept { return *tensor_; }
  Carrier const& carrier() const { return tensor_->alphabet().factor(0); }
  CarrierPtr const& carrier_ptr() const {
    return tensor_->alphabet().factor_ptr(0);
  }

  std::size_t iota(Elem x) const { return tensor_->iota(static_cast<Letter>(x)); }
  Word word(std::vector<Elem> const& entries) const;

 private:
  TensorPtr tensor_;
};

/// {x, y} <-> {α(x, y)} for every defined entry.
std::vector<Relation> relations_from_op(CayleyOp const& op);

/// {y1, y2} <-> {y3} for every triple (y1, y2, y3).
std::vector<Relation> relations_from_triples(
    std::vector<std::array<Elem, 3>> const& triples);

/// K x X as one carrier: element c * |X| + x is named "(c,x)".
CarrierPtr product_carrier(Carrier const& K, Carrier const& X);

SuperpositionSpace build_superposition(CarrierPtr X,
                                       std::vector<Relation> const& relations,
                                       std::size_t L, std::size_t k,
                                       TensorOptions options = {});

struct Theorem21Options {
  std::size_t L = 4;
  std::size_t k = 2;
  /// 0 picks the hardware concurrency.
  std::size_t threads = 0;
  /// Extra slack tried when no merge is found but the fold oracle expects one.
  std::size_t escalation = 2;
};

struct Theorem21Row {
  std::uint64_t index = 0;
  std::vector<Elem> table;
  bool associative = false;
  bool commutative = false;
  bool surjective = false;
  bool injective = false;
  /// associative and commutative.
  bool oracle_injective = false;
  /// The criterion as printed: associative.
  bool stated_injective = false;
  /// Slack at which the injectivity verdict was reached.
  std::size_t slack = 0;
  /// A merge of two distinct singletons, when not injective.
  std::optional<MergedPair> merge;
  /// A stratum class with no length-1 member, when not surjective.
  std::optional<Word> unreached;

  bool matches_oracle() const noexcept { return injective == oracle_injective; }
  bool matches_statement() const noexcept { return injective == stated_injective; }
};

struct TruthTable {
  std::size_t size = 0;
  std::size_t L = 0;
  std::size_t k = 0;
  std::vector<Theorem21Row> rows;
  /// counts[associative][commutative][injective].
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> counts{};
  std::uint64_t surjective = 0;
  std::uint64_t associative = 0;
  /// Row indices whose injectivity differs from the oracle.
  std::vector<std::uint64_t> oracle_mismatches;
  /// Row indices whose injectivity differs from the printed criterion.
  std::vector<std::uint64_t> statement_mismatches;
};

/// Every total operation on {0..size-1}, size 2 or 3. Rows are in table
/// index order regardless of the thread count.
TruthTable theorem21_experiment(std::size_t size, Theorem21Options options = {});

/// One row of the truth table for a single total operation.
Theorem21Row theorem21_row(CayleyOp const& op, std::size_t L, std::size_t k,
                           std::size_t escalation = 2);

struct IsoReport {
  bool commutative = true;
  bool injective = true;
  bool surjective = true;
  /// ι(α(x, y)) = γ(ι(x), ι(y)) for all pairs.
  bool homomorphism = true;
  std::uint64_t homomorphism_checks = 0;
  std::optional<std::pair<Elem, Elem>> homomorphism_witness;
  /// Folding is constant on every stratum class and class -> fold is a
  /// bijection onto the carrier.
  bool fold_bijective = true;
  std::optional<MergedPair> merge;

  bool isomorphism() const noexcept {
    return injective && surjective && homomorphism;
  }
};

/// Throws NotAssociative or PreconditionFailed (partial op).
IsoReport semigroup_iso_check(CayleyOp const& op, std::size_t L = 4,
                              std::size_t k = 1);

struct AffineConfig {
  std::uint64_t a = 2;
  std::uint64_t b = 2;
  std::size_t N = 16;
  std::size_t L = 3;
  std::size_t k = 2;
};

/// Throws InvalidCap unless a, b >= 1, a + b >= 3, N >= 1, L >= 1.
void validate(AffineConfig const& cfg);

/// x_1 ... x_h ≈ value, established by the grouping chain itself.
struct FoldProof {
  Elem value = 0;
  /// x_1 ... x_h, then one merged block per step, ending at the singleton.
  std::vector<Word> chain;
  bool chain_valid = false;
  /// The word and the singleton share a class in the capped partition.
  bool same_class = false;

  bool proven() const noexcept { return chain_valid && same_class; }
};

struct FoldIdentity {
  /// x_1 ... x_h in entry order.
  std::vector<Elem> entries;
  /// Grouping from the left, resp. the right; empty if a step leaves 0..N.
  std::optional<FoldProof> left;
  std::optional<FoldProof> right;
};

struct CoefficientCheck {
  std::size_t length = 0;
  /// Coefficients of x_1..x_h in the left-grouped fold.
  std::vector<std::uint64_t> left;
  /// Coefficients of x_1..x_h in the right-grouped fold.
  std::vector<std::uint64_t> right;
  /// a, a^2, ..., a^h: the pattern claimed for a = b.
  std::vector<std::uint64_t> claimed;
  /// The claimed multiset equals neither fold's multiset.
  bool mismatch = false;
};

struct AffineReport {
  AffineConfig config;
  std::vector<FoldIdentity> identities;
  std::size_t left_proven = 0;
  std::size_t left_attempted = 0;
  std::size_t right_proven = 0;
  std::size_t right_attempted = 0;
  /// Classes of 0..a-1 pairwise distinct in the partition.
  bool small_distinct = true;
  /// Merges x ≈ y of singletons, x < y, each with a validated chain.
  std::vector<MergedPair> merges;
  bool chains_valid = true;
  std::vector<CoefficientCheck> coefficients;

  bool merge_above(Elem bound) const;
};

AffineReport affine_experiment(AffineConfig const& cfg);

/// Coefficients of the left- and right-grouped folds of length h.
std::vector<std::uint64_t> left_coefficients(std::uint64_t a, std::uint64_t b,
                                             std::size_t h);
std::vector<std::uint64_t> right_coefficients(std::uint64_t a, std::uint64_t b,
                                              std::size_t h);

}  // namespace tensorlab
