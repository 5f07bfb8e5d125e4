#pragma once

// Homomorphism checks, factorization of commuting bihomomorphisms through
// the tensor quotient, and the free-semigroup, kernel, Cayley and pairing
// constructions. Every verification is exhaustive on the finite data given.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tensorlab/finite_algebra.hpp"
#include "tensorlab/tensor.hpp"

namespace tensorlab {

/// A total map {0..domain_size-1} -> {0..codomain_size-1}.
struct FiniteMap {
  std::size_t domain_size = 0;
  std::size_t codomain_size = 0;
  std::vector<Elem> table;
  std::string name;

  FiniteMap() = default;
  FiniteMap(std::size_t codomain_size, std::vector<Elem> table,
            std::string name = {});

  Elem operator()(std::size_t i) const { return table.at(i); }
  bool operator==(FiniteMap const& other) const {
    return codomain_size == other.codomain_size && table == other.table;
  }

  static FiniteMap identity(std::size_t n);
  static FiniteMap constant(std::size_t domain, std::size_t codomain, Elem value);
};

/// A total map g : X x Y -> U, row-major in x.
class BiMap {
 public:
  BiMap(CarrierPtr X, CarrierPtr Y, CarrierPtr U, std::vector<Elem> table,
        std::string name = {});
  static BiMap from_function(CarrierPtr X, CarrierPtr Y, CarrierPtr U,
                             std::function<Elem(Elem, Elem)> const& f,
                             std::string name = {});

  CarrierPtr const& X() const noexcept { return x_; }
  CarrierPtr const& Y() const noexcept { return y_; }
  CarrierPtr const& U() const noexcept { return u_; }
  Elem operator()(Elem x, Elem y) const { return table_[x * y_->size() + y]; }
  std::vector<Elem> const& table() const noexcept { return table_; }
  std::string const& name() const noexcept { return name_; }

 private:
  CarrierPtr x_;
  CarrierPtr y_;
  CarrierPtr u_;
  std::vector<Elem> table_;
  std::string name_;
};

/// Calls `fn` for every total map X x Y -> U in odometer order.
void for_each_bimap(CarrierPtr const& X, CarrierPtr const& Y,
                    CarrierPtr const& U,
                    std::function<void(BiMap const&)> const& fn);

struct HomomorphismReport {
  bool holds = true;
  std::uint64_t checked = 0;
  std::optional<std::pair<Elem, Elem>> witness;
};

/// f(x ⋆ y) = f(x) ⋄ f(y) wherever x ⋆ y is defined.
HomomorphismReport is_homomorphism(FiniteMap const& f, CayleyOp const& opS,
                                   CayleyOp const& opT);

struct BihomReport {
  bool left_distributive = true;   // g(α(x,x'),y) = δ(g(x,y), g(x',y))
  bool right_distributive = true;  // g(x,β(y,y')) = δ(g(x,y), g(x,y'))
  bool image_commutative = true;
  /// δ is associative on the δ-closure of g(X x Y).
  bool image_associative = true;
  /// δ is defined on every pair of the δ-closure of g(X x Y).
  bool closure_total = true;
  std::optional<std::array<Elem, 3>> left_witness;
  std::optional<std::array<Elem, 3>> right_witness;
  std::optional<std::pair<Elem, Elem>> commutativity_witness;
  std::optional<std::array<Elem, 3>> associativity_witness;
  std::vector<Elem> image;
  std::vector<Elem> image_closure;

  /// The distribution laws and commutativity on the image.
  bool passed() const noexcept {
    return left_distributive && right_distributive && image_commutative;
  }
  /// passed() plus what folding over a class needs.
  bool fold_ready() const noexcept {
    return passed() && image_associative && closure_total;
  }
};

BihomReport is_commuting_bihomomorphism(BiMap const& g, CayleyOp const& alpha,
                                        CayleyOp const& beta,
                                        CayleyOp const& delta);

/// Image laws only: commutativity on g(X x Y), associativity and totality
/// of δ on its closure. The distribution fields stay true.
BihomReport image_laws(BiMap const& g, CayleyOp const& delta);

/// Left fold under δ of g over the entries of a sorted word of a
/// two-factor alphabet. undefined if a step is undefined.
Elem fold_word(BiMap const& g, CayleyOp const& delta,
               TupleAlphabet const& alphabet, std::span<Letter const> word);

/// Every rule's two sides fold to the same value: the rule-level form of
/// the distribution laws, valid for any provenance.
bool respects_rules(BiMap const& g, CayleyOp const& delta,
                    RuleSystem const& sys);

struct Factorization {
  /// h : tensor classes -> U.
  FiniteMap h;
  bool well_defined = true;
  bool triangle = true;
  bool homomorphism = true;
  bool unique = true;
  std::uint64_t members_checked = 0;
  std::uint64_t homomorphism_checks = 0;
  /// Classes determined by h ∘ ι = g and γ-compatibility.
  std::size_t reachable = 0;

  bool holds() const noexcept {
    return well_defined && triangle && homomorphism && unique;
  }
};

/// The map h with h ∘ ι = g. Throws PreconditionFailed when g does not
/// respect the rules, is not commutative on its image, or δ is partial on
/// the image closure. When only associativity on the image fails, throws
/// WellDefinednessViolation for a class whose members fold differently, if
/// the cap exposes one.
Factorization factor_through_tensor(BiMap const& g, TensorSpace const& t,
                                    CayleyOp const& delta);

struct RefinedFactorization {
  Factorization fine;
  Factorization coarse;
  /// h_fine = h_coarse ∘ refinement on every source class.
  bool consistent = true;

  bool holds() const noexcept {
    return fine.holds() && coarse.holds() && consistent;
  }
};

/// Factorization through the coarser tensor of a refinement, checked
/// against the factorization through the finer one.
RefinedFactorization factor_through_refinement(BiMap const& g,
                                               RefinementMap const& r,
                                               CayleyOp const& delta);

/// A map from the bounded free semigroup E^+ (sequences, order kept).
struct FreeFold {
  std::size_t letters = 0;
  std::size_t max_length = 0;
  /// All sequences of length 1..max_length in (length, lexicographic) order.
  std::vector<Letters> words;
  std::vector<Elem> values;
  bool homomorphism = true;
  bool triangle = true;
  bool unique = true;
  bool surjective = true;
  std::uint64_t homomorphism_checks = 0;

  std::size_t index_of(std::span<Letter const> w) const;
  bool holds() const noexcept { return homomorphism && triangle && unique; }
};

/// f(a_1 ... a_n) = j(a_1) ⋆ ... ⋆ j(a_n). Throws NotAssociative for a
/// non-associative opS and PreconditionFailed for a partial one.
FreeFold free_fold(FiniteMap const& j, CayleyOp const& opS,
                   std::size_t max_length = 4);

/// Whether `values` (indexed like ff.words) satisfies
/// values(u v) = values(u) ⋆ values(v) for every split.
bool respects_concatenation(FreeFold const& ff, std::vector<Elem> const& values,
                            CayleyOp const& opS);

struct CongruenceWitness {
  CayleyOp op;
  /// Class of each element; classes numbered by least member.
  std::vector<std::size_t> class_of;
  std::size_t class_count = 0;
  bool is_congruence = true;
  /// (u, v, w) with u ≈ v but u⋆w or w⋆u separated.
  std::optional<std::array<Elem, 3>> witness;
};

/// Checks u ≈ v ⟹ u⋆w ≈ v⋆w and w⋆u ≈ w⋆v for all elements.
CongruenceWitness check_congruence(CayleyOp const& op,
                                   std::vector<std::size_t> class_of);

struct KerFactorization {
  CongruenceWitness kernel;
  CayleyOp quotient;
  /// S -> S / ker f.
  FiniteMap projection;
  /// S / ker f -> T.
  FiniteMap mono;
  bool quotient_well_defined = true;
  bool mono_injective = true;
  bool mono_homomorphism = true;
  bool diagram_commutes = true;

  bool holds() const noexcept {
    return kernel.is_congruence && quotient_well_defined && mono_injective
           && mono_homomorphism && diagram_commutes;
  }
};

/// f = mono ∘ projection with ker f as the congruence. Throws
/// NotAHomomorphism unless f is a homomorphism of total operations.
KerFactorization ker_factorization(FiniteMap const& f, CayleyOp const& opS,
                                   CayleyOp const& opT);

struct CayleyEmbedding {
  bool adjoined_identity = false;
  std::optional<Elem> neutral;
  std::size_t monoid_size = 0;
  /// translations[u][x] = u ⋆ x on S¹.
  std::vector<std::vector<Elem>> translations;
  bool homomorphism = true;
  bool injective = true;

  bool holds() const noexcept { return homomorphism && injective; }
};

/// u -> left translation by u on S¹, with S¹ = S when S has a neutral
/// element. Throws NotAssociative or PreconditionFailed (partial op).
CayleyEmbedding cayley_embed(CayleyOp const& opS);

struct Pairing {
  /// Z -> X x Y, pair (x, y) encoded x * |Y| + y.
  FiniteMap h;
  bool projections_hold = true;
  bool unique = true;
  /// Whether uniqueness was decided by enumerating every candidate.
  bool exhaustive = true;
  std::uint64_t candidates_checked = 0;
};

Pairing cartesian_pairing(FiniteMap const& f, FiniteMap const& g,
                          std::uint64_t exhaustive_limit = 1'000'000);

}  // namespace tensorlab
