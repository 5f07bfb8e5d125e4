#pragma once

// Finite carriers, explicit (possibly partial) binary operations, subsets,
// power-set generators and the compatibility relation between operations and
// generators.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tensorlab/error.hpp"

namespace tensorlab {

using Elem = std::uint32_t;

/// Table entry for an operation that is not defined on a pair.
inline constexpr Elem undefined = std::numeric_limits<Elem>::max();

/// A named finite set. Element order is fixed at construction and is the
/// order used for every lexicographic comparison downstream.
class Carrier {
 public:
  Carrier(std::string name, std::vector<std::string> elements);

  /// Carrier with elements "0", "1", ..., "n-1".
  static Carrier range(std::string name, std::size_t n);

  std::string const& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::string const& element(Elem i) const { return elements_.at(i); }
  std::vector<std::string> const& elements() const noexcept {
    return elements_;
  }
  std::optional<Elem> index_of(std::string_view symbol) const;

  bool operator==(Carrier const& other) const {
    return name_ == other.name_ && elements_ == other.elements_;
  }

 private:
  std::string name_;
  std::vector<std::string> elements_;
};

using CarrierPtr = std::shared_ptr<Carrier const>;

CarrierPtr make_carrier(std::string name, std::vector<std::string> elements);
CarrierPtr make_range_carrier(std::string name, std::size_t n);

bool same_carrier(Carrier const& a, Carrier const& b);

/// A binary operation given by its Cayley table, row-major: entry x*n+y is
/// op(x, y), or `undefined`.
class CayleyOp {
 public:
  CayleyOp(CarrierPtr carrier, std::vector<Elem> table, std::string name = {});

  /// Builds a table by evaluating `f` on every pair.
  static CayleyOp from_function(CarrierPtr carrier,
                                std::function<std::optional<Elem>(Elem, Elem)> f,
                                std::string name = {});

  CarrierPtr const& carrier_ptr() const noexcept { return carrier_; }
  Carrier const& carrier() const noexcept { return *carrier_; }
  std::size_t size() const noexcept { return carrier_->size(); }
  std::string const& name() const noexcept { return name_; }
  std::vector<Elem> const& table() const noexcept { return table_; }

  Elem operator()(Elem x, Elem y) const { return table_[x * size() + y]; }
  bool defined(Elem x, Elem y) const { return (*this)(x, y) != undefined; }
  bool total() const noexcept { return defined_count_ == table_.size(); }
  std::size_t defined_count() const noexcept { return defined_count_; }

  /// Same carrier and same table; names are ignored.
  bool same_table(CayleyOp const& other) const;

 private:
  CarrierPtr carrier_;
  std::vector<Elem> table_;
  std::string name_;
  std::size_t defined_count_ = 0;
};

namespace ops {
  /// Addition modulo n on {0..n-1}.
  CayleyOp mod_add(CarrierPtr carrier);
  CayleyOp mod_add(std::size_t n);
  /// x + y on {0..N}, undefined above N.
  CayleyOp capped_add(std::size_t N);
  /// a*x + b*y on {0..N}, undefined above N.
  CayleyOp affine(std::uint64_t a, std::uint64_t b, std::size_t N);
  CayleyOp left_projection(CarrierPtr carrier);
  CayleyOp right_projection(CarrierPtr carrier);
  CayleyOp max(CarrierPtr carrier);
  CayleyOp min(CarrierPtr carrier);
  /// Multiplication modulo n on {0..n-1}.
  CayleyOp mod_mul(CarrierPtr carrier);
}  // namespace ops

struct LawReport {
  bool associative = true;
  bool commutative = true;
  bool total = true;
  std::optional<std::array<Elem, 3>> associativity_witness;
  std::optional<std::pair<Elem, Elem>> commutativity_witness;
  std::optional<std::pair<Elem, Elem>> undefined_witness;
};

/// Associativity and commutativity are checked wherever both sides are
/// defined; undefined combinations hold vacuously and only clear `total`.
LawReport check_op_laws(CayleyOp const& op);

/// Subset of a carrier as a membership vector.
class Subset {
 public:
  explicit Subset(CarrierPtr carrier);
  Subset(CarrierPtr carrier, std::vector<bool> membership);
  static Subset full(CarrierPtr carrier);
  static Subset of(CarrierPtr carrier, std::vector<Elem> const& elements);
  /// Bit i of `mask` is element i. Carrier size must be at most 64.
  static Subset from_mask(CarrierPtr carrier, std::uint64_t mask);

  CarrierPtr const& carrier_ptr() const noexcept { return carrier_; }
  Carrier const& carrier() const noexcept { return *carrier_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool contains(Elem x) const { return bits_[x]; }
  void insert(Elem x) { bits_[x] = true; }
  std::size_t count() const;
  std::vector<Elem> elements() const;
  std::vector<bool> const& bits() const noexcept { return bits_; }
  std::uint64_t to_mask() const;

  bool subset_of(Subset const& other) const;
  bool operator==(Subset const& other) const { return bits_ == other.bits_; }

 private:
  CarrierPtr carrier_;
  std::vector<bool> bits_;
};

/// Least subset containing `a` that is closed under `op` (undefined entries
/// are skipped).
Subset stable_closure(CayleyOp const& op, Subset const& a);

/// A self-map of the power set of a carrier. Carriers of size at most
/// `Generator::table_limit` are tabulated over all 2^n subsets; larger
/// carriers keep a memoized callable.
class Generator {
 public:
  static constexpr std::size_t table_limit = 16;
  using Map = std::function<Subset(Subset const&)>;

  /// `table[mask]` is the image mask of subset `mask`.
  static Generator from_table(CarrierPtr carrier,
                              std::vector<std::uint32_t> table,
                              std::string name = {});
  static Generator from_function(CarrierPtr carrier, Map map,
                                 std::string name = {});

  CarrierPtr const& carrier_ptr() const noexcept { return carrier_; }
  Carrier const& carrier() const noexcept { return *carrier_; }
  std::string const& name() const noexcept { return name_; }
  bool table_backed() const noexcept { return !table_.empty(); }
  std::vector<std::uint32_t> const& table() const noexcept { return table_; }

  Subset operator()(Subset const& a) const;
  std::uint32_t image_mask(std::uint32_t mask) const { return table_[mask]; }

 private:
  struct Memo {
    std::mutex mutex;
    std::unordered_map<std::vector<bool>, Subset> cache;
  };

  Generator(CarrierPtr carrier, std::string name)
      : carrier_(std::move(carrier)), name_(std::move(name)) {}

  CarrierPtr carrier_;
  std::string name_;
  std::vector<std::uint32_t> table_;
  Map map_;
  std::shared_ptr<Memo> memo_;
};

/// A -> [A]_op.
Generator generator_from_op(CayleyOp const& op);
Generator identity_generator(CarrierPtr carrier);
/// A -> whole carrier.
Generator full_generator(CarrierPtr carrier);

struct ValidationReport {
  bool extensive = true;
  bool monotone = true;
  bool exhaustive = true;
  /// Number of subsets (or subset pairs) examined.
  std::size_t checked = 0;
  std::optional<Subset> extensivity_witness;
  std::optional<std::pair<Subset, Subset>> monotonicity_witness;

  bool passed() const noexcept { return extensive && monotone; }
};

/// Checks A ⊆ ψ(A) and A ⊆ A' ⟹ ψ(A) ⊆ ψ(A'). Exhaustive for table-backed
/// generators, otherwise `samples` random subsets from a fixed seed.
ValidationReport validate_generator(Generator const& psi,
                                    std::size_t samples = 4096);

/// True iff [A]_op ⊆ ψ(A) for every subset A (sampled above the table limit).
bool is_compatible(CayleyOp const& op, Generator const& psi,
                   std::size_t samples = 4096);

inline constexpr std::size_t enumerate_ops_limit = 3;

using OpFilter = std::function<bool(LawReport const&)>;

/// Calls `visit` on every total table over `carrier` that passes `filter`,
/// in lexicographic table order (entry (0,0) most significant). Throws
/// CarrierTooLarge for carriers of size >= 4.
void for_each_op(CarrierPtr const& carrier, OpFilter const& filter,
                 std::function<void(CayleyOp const&)> const& visit);

std::vector<CayleyOp> enumerate_ops(CarrierPtr const& carrier,
                                    OpFilter const& filter = {});

/// The index-th total table in lexicographic order.
CayleyOp op_from_index(CarrierPtr const& carrier, std::uint64_t index);

}  // namespace tensorlab
