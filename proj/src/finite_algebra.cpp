#include "tensorlab/finite_algebra.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace tensorlab {

Carrier::Carrier(std::string name, std::vector<std::string> elements)
    : name_(std::move(name)), elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw Error("carrier '" + name_ + "' has no elements");
  }
  std::unordered_set<std::string> seen;
  for (auto const& e : elements_) {
    if (!seen.insert(e).second) {
      throw Error("carrier '" + name_ + "' repeats element '" + e + "'");
    }
  }
}

Carrier Carrier::range(std::string name, std::size_t n) {
  std::vector<std::string> elements;
  elements.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    elements.push_back(std::to_string(i));
  }
  return Carrier(std::move(name), std::move(elements));
}

std::optional<Elem> Carrier::index_of(std::string_view symbol) const {
  auto it = std::find(elements_.begin(), elements_.end(), symbol);
  if (it == elements_.end()) {
    return std::nullopt;
  }
  return static_cast<Elem>(it - elements_.begin());
}

CarrierPtr make_carrier(std::string name, std::vector<std::string> elements) {
  return std::make_shared<Carrier const>(std::move(name), std::move(elements));
}

CarrierPtr make_range_carrier(std::string name, std::size_t n) {
  return std::make_shared<Carrier const>(Carrier::range(std::move(name), n));
}

bool same_carrier(Carrier const& a, Carrier const& b) {
  return &a == &b || a == b;
}

////////////////////////////////////////////////////////////////////////////
// CayleyOp
////////////////////////////////////////////////////////////////////////////

CayleyOp::CayleyOp(CarrierPtr carrier, std::vector<Elem> table,
                   std::string name)
    : carrier_(std::move(carrier)),
      table_(std::move(table)),
      name_(std::move(name)) {
  std::size_t const n = carrier_->size();
  if (table_.size() != n * n) {
    throw ShapeMismatch("operation table has " + std::to_string(table_.size())
                        + " entries, expected " + std::to_string(n * n));
  }
  for (Elem e : table_) {
    if (e == undefined) {
      continue;
    }
    if (e >= n) {
      throw Error("operation table entry " + std::to_string(e)
                  + " is outside carrier '" + carrier_->name() + "'");
    }
    ++defined_count_;
  }
}

CayleyOp CayleyOp::from_function(
    CarrierPtr carrier, std::function<std::optional<Elem>(Elem, Elem)> f,
    std::string name) {
  std::size_t const n = carrier->size();
  std::vector<Elem> table(n * n, undefined);
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (auto v = f(x, y)) {
        table[x * n + y] = *v;
      }
    }
  }
  return CayleyOp(std::move(carrier), std::move(table), std::move(name));
}

bool CayleyOp::same_table(CayleyOp const& other) const {
  return same_carrier(*carrier_, *other.carrier_) && table_ == other.table_;
}

namespace ops {
  CayleyOp mod_add(CarrierPtr carrier) {
    auto const n = static_cast<Elem>(carrier->size());
    return CayleyOp::from_function(
        std::move(carrier),
        [n](Elem x, Elem y) -> std::optional<Elem> { return (x + y) % n; },
        "mod-add " + std::to_string(n));
  }

  CayleyOp mod_add(std::size_t n) {
    return mod_add(make_range_carrier("Z" + std::to_string(n), n));
  }

  CayleyOp mod_mul(CarrierPtr carrier) {
    auto const n = static_cast<Elem>(carrier->size());
    return CayleyOp::from_function(
        std::move(carrier),
        [n](Elem x, Elem y) -> std::optional<Elem> { return (x * y) % n; },
        "mod-mul " + std::to_string(n));
  }

  CayleyOp capped_add(std::size_t N) {
    auto carrier = make_range_carrier("N" + std::to_string(N), N + 1);
    return CayleyOp::from_function(
        std::move(carrier),
        [N](Elem x, Elem y) -> std::optional<Elem> {
          if (x + y > N) {
            return std::nullopt;
          }
          return x + y;
        },
        "capped-add " + std::to_string(N));
  }

  CayleyOp affine(std::uint64_t a, std::uint64_t b, std::size_t N) {
    auto carrier = make_range_carrier("N" + std::to_string(N), N + 1);
    return CayleyOp::from_function(
        std::move(carrier),
        [a, b, N](Elem x, Elem y) -> std::optional<Elem> {
          std::uint64_t v = a * x + b * y;
          if (v > N) {
            return std::nullopt;
          }
          return static_cast<Elem>(v);
        },
        "affine " + std::to_string(a) + " " + std::to_string(b) + " cap "
            + std::to_string(N));
  }

  CayleyOp left_projection(CarrierPtr carrier) {
    return CayleyOp::from_function(
        std::move(carrier),
        [](Elem x, Elem) -> std::optional<Elem> { return x; },
        "projection left");
  }

  CayleyOp right_projection(CarrierPtr carrier) {
    return CayleyOp::from_function(
        std::move(carrier),
        [](Elem, Elem y) -> std::optional<Elem> { return y; },
        "projection right");
  }

  CayleyOp max(CarrierPtr carrier) {
    return CayleyOp::from_function(
        std::move(carrier),
        [](Elem x, Elem y) -> std::optional<Elem> { return std::max(x, y); },
        "max");
  }

  CayleyOp min(CarrierPtr carrier) {
    return CayleyOp::from_function(
        std::move(carrier),
        [](Elem x, Elem y) -> std::optional<Elem> { return std::min(x, y); },
        "min");
  }
}  // namespace ops

LawReport check_op_laws(CayleyOp const& op) {
  LawReport report;
  auto const n = static_cast<Elem>(op.size());
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      Elem const xy = op(x, y);
      if (xy == undefined) {
        if (report.total) {
          report.total = false;
          report.undefined_witness = {x, y};
        }
        continue;
      }
      Elem const yx = op(y, x);
      if (report.commutative && yx != undefined && xy != yx) {
        report.commutative = false;
        report.commutativity_witness = {x, y};
      }
      if (!report.associative) {
        continue;
      }
      for (Elem z = 0; z < n; ++z) {
        Elem const yz = op(y, z);
        if (yz == undefined) {
          continue;
        }
        Elem const left = op(xy, z);
        Elem const right = op(x, yz);
        if (left != undefined && right != undefined && left != right) {
          report.associative = false;
          report.associativity_witness = std::array<Elem, 3>{x, y, z};
          break;
        }
      }
    }
  }
  return report;
}

////////////////////////////////////////////////////////////////////////////
// Subset
////////////////////////////////////////////////////////////////////////////

Subset::Subset(CarrierPtr carrier)
    : carrier_(std::move(carrier)), bits_(carrier_->size(), false) {}

Subset::Subset(CarrierPtr carrier, std::vector<bool> membership)
    : carrier_(std::move(carrier)), bits_(std::move(membership)) {
  if (bits_.size() != carrier_->size()) {
    throw ShapeMismatch("subset membership has length "
                        + std::to_string(bits_.size()) + ", carrier '"
                        + carrier_->name() + "' has "
                        + std::to_string(carrier_->size()) + " elements");
  }
}

Subset Subset::full(CarrierPtr carrier) {
  std::size_t const n = carrier->size();
  return Subset(std::move(carrier), std::vector<bool>(n, true));
}

Subset Subset::of(CarrierPtr carrier, std::vector<Elem> const& elements) {
  Subset s(std::move(carrier));
  for (Elem e : elements) {
    s.bits_.at(e) = true;
  }
  return s;
}

Subset Subset::from_mask(CarrierPtr carrier, std::uint64_t mask) {
  Subset s(std::move(carrier));
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.bits_[i] = (mask >> i) & 1U;
  }
  return s;
}

std::size_t Subset::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<Elem> Subset::elements() const {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) {
      out.push_back(static_cast<Elem>(i));
    }
  }
  return out;
}

std::uint64_t Subset::to_mask() const {
  if (bits_.size() > 64) {
    throw CarrierTooLarge("subset mask needs at most 64 elements");
  }
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) {
      mask |= std::uint64_t{1} << i;
    }
  }
  return mask;
}

bool Subset::subset_of(Subset const& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) {
      return false;
    }
  }
  return true;
}

Subset stable_closure(CayleyOp const& op, Subset const& a) {
  if (!same_carrier(op.carrier(), a.carrier())) {
    throw CarrierMismatch("stable_closure: operation on '" + op.carrier().name()
                          + "', subset of '" + a.carrier().name() + "'");
  }
  Subset result = a;
  std::vector<Elem> members = a.elements();
  // Each new element is combined with everything already present, in both
  // orders, exactly once.
  for (std::size_t i = 0; i < members.size(); ++i) {
    Elem const x = members[i];
    for (std::size_t j = 0; j <= i; ++j) {
      Elem const y = members[j];
      for (Elem v : {op(x, y), op(y, x)}) {
        if (v != undefined && !result.contains(v)) {
          result.insert(v);
          members.push_back(v);
        }
      }
    }
  }
  return result;
}

////////////////////////////////////////////////////////////////////////////
// Generator
////////////////////////////////////////////////////////////////////////////

Generator Generator::from_table(CarrierPtr carrier,
                                std::vector<std::uint32_t> table,
                                std::string name) {
  std::size_t const n = carrier->size();
  if (n > table_limit) {
    throw CarrierTooLarge("table-backed generators need at most "
                          + std::to_string(table_limit) + " elements");
  }
  if (table.size() != (std::size_t{1} << n)) {
    throw ShapeMismatch("generator table has " + std::to_string(table.size())
                        + " entries, expected 2^" + std::to_string(n));
  }
  std::uint32_t const all = (std::uint32_t{1} << n) - 1;
  for (auto m : table) {
    if ((m & ~all) != 0) {
      throw Error("generator table entry outside the carrier");
    }
  }
  Generator g(std::move(carrier), std::move(name));
  g.table_ = std::move(table);
  return g;
}

Generator Generator::from_function(CarrierPtr carrier, Map map,
                                   std::string name) {
  std::size_t const n = carrier->size();
  if (n <= table_limit) {
    std::vector<std::uint32_t> table(std::size_t{1} << n);
    for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
      table[mask] = static_cast<std::uint32_t>(
          map(Subset::from_mask(carrier, mask)).to_mask());
    }
    return from_table(std::move(carrier), std::move(table), std::move(name));
  }
  Generator g(std::move(carrier), std::move(name));
  g.map_ = std::move(map);
  g.memo_ = std::make_shared<Memo>();
  return g;
}

Subset Generator::operator()(Subset const& a) const {
  if (!same_carrier(*carrier_, a.carrier())) {
    throw CarrierMismatch("generator on '" + carrier_->name()
                          + "' applied to subset of '" + a.carrier().name()
                          + "'");
  }
  if (table_backed()) {
    return Subset::from_mask(carrier_, table_[a.to_mask()]);
  }
  {
    std::lock_guard lock(memo_->mutex);
    if (auto it = memo_->cache.find(a.bits()); it != memo_->cache.end()) {
      return it->second;
    }
  }
  Subset image = map_(a);
  std::lock_guard lock(memo_->mutex);
  memo_->cache.emplace(a.bits(), image);
  return image;
}

Generator generator_from_op(CayleyOp const& op) {
  CayleyOp copy = op;
  return Generator::from_function(
      op.carrier_ptr(),
      [copy](Subset const& a) { return stable_closure(copy, a); },
      "from-op " + op.name());
}

Generator identity_generator(CarrierPtr carrier) {
  return Generator::from_function(
      std::move(carrier), [](Subset const& a) { return a; }, "identity");
}

Generator full_generator(CarrierPtr carrier) {
  return Generator::from_function(
      std::move(carrier),
      [](Subset const& a) { return Subset::full(a.carrier_ptr()); }, "full");
}

namespace {
  Subset random_subset(CarrierPtr const& carrier, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    Subset s(carrier);
    for (Elem i = 0; i < carrier->size(); ++i) {
      if (coin(rng)) {
        s.insert(i);
      }
    }
    return s;
  }
}  // namespace

ValidationReport validate_generator(Generator const& psi, std::size_t samples) {
  ValidationReport report;
  auto const& carrier = psi.carrier_ptr();
  std::size_t const n = carrier->size();
  if (psi.table_backed()) {
    // Monotonicity over all pairs follows from monotonicity along single
    // insertions, since every A ⊆ A' is a chain of them.
    std::uint32_t const count = std::uint32_t{1} << n;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      std::uint32_t const image = psi.image_mask(mask);
      ++report.checked;
      if (report.extensive && (mask & ~image) != 0) {
        report.extensive = false;
        report.extensivity_witness = Subset::from_mask(carrier, mask);
      }
      if (!report.monotone) {
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t const bigger = mask | (std::uint32_t{1} << i);
        if (bigger == mask) {
          continue;
        }
        if ((image & ~psi.image_mask(bigger)) != 0) {
          report.monotone = false;
          report.monotonicity_witness
              = std::pair{Subset::from_mask(carrier, mask),
                          Subset::from_mask(carrier, bigger)};
          break;
        }
      }
    }
    return report;
  }
  report.exhaustive = false;
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Subset a = random_subset(carrier, rng);
    Subset image = psi(a);
    ++report.checked;
    if (report.extensive && !a.subset_of(image)) {
      report.extensive = false;
      report.extensivity_witness = a;
    }
    Subset bigger = a;
    bigger.insert(static_cast<Elem>(pick(rng)));
    if (report.monotone && !image.subset_of(psi(bigger))) {
      report.monotone = false;
      report.monotonicity_witness = std::pair{a, bigger};
    }
  }
  return report;
}

bool is_compatible(CayleyOp const& op, Generator const& psi,
                   std::size_t samples) {
  if (!same_carrier(op.carrier(), psi.carrier())) {
    throw CarrierMismatch("is_compatible: operation on '" + op.carrier().name()
                          + "', generator on '" + psi.carrier().name() + "'");
  }
  auto const& carrier = op.carrier_ptr();
  if (psi.table_backed()) {
    std::uint32_t const count = std::uint32_t{1} << carrier->size();
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      auto closure = static_cast<std::uint32_t>(
          stable_closure(op, Subset::from_mask(carrier, mask)).to_mask());
      if ((closure & ~psi.image_mask(mask)) != 0) {
        return false;
      }
    }
    return true;
  }
  std::mt19937_64 rng(0xc0ffee);
  for (std::size_t s = 0; s < samples; ++s) {
    Subset a = random_subset(carrier, rng);
    if (!stable_closure(op, a).subset_of(psi(a))) {
      return false;
    }
  }
  return true;
}

////////////////////////////////////////////////////////////////////////////
// Enumeration
////////////////////////////////////////////////////////////////////////////

namespace {
  void check_enumerable(Carrier const& carrier) {
    if (carrier.size() > enumerate_ops_limit) {
      throw CarrierTooLarge("operation enumeration is limited to carriers of "
                            "size <= "
                            + std::to_string(enumerate_ops_limit) + ", '"
                            + carrier.name() + "' has "
                            + std::to_string(carrier.size()));
    }
  }
}  // namespace

CayleyOp op_from_index(CarrierPtr const& carrier, std::uint64_t index) {
  check_enumerable(*carrier);
  std::size_t const n = carrier->size();
  std::size_t const cells = n * n;
  std::vector<Elem> table(cells);
  std::uint64_t rest = index;
  for (std::size_t c = cells; c-- > 0;) {
    table[c] = static_cast<Elem>(rest % n);
    rest /= n;
  }
  return CayleyOp(carrier, std::move(table), "table#" + std::to_string(index));
}

void for_each_op(CarrierPtr const& carrier, OpFilter const& filter,
                 std::function<void(CayleyOp const&)> const& visit) {
  check_enumerable(*carrier);
  std::size_t const n = carrier->size();
  std::size_t const cells = n * n;
  std::vector<Elem> table(cells, 0);
  std::uint64_t index = 0;
  while (true) {
    CayleyOp op(carrier, table, "table#" + std::to_string(index));
    if (!filter || filter(check_op_laws(op))) {
      visit(op);
    }
    // Odometer increment, last cell fastest.
    std::size_t c = cells;
    while (c > 0) {
      --c;
      if (++table[c] < n) {
        break;
      }
      table[c] = 0;
      if (c == 0) {
        return;
      }
    }
    ++index;
  }
}

std::vector<CayleyOp> enumerate_ops(CarrierPtr const& carrier,
                                    OpFilter const& filter) {
  std::vector<CayleyOp> out;
  for_each_op(carrier, filter, [&](CayleyOp const& op) { out.push_back(op); });
  return out;
}

}  // namespace tensorlab
