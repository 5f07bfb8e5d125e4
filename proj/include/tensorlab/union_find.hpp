#pragma once

#include <cassert>
#include <cstddef>
#include <numeric>
#include <vector>

namespace tensorlab {

/// Disjoint sets over 0..n-1 with path compression and union by rank.
class UnionFind {
 public:
  UnionFind() = default;

  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t size() const noexcept { return parent_.size(); }

  std::size_t find(std::size_t x) {
    assert(x < parent_.size());
    std::size_t root = x;
    while (parent_[root] != root) {
      root = parent_[root];
    }
    while (parent_[x] != root) {
      std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  /// Returns true if x and y were in different sets.
  bool unite(std::size_t x, std::size_t y) {
    std::size_t rx = find(x);
    std::size_t ry = find(y);
    if (rx == ry) {
      return false;
    }
    if (rank_[rx] < rank_[ry]) {
      std::swap(rx, ry);
    }
    parent_[ry] = rx;
    if (rank_[rx] == rank_[ry]) {
      ++rank_[rx];
    }
    return true;
  }

  bool same(std::size_t x, std::size_t y) { return find(x) == find(y); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

}  // namespace tensorlab
