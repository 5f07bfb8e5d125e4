#pragma once

// Reference computations used only by tests. They deliberately avoid the
// library's rewriting and closure code paths.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "tensorlab/closure.hpp"
#include "tensorlab/finite_algebra.hpp"
#include "tensorlab/words.hpp"

namespace tensorlab::oracle {

/// Words as letter-count vectors, edges by count arithmetic, equivalence by
/// Warshall's transitive closure on a bit matrix.
class NaiveClosure {
 public:
  NaiveClosure(RuleSystem const& sys, std::size_t max_length)
      : s_(sys.alphabet->size()) {
    std::vector<unsigned> counts(s_, 0);
    enumerate(counts, 0, 0, max_length);
    n_ = words_.size();
    words_per_block_ = (n_ + 63) / 64;
    reach_.assign(n_ * words_per_block_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      set(i, i);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (auto const& rule : sys.rules) {
        for (int dir = 0; dir < 2; ++dir) {
          auto const& from = dir == 0 ? rule.left : rule.right;
          auto const& to = dir == 0 ? rule.right : rule.left;
          std::vector<int> next(words_[i].begin(), words_[i].end());
          bool ok = true;
          for (Letter l : from) {
            if (--next[l] < 0) {
              ok = false;
            }
          }
          if (!ok) {
            continue;
          }
          for (Letter l : to) {
            ++next[l];
          }
          std::size_t total = 0;
          for (int c : next) {
            total += static_cast<std::size_t>(c);
          }
          if (total == 0 || total > max_length) {
            continue;
          }
          std::vector<unsigned> key(next.begin(), next.end());
          std::size_t j = index_.at(key);
          set(i, j);
          set(j, i);
        }
      }
    }
    for (std::size_t k = 0; k < n_; ++k) {
      std::uint64_t const* rk = row(k);
      for (std::size_t i = 0; i < n_; ++i) {
        if (test(i, k)) {
          std::uint64_t* ri = &reach_[i * words_per_block_];
          for (std::size_t b = 0; b < words_per_block_; ++b) {
            ri[b] |= rk[b];
          }
        }
      }
    }
  }

  std::size_t size() const { return n_; }

  /// Sorted letter form of oracle word i.
  Letters letters(std::size_t i) const {
    Letters out;
    for (std::size_t l = 0; l < s_; ++l) {
      out.insert(out.end(), words_[i][l], static_cast<Letter>(l));
    }
    return out;
  }

  bool related(std::size_t i, std::size_t j) const { return test(i, j); }

  std::size_t index_of(Letters const& w) const {
    std::vector<unsigned> counts(s_, 0);
    for (Letter l : w) {
      ++counts[l];
    }
    return index_.at(counts);
  }

 private:
  void enumerate(std::vector<unsigned>& counts, std::size_t letter,
                 std::size_t used, std::size_t max_length) {
    if (letter == s_) {
      if (used > 0) {
        index_.emplace(counts, words_.size());
        words_.push_back(counts);
      }
      return;
    }
    for (unsigned c = 0; used + c <= max_length; ++c) {
      counts[letter] = c;
      enumerate(counts, letter + 1, used + c, max_length);
    }
    counts[letter] = 0;
  }

  bool test(std::size_t i, std::size_t j) const {
    return (reach_[i * words_per_block_ + j / 64] >> (j % 64)) & 1U;
  }
  void set(std::size_t i, std::size_t j) {
    reach_[i * words_per_block_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }
  std::uint64_t const* row(std::size_t i) const {
    return &reach_[i * words_per_block_];
  }

  std::size_t s_;
  std::size_t n_ = 0;
  std::size_t words_per_block_ = 0;
  std::vector<std::vector<unsigned>> words_;
  std::map<std::vector<unsigned>, std::size_t> index_;
  std::vector<std::uint64_t> reach_;
};

/// True iff `classes` induces exactly the oracle's relation.
inline bool partition_matches(EquivClasses const& classes,
                              NaiveClosure const& oracle) {
  auto const& u = classes.universe();
  if (u.size() != oracle.size()) {
    return false;
  }
  std::vector<std::size_t> to_universe(oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    auto w = oracle.letters(i);
    to_universe[i] = u.ordinal(w);
    if (to_universe[i] == WordUniverse::npos) {
      return false;
    }
  }
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    for (std::size_t j = 0; j < oracle.size(); ++j) {
      if (oracle.related(i, j)
          != classes.same(to_universe[i], to_universe[j])) {
        return false;
      }
    }
  }
  return true;
}

/// Value fold of a word under an associative and commutative operation.
inline Elem fold(CayleyOp const& op, Letters const& w) {
  Elem acc = w[0];
  for (std::size_t i = 1; i < w.size(); ++i) {
    acc = op(acc, w[i]);
  }
  return acc;
}

inline CayleyOp random_op(std::mt19937_64& rng, CarrierPtr const& c,
                          double undefined_rate = 0.0) {
  std::size_t n = c->size();
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
  std::bernoulli_distribution hole(undefined_rate);
  std::vector<Elem> t(n * n);
  for (auto& e : t) {
    e = hole(rng) ? undefined : pick(rng);
  }
  return CayleyOp(c, t, "random");
}

}  // namespace tensorlab::oracle
