#pragma once

// Bounded word universes and the transitive closure of a rule system over
// them. Everything here is a within-cap computation: equivalences found are
// real, but chains through words longer than L + k are invisible.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tensorlab/words.hpp"

namespace tensorlab {

inline constexpr std::uint64_t default_universe_budget = 5'000'000;

/// Number of sorted words of length 1..max_length over `letters` letters,
/// saturating at UINT64_MAX.
std::uint64_t universe_word_count(std::size_t letters, std::size_t max_length);

/// All canonical words of length 1..L+k in (length, lexicographic) order.
class WordUniverse {
 public:
  static WordUniverse enumerate(AlphabetPtr alphabet, std::size_t L,
                                std::size_t k,
                                std::uint64_t budget = default_universe_budget);

  AlphabetPtr const& alphabet_ptr() const noexcept { return alphabet_; }
  TupleAlphabet const& alphabet() const noexcept { return *alphabet_; }
  std::size_t cap() const noexcept { return cap_; }
  std::size_t slack() const noexcept { return slack_; }
  std::size_t max_length() const noexcept { return cap_ + slack_; }

  std::size_t size() const noexcept { return start_.size() - 1; }
  std::span<Letter const> word(std::size_t ordinal) const {
    return {data_.data() + start_[ordinal],
            data_.data() + start_[ordinal + 1]};
  }
  std::size_t length(std::size_t ordinal) const {
    return start_[ordinal + 1] - start_[ordinal];
  }
  Word word_value(std::size_t ordinal) const;

  /// Ordinal of a sorted word, or npos if it is longer than L + k.
  std::size_t ordinal(std::span<Letter const> sorted) const;
  std::size_t ordinal(Word const& w) const;

  /// Number of words of length <= h.
  std::size_t count_up_to(std::size_t h) const;
  /// Number of words of length <= L: ordinals below this are the reported
  /// stratum, the rest are bridges.
  std::size_t stratum_size() const { return count_up_to(cap_); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  WordUniverse() = default;

  AlphabetPtr alphabet_;
  std::size_t cap_ = 0;
  std::size_t slack_ = 0;
  std::vector<Letter> data_;
  std::vector<std::size_t> start_;
  // length_offset_[h] = ordinal of the first word of length h.
  std::vector<std::size_t> length_offset_;
  // multisets_[r][v] = number of sorted words of length r over letters v..s-1.
  std::vector<std::vector<std::uint64_t>> multisets_;
};

using UniversePtr = std::shared_ptr<WordUniverse const>;

/// The partition of a universe generated by a rule system. Class ids are
/// ordered by their least member, which is also the class representative.
class EquivClasses {
 public:
  EquivClasses(UniversePtr universe, RuleSystemPtr system,
               std::vector<std::size_t> class_of);

  WordUniverse const& universe() const noexcept { return *universe_; }
  UniversePtr const& universe_ptr() const noexcept { return universe_; }
  RuleSystem const& system() const noexcept { return *system_; }
  RuleSystemPtr const& system_ptr() const noexcept { return system_; }

  std::size_t class_count() const noexcept { return rep_.size(); }
  std::size_t class_of(std::size_t ordinal) const { return class_of_[ordinal]; }
  std::size_t representative(std::size_t cls) const { return rep_[cls]; }
  std::span<std::size_t const> members(std::size_t cls) const {
    return {members_.data() + member_start_[cls],
            members_.data() + member_start_[cls + 1]};
  }
  bool same(std::size_t a, std::size_t b) const {
    return class_of_[a] == class_of_[b];
  }
  /// Class of a word, or npos if the word lies outside the universe.
  std::size_t class_of_word(Word const& w) const;

  /// Class ids whose representative has length <= L.
  std::size_t stratum_class_count() const noexcept {
    return stratum_classes_;
  }
  bool in_stratum(std::size_t cls) const { return cls < stratum_classes_; }

  std::vector<std::size_t> const& class_of_table() const noexcept {
    return class_of_;
  }

  /// Shortest chain between two words of the same class using only words of
  /// the universe. Empty if they are in different classes.
  std::vector<Word> chain_within(std::size_t from, std::size_t to) const;

  static constexpr std::size_t npos = WordUniverse::npos;

 private:
  UniversePtr universe_;
  RuleSystemPtr system_;
  std::vector<std::size_t> class_of_;
  std::vector<std::size_t> rep_;
  std::vector<std::size_t> member_start_;
  std::vector<std::size_t> members_;
  std::size_t stratum_classes_ = 0;
};

using ClassesPtr = std::shared_ptr<EquivClasses const>;

/// Unions every stored word with each of its one-step rewrites that stays in
/// the universe.
EquivClasses saturate(UniversePtr universe, RuleSystemPtr system);

/// Convenience: enumerate then saturate.
ClassesPtr saturate(RuleSystemPtr system, std::size_t L, std::size_t k,
                    std::uint64_t budget = default_universe_budget);

struct SearchVerdict {
  enum class Status { proven, unknown };
  Status status = Status::unknown;
  /// c_0 = w, ..., c_n = w' when proven. A single word for w = w'.
  std::vector<Word> chain;
  /// Nodes expanded.
  std::size_t cost = 0;

  bool proven() const noexcept { return status == Status::proven; }
  std::size_t steps() const noexcept {
    return chain.empty() ? 0 : chain.size() - 1;
  }
};

inline constexpr std::size_t default_search_budget = 200'000;

/// Bidirectional breadth-first search over one-step rewrites, without a
/// length cap. Proven is sound; Unknown is not a refutation.
SearchVerdict equiv_search(Word const& w, Word const& target,
                           RuleSystem const& sys,
                           std::size_t budget = default_search_budget);

struct CensusReport {
  std::size_t cap = 0;
  std::size_t slack = 0;
  /// Classes meeting the length <= L stratum.
  std::size_t class_count = 0;
  /// Per stratum class: number of members of length <= L.
  std::vector<std::size_t> sizes;
  /// Per stratum class: number of members including bridge words.
  std::vector<std::size_t> total_sizes;
  std::vector<Word> representatives;
  /// Classes containing a length-1 word.
  std::size_t singleton_classes = 0;
};

CensusReport class_census(EquivClasses const& classes);

}  // namespace tensorlab
