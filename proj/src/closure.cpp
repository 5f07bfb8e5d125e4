#include "tensorlab/closure.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "tensorlab/union_find.hpp"

namespace tensorlab {

namespace {
  constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

  std::uint64_t add_sat(std::uint64_t a, std::uint64_t b) {
    return a > saturated - b ? saturated : a + b;
  }

  // C(n, r) saturating; n, r small.
  std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) {
      return 0;
    }
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
      acc = acc * (n - r + i) / i;
      if (acc > saturated) {
        return saturated;
      }
    }
    return static_cast<std::uint64_t>(acc);
  }

  struct LettersHash {
    std::size_t operator()(Letters const& w) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (Letter l : w) {
        h ^= l + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return h;
    }
  };
}  // namespace

std::uint64_t universe_word_count(std::size_t letters, std::size_t max_length) {
  std::uint64_t total = 0;
  for (std::size_t h = 1; h <= max_length; ++h) {
    total = add_sat(total, binomial(letters + h - 1, h));
  }
  return total;
}

////////////////////////////////////////////////////////////////////////////
// WordUniverse
////////////////////////////////////////////////////////////////////////////

WordUniverse WordUniverse::enumerate(AlphabetPtr alphabet, std::size_t L,
                                     std::size_t k, std::uint64_t budget) {
  if (L == 0) {
    throw Error("word universe cap L must be positive");
  }
  std::size_t const s = alphabet->size();
  std::size_t const max_len = L + k;
  std::uint64_t const required = universe_word_count(s, max_len);
  if (required > budget) {
    throw BudgetExceeded(required, budget);
  }
  WordUniverse u;
  u.alphabet_ = std::move(alphabet);
  u.cap_ = L;
  u.slack_ = k;
  u.multisets_.assign(max_len + 1, std::vector<std::uint64_t>(s + 1, 0));
  for (std::size_t r = 0; r <= max_len; ++r) {
    for (std::size_t v = 0; v <= s; ++v) {
      std::size_t const avail = s - v;
      u.multisets_[r][v] = r == 0 ? 1 : (avail == 0 ? 0 : binomial(avail + r - 1, r));
    }
  }
  u.start_.reserve(required + 1);
  u.data_.reserve(required * max_len);
  u.length_offset_.assign(max_len + 2, 0);
  u.start_.push_back(0);
  Letters w;
  for (std::size_t h = 1; h <= max_len; ++h) {
    u.length_offset_[h] = u.start_.size() - 1;
    w.assign(h, 0);
    while (true) {
      u.data_.insert(u.data_.end(), w.begin(), w.end());
      u.start_.push_back(u.data_.size());
      // Next sorted sequence in lexicographic order.
      std::size_t i = h;
      while (i > 0 && w[i - 1] + 1 == s) {
        --i;
      }
      if (i == 0) {
        break;
      }
      Letter const v = w[i - 1] + 1;
      std::fill(w.begin() + static_cast<std::ptrdiff_t>(i - 1), w.end(), v);
    }
  }
  u.length_offset_[max_len + 1] = u.start_.size() - 1;
  return u;
}

Word WordUniverse::word_value(std::size_t ordinal) const {
  auto w = word(ordinal);
  return Word::raw(alphabet_, Letters(w.begin(), w.end()));
}

std::size_t WordUniverse::ordinal(std::span<Letter const> sorted) const {
  std::size_t const h = sorted.size();
  if (h == 0 || h > max_length()) {
    return npos;
  }
  std::size_t rank = 0;
  Letter prev = 0;
  for (std::size_t i = 0; i < h; ++i) {
    std::size_t const remaining = h - i - 1;
    for (Letter v = prev; v < sorted[i]; ++v) {
      rank += multisets_[remaining][v];
    }
    prev = sorted[i];
  }
  return length_offset_[h] + rank;
}

std::size_t WordUniverse::ordinal(Word const& w) const {
  if (w.is_canonical()) {
    return ordinal(std::span<Letter const>(w.letters()));
  }
  return ordinal(canonical(w));
}

std::size_t WordUniverse::count_up_to(std::size_t h) const {
  h = std::min(h, max_length());
  return length_offset_[h + 1];
}

////////////////////////////////////////////////////////////////////////////
// EquivClasses
////////////////////////////////////////////////////////////////////////////

EquivClasses::EquivClasses(UniversePtr universe, RuleSystemPtr system,
                           std::vector<std::size_t> class_of)
    : universe_(std::move(universe)),
      system_(std::move(system)),
      class_of_(std::move(class_of)) {
  // Renumber so that class ids follow least members.
  std::size_t const n = class_of_.size();
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = renumber.emplace(class_of_[i], rep_.size());
    if (fresh) {
      rep_.push_back(i);
    }
    class_of_[i] = it->second;
  }
  member_start_.assign(rep_.size() + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++member_start_[class_of_[i] + 1];
  }
  for (std::size_t c = 0; c < rep_.size(); ++c) {
    member_start_[c + 1] += member_start_[c];
  }
  members_.resize(n);
  std::vector<std::size_t> fill(member_start_.begin(), member_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    members_[fill[class_of_[i]]++] = i;
  }
  std::size_t const stratum = universe_->stratum_size();
  stratum_classes_ = static_cast<std::size_t>(
      std::lower_bound(rep_.begin(), rep_.end(), stratum) - rep_.begin());
}

std::size_t EquivClasses::class_of_word(Word const& w) const {
  std::size_t const ord = universe_->ordinal(w);
  return ord == npos ? npos : class_of_[ord];
}

std::vector<Word> EquivClasses::chain_within(std::size_t from,
                                             std::size_t to) const {
  if (class_of_[from] != class_of_[to]) {
    return {};
  }
  auto const& u = *universe_;
  if (from == to) {
    return {u.word_value(from)};
  }
  std::unordered_map<std::size_t, std::size_t> parent;
  parent.emplace(from, from);
  std::deque<std::size_t> queue{from};
  while (!queue.empty()) {
    std::size_t const cur = queue.front();
    queue.pop_front();
    bool done = false;
    for_each_neighbor(u.word(cur), *system_, [&](Letters const& next) {
      if (done) {
        return;
      }
      std::size_t const ord = u.ordinal(next);
      if (ord == npos || parent.count(ord) > 0) {
        return;
      }
      parent.emplace(ord, cur);
      if (ord == to) {
        done = true;
        return;
      }
      queue.push_back(ord);
    });
    if (done) {
      break;
    }
  }
  std::vector<Word> chain;
  for (std::size_t cur = to;; cur = parent.at(cur)) {
    chain.push_back(u.word_value(cur));
    if (cur == from) {
      break;
    }
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

EquivClasses saturate(UniversePtr universe, RuleSystemPtr system) {
  if (!same_alphabet(universe->alphabet(), *system->alphabet)) {
    throw AlphabetMismatch("saturate: universe and rule system alphabets differ");
  }
  auto const& u = *universe;
  UnionFind uf(u.size());
  // Rules are symmetric, so one pass over every edge reaches the fixpoint.
  for (std::size_t i = 0; i < u.size(); ++i) {
    for_each_neighbor(u.word(i), *system, [&](Letters const& next) {
      std::size_t const ord = u.ordinal(next);
      if (ord != WordUniverse::npos) {
        uf.unite(i, ord);
      }
    });
  }
  std::vector<std::size_t> class_of(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    class_of[i] = uf.find(i);
  }
  return EquivClasses(std::move(universe), std::move(system),
                      std::move(class_of));
}

ClassesPtr saturate(RuleSystemPtr system, std::size_t L, std::size_t k,
                    std::uint64_t budget) {
  auto universe = std::make_shared<WordUniverse const>(
      WordUniverse::enumerate(system->alphabet, L, k, budget));
  return std::make_shared<EquivClasses const>(
      saturate(std::move(universe), std::move(system)));
}

////////////////////////////////////////////////////////////////////////////
// Bidirectional search
////////////////////////////////////////////////////////////////////////////

SearchVerdict equiv_search(Word const& w, Word const& target,
                           RuleSystem const& sys, std::size_t budget) {
  if (!same_alphabet(w.alphabet(), target.alphabet())
      || !same_alphabet(w.alphabet(), *sys.alphabet)) {
    throw AlphabetMismatch("equiv_search: alphabets differ");
  }
  SearchVerdict verdict;
  Letters const start = canonical(w).letters();
  Letters const goal = canonical(target).letters();
  auto const& alphabet = w.alphabet_ptr();
  if (start == goal) {
    verdict.status = SearchVerdict::Status::proven;
    verdict.chain = {Word::raw(alphabet, start)};
    return verdict;
  }
  using Parents = std::unordered_map<Letters, Letters, LettersHash>;
  Parents parent[2];
  std::vector<Letters> frontier[2];
  parent[0].emplace(start, start);
  parent[1].emplace(goal, goal);
  frontier[0].push_back(start);
  frontier[1].push_back(goal);

  std::optional<Letters> meet;
  while (!meet && !frontier[0].empty() && !frontier[1].empty()) {
    int const side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    std::vector<Letters> next_level;
    for (auto const& cur : frontier[side]) {
      if (verdict.cost >= budget) {
        return verdict;
      }
      ++verdict.cost;
      for_each_neighbor(cur, sys, [&](Letters const& next) {
        if (meet) {
          return;
        }
        if (parent[side].count(next) > 0) {
          return;
        }
        parent[side].emplace(next, cur);
        if (parent[1 - side].count(next) > 0) {
          meet = next;
          return;
        }
        next_level.push_back(next);
      });
      if (meet) {
        break;
      }
    }
    frontier[side] = std::move(next_level);
  }
  if (!meet) {
    return verdict;
  }
  std::vector<Word> chain;
  for (Letters cur = *meet;;) {
    chain.push_back(Word::raw(alphabet, cur));
    Letters const& p = parent[0].at(cur);
    if (p == cur) {
      break;
    }
    cur = p;
  }
  std::reverse(chain.begin(), chain.end());
  for (Letters cur = *meet;;) {
    Letters const& p = parent[1].at(cur);
    if (p == cur) {
      break;
    }
    cur = p;
    chain.push_back(Word::raw(alphabet, cur));
  }
  verdict.status = SearchVerdict::Status::proven;
  verdict.chain = std::move(chain);
  return verdict;
}

CensusReport class_census(EquivClasses const& classes) {
  CensusReport report;
  auto const& u = classes.universe();
  report.cap = u.cap();
  report.slack = u.slack();
  report.class_count = classes.stratum_class_count();
  std::size_t const stratum = u.stratum_size();
  std::size_t const singles = u.count_up_to(1);
  for (std::size_t c = 0; c < report.class_count; ++c) {
    auto members = classes.members(c);
    report.total_sizes.push_back(members.size());
    report.sizes.push_back(static_cast<std::size_t>(std::count_if(
        members.begin(), members.end(),
        [stratum](std::size_t m) { return m < stratum; })));
    report.representatives.push_back(
        u.word_value(classes.representative(c)));
    if (classes.representative(c) < singles) {
      ++report.singleton_classes;
    }
  }
  return report;
}

}  // namespace tensorlab
