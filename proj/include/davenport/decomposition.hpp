#pragma once

// Direct-sum decompositions G = C_{m_1} + ... + C_{m_t} built from the
// prime-power components of G, and explicit embeddings of such presentations
// into the invariant-factor coordinates of G.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/integer.hpp"

namespace davenport {

inline constexpr std::size_t kMaxDecompositionRank = 24;

// One cyclic prime-power summand C_q inside invariant factor `coord`.
// `idempotent` is the residue mod n_coord that is 1 mod q and 0 mod n_coord / q.
struct Component {
  std::size_t coord = 0;
  std::uint64_t prime = 0;
  std::uint64_t power = 0;
  std::uint64_t idempotent = 0;
};

inline std::vector<Component> components(const AbelianGroup& g) {
  std::vector<Component> out;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    auto n = g.moduli()[j];
    for (const auto& pp : factorize(n)) {
      auto q = pp.value();
      auto co = n / q;
      auto c = static_cast<std::uint64_t>((static_cast<unsigned __int128>(co) * mod_inverse(co % q, q)) % n);
      if (q == n) c = 1;
      out.push_back({j, pp.prime, q, c});
    }
  }
  return out;
}

struct Decomposition {
  std::vector<std::uint64_t> parts;  // sorted ascending, all >= 2

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
  friend auto operator<=>(const Decomposition&, const Decomposition&) = default;
};

// Maps a presentation C_{m_1} + ... + C_{m_t} isomorphically onto a direct
// summand of `target` spanned by a chosen set of its components (all of them
// by default). Matching prime powers are paired in a fixed order.
class Embedding {
 public:
  Embedding(std::vector<std::uint64_t> source, AbelianGroup target)
      : Embedding(std::move(source), std::move(target), {}) {}

  Embedding(std::vector<std::uint64_t> source, AbelianGroup target, std::vector<std::size_t> allowed)
      : source_(std::move(source)), target_(std::move(target)) {
    auto comps = components(target_);
    if (allowed.empty())
      for (std::size_t i = 0; i < comps.size(); ++i) allowed.push_back(i);
    std::vector<bool> used(comps.size(), false);
    for (std::size_t i = 0; i < source_.size(); ++i) {
      if (source_[i] == 0) throw InvalidInput("moduli must be positive");
      for (const auto& pp : factorize(source_[i])) {
        auto q = pp.value();
        bool found = false;
        for (auto c : allowed) {
          if (c >= comps.size()) throw InvalidInput("component index out of range");
          if (!used[c] && comps[c].power == q) {
            used[c] = true;
            links_.push_back({i, q, comps[c]});
            found = true;
            break;
          }
        }
        if (!found) throw InvalidInput("presentation is not a direct summand of " + target_.to_string());
      }
    }
  }

  [[nodiscard]] const std::vector<std::uint64_t>& source() const { return source_; }
  [[nodiscard]] const AbelianGroup& target() const { return target_; }

  // True when the source is isomorphic to the whole target.
  [[nodiscard]] bool surjective() const { return links_.size() == components(target_).size(); }

  [[nodiscard]] GroupElement operator()(const GroupElement& x) const {
    check_element(source_, x);
    auto out = zero_element(target_.moduli());
    for (const auto& l : links_) {
      auto n = target_.moduli()[l.comp.coord];
      auto v = x.coords[l.source_coord] % l.power;
      auto term = static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * l.comp.idempotent) % n);
      out.coords[l.comp.coord] = (out.coords[l.comp.coord] + term) % n;
    }
    return out;
  }

  // Inverse of operator() on a surjective embedding.
  [[nodiscard]] GroupElement preimage(const GroupElement& y) const {
    if (!surjective()) throw InvalidInput("preimage requires an isomorphism");
    check_element(target_.moduli(), y);
    auto out = zero_element(source_);
    for (const auto& l : links_) {
      auto m = source_[l.source_coord];
      auto v = y.coords[l.comp.coord] % l.power;
      auto co = m / l.power;
      auto e = l.power == m ? 1 : static_cast<std::uint64_t>((static_cast<unsigned __int128>(co) *
                                                                mod_inverse(co % l.power, l.power)) % m);
      auto term = static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * e) % m);
      out.coords[l.source_coord] = (out.coords[l.source_coord] + term) % m;
    }
    return out;
  }

 private:
  struct Link {
    std::size_t source_coord;
    std::uint64_t power;
    Component comp;
  };
  std::vector<std::uint64_t> source_;
  AbelianGroup target_;
  std::vector<Link> links_;
};

namespace detail {

struct PrimeLevel {
  std::vector<std::uint64_t> powers;  // distinct, descending
  std::vector<int> counts;
};

inline std::vector<PrimeLevel> prime_levels(const AbelianGroup& g) {
  std::map<std::uint64_t, std::map<std::uint64_t, int, std::greater<>>> by_prime;
  for (const auto& c : components(g)) ++by_prime[c.prime][c.power];
  std::vector<PrimeLevel> out;
  for (const auto& [p, powers] : by_prime) {
    PrimeLevel level;
    for (const auto& [q, k] : powers) {
      level.powers.push_back(q);
      level.counts.push_back(k);
    }
    out.push_back(std::move(level));
  }
  return out;
}

// Calls f(next_blocks) once per distinct multiset obtained by placing the
// powers of one prime into `blocks` (sorted ascending, pairwise coprime to
// that prime), at most one power per block, leftovers forming new blocks.
// Among equal blocks the chosen powers are non-increasing, so every multiset
// is produced exactly once.
template <class F>
void for_each_extension(const std::vector<std::uint64_t>& blocks, PrimeLevel level, F&& f) {
  std::vector<std::uint64_t> next(blocks);
  auto recurse = [&](auto&& self, std::size_t i, std::size_t prev_rank) -> void {
    if (i == blocks.size()) {
      auto out = next;
      for (std::size_t k = 0; k < level.powers.size(); ++k)
        for (int c = 0; c < level.counts[k]; ++c) out.push_back(level.powers[k]);
      std::ranges::sort(out);
      f(out);
      return;
    }
    bool tied = i > 0 && blocks[i] == blocks[i - 1];
    std::size_t limit = tied ? prev_rank : level.powers.size();
    // rank 0 = leave block unchanged; rank K - k = take powers[k].
    self(self, i + 1, 0);
    for (std::size_t k = 0; k < level.powers.size(); ++k) {
      std::size_t rank = level.powers.size() - k;
      if (rank > limit || level.counts[k] == 0) continue;
      --level.counts[k];
      next[i] = blocks[i] * level.powers[k];
      self(self, i + 1, rank);
      next[i] = blocks[i];
      ++level.counts[k];
    }
  };
  recurse(recurse, 0, level.powers.size());
}

}  // namespace detail

inline void check_decomposition_rank(const AbelianGroup& g) {
  if (g.total_rank() > kMaxDecompositionRank)
    throw LimitExceeded("total rank " + std::to_string(g.total_rank()) + " exceeds decomposition cap of " +
                        std::to_string(kMaxDecompositionRank));
}

// Streams every decomposition of g into cyclic groups whose parts are products
// of prime powers with at most one power of each prime per part. Each distinct
// multiset of parts is produced once. Returns the number streamed.
template <class F>
std::size_t for_each_decomposition(const AbelianGroup& g, F&& f) {
  check_decomposition_rank(g);
  auto levels = detail::prime_levels(g);
  std::size_t count = 0;
  auto recurse = [&](auto&& self, std::size_t level, const std::vector<std::uint64_t>& blocks) -> void {
    if (level == levels.size()) {
      ++count;
      f(Decomposition{blocks});
      return;
    }
    detail::for_each_extension(blocks, levels[level], [&](const std::vector<std::uint64_t>& next) {
      self(self, level + 1, next);
    });
  };
  recurse(recurse, 0, {});
  return count;
}

inline std::vector<Decomposition> decompositions(const AbelianGroup& g) {
  std::vector<Decomposition> out;
  for_each_decomposition(g, [&](const Decomposition& d) { out.push_back(d); });
  return out;
}

// Checks that `parts` present a group isomorphic to g.
inline bool is_decomposition_of(std::span<const std::uint64_t> parts, const AbelianGroup& g) {
  for (auto m : parts)
    if (m == 0) return false;
  return AbelianGroup(parts) == g;
}

}  // namespace davenport
