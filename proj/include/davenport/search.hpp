#pragma once

// Exhaustive search for the longest A-dissociated sequence over a finite
// abelian group. D_A(G) = max_len + 1 once the search is exhausted.
//
// Sequences are enumerated as multisets (non-decreasing element index). Each
// node carries Sigma_A of its prefix and the list of elements that can still
// be appended; a candidate c survives iff -a*c is outside Sigma for all a in A.
// Root branches (choice of first element) are independent tasks.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "davenport/certificate.hpp"
#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/integer.hpp"
#include "davenport/sumset.hpp"
#include "davenport/weights.hpp"

namespace davenport {

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000'000;

struct SearchConfig {
  std::optional<std::size_t> max_depth;  // longest sequence explored
  std::uint64_t node_budget = kDefaultNodeBudget;
  unsigned threads = 1;
  // Tasks never share their running best, so node counts do not depend on
  // scheduling. The witness is the same either way.
  bool deterministic = true;
  // Restrict the first element to orbit representatives under unit scaling
  // and permutations of equal moduli.
  bool symmetry = false;
  // A length known to be attainable (e.g. from a construction). Branches that
  // cannot reach it are cut.
  std::size_t lower_hint = 0;
  std::uint64_t max_elements = kDefaultMaxElements;
};

struct SearchResult {
  std::size_t max_len = 0;
  Certificate witness;
  bool exhausted = false;
  std::uint64_t nodes = 0;
  std::chrono::milliseconds elapsed{0};
  std::size_t max_depth = 0;
};

// Largest possible length of an A-dissociated sequence, from first principles:
// |G| - 1 in general, floor(log2 |G|) when A contains some unit u and -u.
inline std::size_t dissociated_length_cap(const AbelianGroup& g, const WeightSet& a) {
  auto n = g.order();
  if (a.plus_minus_unit()) return static_cast<std::size_t>(floor_log2(n));
  return static_cast<std::size_t>(n - 1);
}

inline std::size_t default_max_depth(const AbelianGroup& g, const WeightSet& a) {
  auto n = g.order();
  if (a.plus_minus_unit()) return static_cast<std::size_t>(std::min<std::uint64_t>(n, floor_log2(n) + 1));
  return static_cast<std::size_t>(n);
}

// Smallest element index in each orbit under x -> u*x (u a unit mod exp) and
// swaps of coordinates with equal moduli.
inline std::vector<std::uint32_t> orbit_representatives(const ElementTable& t, std::uint64_t exponent) {
  std::vector<std::uint32_t> parent(t.size());
  std::iota(parent.begin(), parent.end(), 0U);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  const auto& mod = t.moduli();
  for (std::uint64_t u = 2; u < exponent; ++u) {
    if (std::gcd(u, exponent) != 1) continue;
    for (std::uint32_t x = 0; x < t.size(); ++x) unite(x, t.scale(static_cast<std::int64_t>(u), x));
  }
  for (std::size_t k = 0; k + 1 < mod.size(); ++k) {
    if (mod[k] != mod[k + 1]) continue;
    for (std::uint32_t x = 0; x < t.size(); ++x) {
      auto e = t.element(x);
      std::swap(e.coords[k], e.coords[k + 1]);
      unite(x, t.index_of(e));
    }
  }
  std::vector<std::uint32_t> reps;
  for (std::uint32_t x = 0; x < t.size(); ++x)
    if (find(x) == x) reps.push_back(x);
  return reps;
}

namespace detail {

class DissociatedSearch {
 public:
  DissociatedSearch(const AbelianGroup& g, const WeightSet& a, const SearchConfig& cfg)
      : group_(g), weights_(a), cfg_(cfg), table_(g.moduli(), cfg.max_elements) {
    if (a.exponent() != g.exponent()) throw InvalidInput("weight set does not match group exponent");
    max_depth_ = cfg.max_depth.value_or(default_max_depth(g, a));
    auto n = table_.size();
    multiples_.resize(n);
    neg_multiples_.resize(n);
    repeatable_.resize(n);
    for (std::uint32_t x = 0; x < n; ++x) {
      multiples_[x] = weighted_multiples(table_, a, x);
      bool self_blocked = std::ranges::binary_search(multiples_[x], 0U);
      for (auto h : multiples_[x]) neg_multiples_[x].push_back(table_.neg(h));
      bool clash = std::ranges::any_of(neg_multiples_[x],
                                       [&](auto h) { return std::ranges::binary_search(multiples_[x], h); });
      repeatable_[x] = !self_blocked && !clash;
      if (!self_blocked) root_.push_back(x);
    }
  }

  SearchResult run() {
    auto start = std::chrono::steady_clock::now();
    std::vector<std::uint32_t> firsts;
    if (cfg_.symmetry) {
      auto reps = orbit_representatives(table_, group_.exponent());
      std::ranges::set_intersection(reps, root_, std::back_inserter(firsts));
    } else {
      firsts = root_;
    }

    std::vector<TaskResult> results(firsts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      Worker w(*this);
      while (!stop_.load(std::memory_order_relaxed)) {
        auto i = next.fetch_add(1);
        if (i >= firsts.size()) break;
        results[i] = w.run_task(firsts, i);
      }
      w.flush();
    };
    unsigned threads = std::max(1U, cfg_.threads);
    if (threads == 1 || firsts.size() <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned k = 0; k < std::min<std::size_t>(threads, firsts.size()); ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    SearchResult out;
    out.max_depth = max_depth_;
    std::vector<std::uint32_t> best;
    for (const auto& r : results)
      if (r.path.size() > best.size()) best = r.path;
    out.max_len = best.size();
    out.nodes = nodes_.load() + 1;  // the empty root
    bool complete = !stop_.load();
    bool depth_ok = out.max_len < max_depth_ || max_depth_ >= dissociated_length_cap(group_, weights_);
    bool hint_ok = out.max_len >= cfg_.lower_hint;
    out.exhausted = complete && depth_ok && hint_ok;
    out.witness.moduli = group_.moduli();
    out.witness.weights = to_spec(weights_);
    out.witness.provenance = "search";
    for (auto x : best) out.witness.elements.push_back(table_.element(x));
    auto check = verify_certificate(out.witness);
    if (!check.valid) throw VerificationFailure("search produced an invalid witness: " + check.message);
    out.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return out;
  }

 private:
  struct TaskResult {
    std::vector<std::uint32_t> path;
  };

  class Worker {
   public:
    explicit Worker(DissociatedSearch& s) : s_(s) {
      sigma_.resize(s.max_depth_ + 1, SumSet(s.table_.size()));
      cands_.resize(s.max_depth_ + 1);
    }

    TaskResult run_task(const std::vector<std::uint32_t>& firsts, std::size_t i) {
      best_.clear();
      path_.clear();
      if (s_.max_depth_ == 0) return {};
      auto first = firsts[i];
      SumSet empty(s_.table_.size());
      empty.extend_into(s_.table_, s_.multiples_[first], sigma_[1]);
      auto& c = cands_[1];
      c.clear();
      // Without symmetry the tail is >= first; with it, the first element is
      // only an orbit representative and the tail ranges over everything.
      auto begin = s_.cfg_.symmetry ? s_.root_.begin() : std::ranges::lower_bound(s_.root_, first);
      for (auto it = begin; it != s_.root_.end(); ++it)
        if (allowed(*it, sigma_[1])) c.push_back(*it);
      path_.push_back(first);
      ++local_nodes_;
      dfs(1);
      return {best_};
    }

    void flush() {
      s_.nodes_.fetch_add(local_nodes_);
      local_nodes_ = 0;
    }

   private:
    [[nodiscard]] bool allowed(std::uint32_t x, const SumSet& sigma) const {
      return std::ranges::none_of(s_.neg_multiples_[x], [&](auto h) { return sigma.contains(h); });
    }

    // Upper bound on how many more elements can be appended at this node.
    [[nodiscard]] std::size_t headroom(std::size_t depth) const {
      const auto& c = cands_[depth];
      std::size_t bound = s_.max_depth_ - depth;
      // every extension grows Sigma u {0} strictly
      bound = std::min<std::size_t>(bound, s_.table_.size() - 1 - sigma_[depth].count());
      if (std::ranges::all_of(c, [&](auto x) { return !s_.repeatable_[x]; })) {
        // each candidate used at most once, never together with its negative
        std::size_t classes = 0;
        for (auto x : c) {
          auto nx = s_.table_.neg(x);
          if (x <= nx || !std::ranges::binary_search(c, nx)) ++classes;
        }
        bound = std::min(bound, classes);
      }
      return bound;
    }

    void dfs(std::size_t depth) {
      if (path_.size() > best_.size()) best_ = path_;
      if (depth >= s_.max_depth_) return;
      if (local_nodes_ >= 4096) {
        flush();
        if (s_.nodes_.load(std::memory_order_relaxed) >= s_.cfg_.node_budget) s_.stop_.store(true);
      }
      if (s_.stop_.load(std::memory_order_relaxed)) return;
      auto reach = depth + headroom(depth);
      std::size_t floor = s_.cfg_.lower_hint;
      if (!s_.cfg_.deterministic) floor = std::max(floor, s_.shared_best_.load(std::memory_order_relaxed));
      if (reach <= best_.size() || reach < floor) return;

      const auto& c = cands_[depth];
      for (std::size_t p = 0; p < c.size(); ++p) {
        auto x = c[p];
        sigma_[depth].extend_into(s_.table_, s_.multiples_[x], sigma_[depth + 1]);
        auto& next = cands_[depth + 1];
        next.clear();
        for (std::size_t q = p; q < c.size(); ++q)
          if (allowed(c[q], sigma_[depth + 1])) next.push_back(c[q]);
        path_.push_back(x);
        ++local_nodes_;
        if (path_.size() > best_.size() && !s_.cfg_.deterministic) s_.raise_shared(path_.size());
        dfs(depth + 1);
        path_.pop_back();
        if (s_.stop_.load(std::memory_order_relaxed)) return;
      }
    }

    DissociatedSearch& s_;
    std::vector<SumSet> sigma_;
    std::vector<std::vector<std::uint32_t>> cands_;
    std::vector<std::uint32_t> path_;
    std::vector<std::uint32_t> best_;
    std::uint64_t local_nodes_ = 0;
  };

  void raise_shared(std::size_t len) {
    auto cur = shared_best_.load();
    while (cur < len && !shared_best_.compare_exchange_weak(cur, len)) {
    }
  }

  const AbelianGroup& group_;
  const WeightSet& weights_;
  SearchConfig cfg_;
  ElementTable table_;
  std::size_t max_depth_ = 0;
  std::vector<std::vector<std::uint32_t>> multiples_;
  std::vector<std::vector<std::uint32_t>> neg_multiples_;
  std::vector<bool> repeatable_;
  std::vector<std::uint32_t> root_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> stop_{false};
  std::atomic<std::size_t> shared_best_{0};
};

}  // namespace detail

inline SearchResult max_dissociated(const AbelianGroup& g, const WeightSet& a, const SearchConfig& cfg = {}) {
  detail::DissociatedSearch search(g, a, cfg);
  return search.run();
}

}  // namespace davenport
