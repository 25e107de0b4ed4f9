#pragma once

// Explicit dissociated sequences. Every builder verifies its output before
// returning it; a failed verification is a bug and throws.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "davenport/certificate.hpp"
#include "davenport/decomposition.hpp"
#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/integer.hpp"
#include "davenport/weights.hpp"

namespace davenport {

inline constexpr std::size_t kExhaustivePairingRank = 10;

namespace detail {

inline Certificate checked(Certificate c) {
  auto rep = verify_certificate(c);
  if (!rep.valid) throw VerificationFailure(c.provenance + " is not dissociated: " + rep.message);
  return c;
}

}  // namespace detail

// e, 2e, 4e, ..., 2^(floor(log2 m) - 1) e in C_m.
inline Certificate cyclic_chain(std::uint64_t m) {
  if (m < 2) throw InvalidInput("cyclic_chain requires m >= 2");
  Certificate c;
  c.moduli = {m};
  c.weights = WeightSpec::plus_minus();
  c.provenance = "cyclic_chain(" + std::to_string(m) + ")";
  for (int i = 0; i < floor_log2(m); ++i) c.elements.push_back({{std::uint64_t{1} << i}});
  return detail::checked(std::move(c));
}

inline std::size_t rank2_pm_length(std::uint64_t m1, std::uint64_t m2) {
  return static_cast<std::size_t>(floor_log2_third(m1) + floor_log2_third(m2) + 3);
}

// Length floor(log2(m1/3)) + floor(log2(m2/3)) + 3 over C_{m1} + C_{m2}.
inline Certificate rank2_pm(std::uint64_t m1, std::uint64_t m2) {
  if (m1 < 4 || m2 < 3) throw InvalidInput("rank2_pm requires m1 >= 4 and m2 >= 3");
  int k = floor_log2_third(m1);
  int l = floor_log2_third(m2);
  // integer nearest to m1/6, halves rounded up
  auto m = static_cast<std::int64_t>((m1 + 3) / 6);
  auto n1 = static_cast<std::int64_t>(m1);
  auto d = ((m - (std::int64_t{1} << k)) % n1 + n1) % n1;
  Certificate c;
  c.moduli = {m1, m2};
  c.weights = WeightSpec::plus_minus();
  c.provenance = "rank2_pm(" + std::to_string(m1) + "," + std::to_string(m2) + ")";
  for (int i = 0; i < k; ++i) c.elements.push_back({{(std::uint64_t{1} << i) % m1, 0}});
  for (int j = 0; j < l; ++j) c.elements.push_back({{0, (std::uint64_t{3} << j) % m2}});
  for (int t = 0; t < 3; ++t) {
    auto shift = t == 0 ? 0 : std::int64_t{1} << (k + t - 1);
    c.elements.push_back({{static_cast<std::uint64_t>((d + shift) % n1), 1 % m2}});
  }
  return detail::checked(std::move(c));
}

// The basis elements of order exp(G), dissociated for full weights.
inline Certificate independent_full(const AbelianGroup& g) {
  if (g.trivial()) throw InvalidInput("independent_full requires a nontrivial group");
  Certificate c;
  c.moduli = g.moduli();
  c.weights = WeightSpec::full();
  c.provenance = "independent_full";
  for (std::size_t j = 0; j < g.rank(); ++j) {
    if (g.moduli()[j] != g.exponent()) continue;
    auto e = zero_element(g.moduli());
    e.coords[j] = 1;
    c.elements.push_back(std::move(e));
  }
  return detail::checked(std::move(c));
}

enum class BlockMethod { CyclicChain, Rank2Pm, IndependentFull };

inline std::string to_string(BlockMethod m) {
  switch (m) {
    case BlockMethod::CyclicChain: return "cyclic_chain";
    case BlockMethod::Rank2Pm: return "rank2_pm";
    case BlockMethod::IndependentFull: return "independent_full";
  }
  return "?";
}

struct PlanBlock {
  std::vector<std::size_t> indices;  // into ConstructionPlan::parts
  BlockMethod method = BlockMethod::CyclicChain;

  friend bool operator==(const PlanBlock&, const PlanBlock&) = default;
};

struct ConstructionPlan {
  std::vector<std::uint64_t> parts;  // a decomposition of the target group
  std::vector<PlanBlock> blocks;

  friend bool operator==(const ConstructionPlan&, const ConstructionPlan&) = default;
};

inline std::string to_string(const ConstructionPlan& p) {
  std::string s;
  for (const auto& b : p.blocks) {
    if (!s.empty()) s += " + ";
    s += to_string(b.method) + "(";
    for (std::size_t i = 0; i < b.indices.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(p.parts[b.indices[i]]);
    }
    s += ")";
  }
  return s;
}

// Builds each block over its own coordinates of the presentation `plan.parts`,
// concatenates, and carries the result into the invariant-factor coordinates
// of g.
inline Certificate compose(const ConstructionPlan& plan, const AbelianGroup& g, const WeightSet& a) {
  if (!is_decomposition_of(plan.parts, g)) throw InvalidInput("plan parts do not decompose " + g.to_string());
  std::vector<bool> covered(plan.parts.size(), false);
  for (const auto& b : plan.blocks)
    for (auto i : b.indices) {
      if (i >= plan.parts.size() || covered[i]) throw InvalidInput("plan blocks must partition the parts");
      covered[i] = true;
    }
  if (std::ranges::find(covered, false) != covered.end()) throw InvalidInput("plan blocks must partition the parts");

  std::vector<GroupElement> local;
  auto place = [&](const Certificate& c, const PlanBlock& b) {
    for (const auto& e : c.elements) {
      auto x = zero_element(plan.parts);
      for (std::size_t k = 0; k < b.indices.size(); ++k) x.coords[b.indices[k]] = e.coords[k];
      local.push_back(std::move(x));
    }
  };
  for (const auto& b : plan.blocks) {
    switch (b.method) {
      case BlockMethod::CyclicChain:
        if (b.indices.size() != 1) throw InvalidInput("cyclic_chain blocks have one part");
        if (!a.is_plus_minus()) throw InvalidInput("cyclic_chain needs plus-minus weights");
        place(cyclic_chain(plan.parts[b.indices[0]]), b);
        break;
      case BlockMethod::Rank2Pm:
        if (b.indices.size() != 2) throw InvalidInput("rank2_pm blocks have two parts");
        if (!a.is_plus_minus()) throw InvalidInput("rank2_pm needs plus-minus weights");
        place(rank2_pm(plan.parts[b.indices[0]], plan.parts[b.indices[1]]), b);
        break;
      case BlockMethod::IndependentFull: {
        if (!a.is_full()) throw InvalidInput("independent_full needs full weights");
        std::vector<std::uint64_t> sub;
        for (auto i : b.indices) sub.push_back(plan.parts[i]);
        auto exp = g.exponent();
        for (std::size_t k = 0; k < b.indices.size(); ++k) {
          if (sub[k] != exp) continue;
          auto x = zero_element(plan.parts);
          x.coords[b.indices[k]] = 1;
          local.push_back(std::move(x));
        }
        break;
      }
    }
  }
  Embedding emb(plan.parts, g);
  Certificate c;
  c.moduli = g.moduli();
  c.weights = to_spec(a);
  c.provenance = "compose[" + to_string(plan) + "]";
  for (const auto& x : local) c.elements.push_back(emb(x));
  return detail::checked(std::move(c));
}

namespace detail {

inline bool pairable(std::uint64_t x, std::uint64_t y) { return std::max(x, y) >= 4 && std::min(x, y) >= 3; }

inline std::size_t chain_length(std::uint64_t m) { return static_cast<std::size_t>(floor_log2(m)); }

// rank2_pm block with the larger part first (it needs m1 >= 4).
inline PlanBlock pair_block(const std::vector<std::uint64_t>& parts, std::size_t i, std::size_t j) {
  if (parts[j] > parts[i]) std::swap(i, j);
  return {{i, j}, BlockMethod::Rank2Pm};
}

inline std::size_t plan_length(const ConstructionPlan& p) {
  std::size_t len = 0;
  for (const auto& b : p.blocks)
    len += b.method == BlockMethod::Rank2Pm ? rank2_pm_length(p.parts[b.indices[0]], p.parts[b.indices[1]])
                                            : chain_length(p.parts[b.indices[0]]);
  return len;
}

// Best split of `parts` into chains and rank-two pairs, by DP over subsets.
inline ConstructionPlan best_pairing(const std::vector<std::uint64_t>& parts) {
  auto t = parts.size();
  auto full = (std::size_t{1} << t) - 1;
  std::vector<std::size_t> value(full + 1, 0);
  std::vector<std::int64_t> partner(full + 1, -1);  // -1: chain, else paired index
  for (std::size_t mask = 1; mask <= full; ++mask) {
    auto i = static_cast<std::size_t>(std::countr_zero(mask));
    auto rest = mask & ~(std::size_t{1} << i);
    value[mask] = chain_length(parts[i]) + value[rest];
    partner[mask] = -1;
    for (std::size_t j = i + 1; j < t; ++j) {
      if (!(rest >> j & 1U) || !pairable(parts[i], parts[j])) continue;
      auto v = rank2_pm_length(parts[i], parts[j]) + value[rest & ~(std::size_t{1} << j)];
      if (v > value[mask]) {
        value[mask] = v;
        partner[mask] = static_cast<std::int64_t>(j);
      }
    }
  }
  ConstructionPlan plan{parts, {}};
  for (auto mask = full; mask;) {
    auto i = static_cast<std::size_t>(std::countr_zero(mask));
    mask &= ~(std::size_t{1} << i);
    if (partner[mask | (std::size_t{1} << i)] < 0) {
      plan.blocks.push_back({{i}, BlockMethod::CyclicChain});
    } else {
      auto j = static_cast<std::size_t>(partner[mask | (std::size_t{1} << i)]);
      mask &= ~(std::size_t{1} << j);
      plan.blocks.push_back(pair_block(parts, i, j));
    }
  }
  return plan;
}

// Pairs sorted parts as m_i with m_{i-s} for the top s = floor(t/2) indices
// whenever that beats two chains; chains elsewhere.
inline ConstructionPlan greedy_pairing(std::vector<std::uint64_t> parts) {
  std::ranges::sort(parts);
  auto t = parts.size();
  auto s = t / 2;
  ConstructionPlan plan{parts, {}};
  std::vector<bool> used(t, false);
  for (auto i = t - s; i < t; ++i) {
    auto j = i - s;
    if (pairable(parts[i], parts[j]) &&
        rank2_pm_length(parts[i], parts[j]) > chain_length(parts[i]) + chain_length(parts[j])) {
      plan.blocks.push_back(pair_block(parts, i, j));
      used[i] = used[j] = true;
    }
  }
  for (std::size_t i = 0; i < t; ++i)
    if (!used[i]) plan.blocks.push_back({{i}, BlockMethod::CyclicChain});
  return plan;
}

inline ConstructionPlan pairing_for(const std::vector<std::uint64_t>& parts) {
  return parts.size() <= kExhaustivePairingRank ? best_pairing(parts) : greedy_pairing(parts);
}

}  // namespace detail

struct PlannedCertificate {
  ConstructionPlan plan;
  Certificate certificate;
};

// The longest certified construction over all decompositions of g (all of
// them when the total rank permits, else the invariant factors only).
inline PlannedCertificate plan_best(const AbelianGroup& g, const WeightSet& a) {
  if (g.trivial()) throw InvalidInput("plan_best requires a nontrivial group");
  if (a.is_full() && !(a.is_plus_minus() && a.label() == WeightKind::PlusMinus)) {
    ConstructionPlan plan{g.moduli(), {}};
    PlanBlock b{{}, BlockMethod::IndependentFull};
    for (std::size_t i = 0; i < g.rank(); ++i) b.indices.push_back(i);
    plan.blocks.push_back(std::move(b));
    return {plan, compose(plan, g, a)};
  }
  if (!a.is_plus_minus()) throw InvalidInput("plan_best supports plus-minus and full weights");
  ConstructionPlan best = detail::pairing_for(g.moduli());
  auto best_len = detail::plan_length(best);
  if (g.total_rank() <= kExhaustivePairingRank) {
    for_each_decomposition(g, [&](const Decomposition& d) {
      auto plan = detail::pairing_for(d.parts);
      auto len = detail::plan_length(plan);
      if (len > best_len) {
        best_len = len;
        best = std::move(plan);
      }
    });
  }
  return {best, compose(best, g, a)};
}

}  // namespace davenport
