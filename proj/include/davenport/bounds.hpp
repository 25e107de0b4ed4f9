#pragma once

// Closed-form bounds and exact-value rules for weighted Davenport constants,
// each tagged with the rule that produced it and, for lower bounds, a
// certificate where one is constructible.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "davenport/certificate.hpp"
#include "davenport/constructions.hpp"
#include "davenport/decomposition.hpp"
#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/integer.hpp"
#include "davenport/weights.hpp"

namespace davenport {

struct AgsBounds {
  std::uint64_t chain_lower = 1;
  std::uint64_t log2_upper = 1;
};

inline AgsBounds ags_bounds(const AbelianGroup& g) {
  AgsBounds b;
  for (auto n : g.moduli()) b.chain_lower += static_cast<std::uint64_t>(floor_log2(n));
  b.log2_upper = static_cast<std::uint64_t>(floor_log2(g.order())) + 1;
  return b;
}

inline std::uint64_t decomposition_value(std::span<const std::uint64_t> parts) {
  std::uint64_t v = 1;
  for (auto m : parts) {
    if (m == 0) throw InvalidInput("decomposition parts must be positive");
    v += static_cast<std::uint64_t>(floor_log2(m));
  }
  return v;
}

inline std::uint64_t decomposition_value(const Decomposition& d) { return decomposition_value(d.parts); }

struct StarResult {
  std::uint64_t value = 1;
  Decomposition parts;
};

namespace detail {

// Higher value, then fewer parts, then lexicographically smaller parts.
inline bool star_better(const StarResult& a, const StarResult& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.parts.parts.size() != b.parts.parts.size()) return a.parts.parts.size() < b.parts.parts.size();
  return a.parts.parts < b.parts.parts;
}

}  // namespace detail

// Maximum of sum floor(log2 m_i) + 1 over decompositions with at most one
// power of each prime per part. Memoized over (prime level, blocks so far);
// exponential in the total rank.
inline StarResult star_lower(const AbelianGroup& g) {
  check_decomposition_rank(g);
  auto levels = detail::prime_levels(g);
  std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, StarResult> memo;
  auto solve = [&](auto&& self, std::size_t level, const std::vector<std::uint64_t>& blocks) -> StarResult {
    if (level == levels.size()) return {decomposition_value(blocks), Decomposition{blocks}};
    auto key = std::make_pair(level, blocks);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::optional<StarResult> best;
    detail::for_each_extension(blocks, levels[level], [&](const std::vector<std::uint64_t>& next) {
      auto r = self(self, level + 1, next);
      if (!best || detail::star_better(r, *best)) best = std::move(r);
    });
    memo.emplace(std::move(key), *best);
    return *best;
  };
  return solve(solve, 0, {});
}

// ---- reports ------------------------------------------------------------

enum class Status { Exact, Bracket };

struct LowerBound {
  std::uint64_t value = 0;
  std::string method;
  std::optional<Certificate> certificate;
};

struct UpperBound {
  std::uint64_t value = 0;
  std::string method;
};

struct NormalizationInfo {
  std::uint64_t factor = 1;
  AbelianGroup group;
  std::string weights;
};

struct BoundsReport {
  AbelianGroup group;
  WeightSpec weights;
  std::vector<LowerBound> lower;
  std::vector<UpperBound> upper;
  Status status = Status::Bracket;
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::string rule;  // the rule that settled the value, when Exact
  std::optional<NormalizationInfo> normalization;

  [[nodiscard]] bool exact() const { return status == Status::Exact; }
  [[nodiscard]] std::optional<std::uint64_t> value() const {
    return exact() ? std::optional<std::uint64_t>(lo) : std::nullopt;
  }
  [[nodiscard]] std::uint64_t best_lower() const {
    std::uint64_t v = 1;
    for (const auto& l : lower) v = std::max(v, l.value);
    return v;
  }
  [[nodiscard]] std::uint64_t best_upper() const {
    auto v = group.order();
    for (const auto& u : upper) v = std::min(v, u.value);
    return v;
  }
  // Longest attached certificate, if any.
  [[nodiscard]] const Certificate* best_certificate() const {
    const Certificate* best = nullptr;
    for (const auto& l : lower)
      if (l.certificate && (!best || l.certificate->length() > best->length())) best = &*l.certificate;
    return best;
  }
};

inline std::string to_string(Status s) { return s == Status::Exact ? "Exact" : "Bracket"; }

// Known plus-minus values that fall below floor(log2 |G|) + 1.
inline std::optional<std::uint64_t> exceptional_pm_value(const AbelianGroup& g) {
  static const std::vector<std::pair<std::vector<std::uint64_t>, std::uint64_t>> table = {
      {{3, 3}, 3}, {{3, 3, 3}, 4}, {{3, 3, 9}, 6}};
  for (const auto& [mod, v] : table)
    if (g.moduli() == mod) return v;
  return std::nullopt;
}

// C_n^r with n >= 4, {log2 n} >= {log2 3} and {log2 n} < (floor(r/2) + 1) / r.
inline bool cyclic_power_rule(const AbelianGroup& g) {
  if (g.trivial()) return false;
  auto n = g.moduli().front();
  if (std::ranges::any_of(g.moduli(), [&](auto m) { return m != n; })) return false;
  auto r = static_cast<int>(g.rank());
  return n >= 4 && frac_log2_ge(n, 3) && frac_log2_less_ratio(n, r / 2 + 1, r);
}

// C_3 + C_{3n}, n >= 2, with {log2 3n} + {log2 3} < 1 or {log2 3n} >= {log2 3}.
inline bool c3_c3n_rule(const AbelianGroup& g) {
  if (g.rank() != 2 || g.moduli()[0] != 3 || g.moduli()[1] < 6) return false;
  std::vector<std::uint64_t> both{g.moduli()[1], 3};
  return frac_log2_sum_less(both, 1) || frac_log2_ge(g.moduli()[1], 3);
}

// Parts m_1..m_r with every {log2 m_i} >= {log2 3}, at least floor(r/2) of
// them >= 4, and sum {log2 m_i} < floor(r/2) + 1.
inline bool paired_parts_condition(std::span<const std::uint64_t> parts) {
  if (parts.empty()) return false;
  auto r = parts.size();
  auto big = static_cast<std::size_t>(std::ranges::count_if(parts, [](auto m) { return m >= 4; }));
  if (big < r / 2) return false;
  if (!std::ranges::all_of(parts, [](auto m) { return m >= 3 && frac_log2_ge(m, 3); })) return false;
  return frac_log2_sum_less(parts, static_cast<int>(r / 2) + 1);
}

inline std::optional<Decomposition> paired_decomposition_rule(const AbelianGroup& g) {
  if (g.trivial() || g.total_rank() > kMaxDecompositionRank) return std::nullopt;
  std::optional<Decomposition> hit;
  for_each_decomposition(g, [&](const Decomposition& d) {
    if (!hit && paired_parts_condition(d.parts)) hit = d;
  });
  return hit;
}

namespace detail {

// Plus-minus analysis of one group, shared by the composition recursion.
struct PmNode {
  std::uint64_t value = 1;  // proven lower bound; the exact value when `exact`
  bool exact = false;
  std::string rule;
  Certificate certificate;  // longest known, possibly shorter than value - 1
  std::vector<LowerBound> lower;
  std::vector<UpperBound> upper;
};

inline Certificate chains_certificate(const std::vector<std::uint64_t>& parts, const AbelianGroup& g,
                                      const WeightSet& pm) {
  ConstructionPlan plan{parts, {}};
  for (std::size_t i = 0; i < parts.size(); ++i) plan.blocks.push_back({{i}, BlockMethod::CyclicChain});
  return compose(plan, g, pm);
}

inline Certificate basis_certificate(const AbelianGroup& g, WeightSpec w, std::string provenance) {
  Certificate c;
  c.moduli = g.moduli();
  c.weights = std::move(w);
  c.provenance = std::move(provenance);
  for (std::size_t j = 0; j < g.rank(); ++j) {
    auto e = zero_element(g.moduli());
    e.coords[j] = 1;
    c.elements.push_back(std::move(e));
  }
  return checked(std::move(c));
}

// Sub-multisets of the prime-power components of g, as component index lists
// (first matching components are taken, so each multiset appears once).
inline std::vector<std::vector<std::size_t>> component_splits(const AbelianGroup& g) {
  auto comps = components(g);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::size_t>> by_power;
  for (std::size_t i = 0; i < comps.size(); ++i) by_power[{comps[i].prime, comps[i].power}].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [k, v] : by_power) groups.push_back(v);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == groups.size()) {
      out.push_back(pick);
      return;
    }
    for (std::size_t c = 0; c <= groups[i].size(); ++c) {
      auto before = pick.size();
      pick.insert(pick.end(), groups[i].begin(), groups[i].begin() + static_cast<std::ptrdiff_t>(c));
      self(self, i + 1);
      pick.resize(before);
    }
  };
  rec(rec, 0);
  return out;
}

inline AbelianGroup subgroup_of(const std::vector<Component>& comps,
                                const std::vector<std::size_t>& idx) {
  std::vector<std::uint64_t> m;
  for (auto i : idx) m.push_back(comps[i].power);
  return AbelianGroup(m);
}

}  // namespace detail

// Cache of plus-minus analyses keyed by canonical moduli. Reusable across
// exact_value calls on one thread.
class PmCache {
 public:
  const detail::PmNode& get(const AbelianGroup& g);

 private:
  std::map<std::vector<std::uint64_t>, std::unique_ptr<detail::PmNode>> nodes_;
};

namespace detail {

inline PmNode analyse_pm(const AbelianGroup& g, PmCache& cache) {
  auto pm = make_weightset(WeightSpec::plus_minus(), g);
  PmNode node;
  if (g.trivial()) {
    node.exact = true;
    node.rule = "trivial-group";
    node.certificate = {g.moduli(), WeightSpec::plus_minus(), {}, "empty"};
    node.lower.push_back({1, "trivial-group", node.certificate});
    node.upper.push_back({1, "trivial-group"});
    return node;
  }
  auto ags = ags_bounds(g);
  auto U = ags.log2_upper;
  node.upper.push_back({U, "log2-order"});

  auto chain = chains_certificate(g.moduli(), g, pm);
  chain.provenance = "chain[" + g.to_string() + "]";
  node.lower.push_back({ags.chain_lower, "chain", chain});
  node.certificate = chain;
  node.value = ags.chain_lower;
  auto offer = [&](std::uint64_t v, const Certificate& c) {
    if (v > node.value) node.value = v;
    if (c.length() > node.certificate.length()) node.certificate = c;
  };

  if (g.exponent() == 3) {
    auto v = static_cast<std::uint64_t>(g.rank()) + 1;
    auto basis = basis_certificate(g, WeightSpec::plus_minus(), "basis");
    node.lower.push_back({v, "basis", basis});
    node.upper.push_back({v, "elementary-3"});
    node.value = v;
    node.certificate = basis;
    node.exact = true;
    node.rule = "elementary-3";
    return node;
  }

  bool can_decompose = g.total_rank() <= kMaxDecompositionRank;
  std::uint64_t star_value = 0;
  if (can_decompose) {
    auto star = star_lower(g);
    star_value = star.value;
    auto cert = chains_certificate(star.parts.parts, g, pm);
    cert.provenance = "star" + cert.provenance.substr(7);
    node.lower.push_back({star.value, "star", cert});
    offer(star.value, cert);
    if (g.rank() >= 1) node.upper.push_back({star.value + g.rank() - 1, "star-plus-rank"});
  }
  auto built = plan_best(g, pm);
  auto plan_value = built.certificate.length() + 1;
  node.lower.push_back({plan_value, "construction", built.certificate});
  offer(plan_value, built.certificate);

  auto settle = [&](std::uint64_t v, std::string rule) {
    node.value = v;
    node.exact = true;
    node.rule = std::move(rule);
  };
  if (star_value == U) {
    settle(U, "star-matches-upper");
    return node;
  }
  if (auto v = exceptional_pm_value(g)) {
    node.upper.push_back({*v, "exceptional"});
    settle(*v, "exceptional");
    return node;
  }
  if (cyclic_power_rule(g)) {
    settle(U, "cyclic-power");
    return node;
  }
  if (c3_c3n_rule(g)) {
    settle(U, "c3-c3n");
    return node;
  }
  if (paired_decomposition_rule(g)) {
    settle(U, "paired-decomposition");
    return node;
  }
  if (node.value >= U) {
    settle(U, "construction-matches-upper");
    return node;
  }

  // D(G) >= D(H1) + D(H2) - 1 over direct-summand splits G = H1 + H2.
  if (can_decompose) {
    auto comps = components(g);
    std::optional<std::pair<std::uint64_t, Certificate>> best;
    for (const auto& left : component_splits(g)) {
      if (left.empty() || left.size() == comps.size()) continue;
      std::vector<std::size_t> right;
      for (std::size_t i = 0; i < comps.size(); ++i)
        if (std::ranges::find(left, i) == left.end()) right.push_back(i);
      auto h1 = subgroup_of(comps, left);
      auto h2 = subgroup_of(comps, right);
      const auto& n1 = cache.get(h1);
      const auto& n2 = cache.get(h2);
      auto v = n1.value + n2.value - 1;
      if (best && v <= best->first) continue;
      Embedding e1(h1.moduli(), g, left);
      Embedding e2(h2.moduli(), g, right);
      Certificate c{g.moduli(), WeightSpec::plus_minus(), {}, "composition[" + h1.to_string() + " + " + h2.to_string() + "]"};
      for (const auto& x : n1.certificate.elements) c.elements.push_back(e1(x));
      for (const auto& x : n2.certificate.elements) c.elements.push_back(e2(x));
      best = {v, checked(std::move(c))};
    }
    if (best && best->first > node.value) {
      node.lower.push_back({best->first, "composition", best->second});
      offer(best->first, best->second);
      if (node.value >= U) {
        settle(U, "composition");
        return node;
      }
    }
  }
  return node;
}

}  // namespace detail

inline const detail::PmNode& PmCache::get(const AbelianGroup& g) {
  auto it = nodes_.find(g.moduli());
  if (it != nodes_.end()) return *it->second;
  auto node = std::make_unique<detail::PmNode>(detail::analyse_pm(g, *this));
  return *nodes_.emplace(g.moduli(), std::move(node)).first->second;
}

namespace detail {

inline void finish(BoundsReport& r) {
  if (r.exact()) {
    r.hi = r.lo;
    return;
  }
  r.lo = r.best_lower();
  r.hi = r.best_upper();
  if (r.lo >= r.hi) {
    r.status = Status::Exact;
    r.lo = r.hi;
    r.rule = "bounds-meet";
  }
}

// Weight set reduced by normalization: gcd 1, 0 not a weight.
inline BoundsReport reduced_report(const AbelianGroup& g, const WeightSet& a, PmCache& cache) {
  BoundsReport r;
  r.group = g;
  r.weights = to_spec(a);
  auto exp = g.exponent();
  auto U = ags_bounds(g).log2_upper;

  bool pm_like = a.residues().size() <= 2 && a.symmetric() && a.plus_minus_unit().has_value();
  bool full_like = a.is_full() && !(a.label() == WeightKind::PlusMinus && exp == 3);
  if (full_like) {
    auto v = static_cast<std::uint64_t>(g.rank_of(exp)) + 1;
    auto c = independent_full(g);
    c.weights = r.weights;
    r.lower.push_back({v, "independent", checked(c)});
    r.upper.push_back({v, "full-weights"});
    r.status = Status::Exact;
    r.lo = v;
    r.rule = "full-weights";
    return r;
  }
  if (pm_like) {
    // {u, -u} for a unit u: scaling by u^-1 gives plus-minus with the same sequences.
    const auto& node = cache.get(g);
    r.lower = node.lower;
    r.upper = node.upper;
    for (auto& l : r.lower)
      if (l.certificate) l.certificate->weights = r.weights;
    if (node.exact) {
      r.status = Status::Exact;
      r.lo = node.value;
      r.rule = node.rule;
    }
    return r;
  }
  if (a.residues().size() == 1 && std::gcd(a.residues().front(), exp) == 1) {
    // a single unit: the classical constant, D*(G) <= D(G) <= |G|
    std::uint64_t v = 1;
    Certificate c{g.moduli(), r.weights, {}, "zero-sum-free"};
    for (std::size_t j = 0; j < g.rank(); ++j) {
      v += g.moduli()[j] - 1;
      auto e = zero_element(g.moduli());
      e.coords[j] = 1;
      for (std::uint64_t t = 1; t < g.moduli()[j]; ++t) c.elements.push_back(e);
    }
    r.lower.push_back({v, "zero-sum-free", checked(std::move(c))});
    r.upper.push_back({g.order(), "order"});
    return r;
  }
  auto basis = independent_full(g);
  basis.weights = r.weights;
  basis.provenance = "independent";
  r.lower.push_back({static_cast<std::uint64_t>(g.rank_of(exp)) + 1, "independent", checked(basis)});
  if (a.plus_minus_unit())
    r.upper.push_back({U, "log2-order"});
  else
    r.upper.push_back({g.order(), "order"});
  return r;
}

// Carries a certificate over dG (presented canonically as `reduced`) back to G:
// an element s of dG is lifted to some x with d x = s, so that a' s = (a' d) x.
inline Certificate lift_certificate(const Certificate& c, const AbelianGroup& g, const AbelianGroup& reduced,
                                    std::uint64_t d, WeightSpec weights) {
  std::vector<std::uint64_t> pres;
  std::vector<std::size_t> coord;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    auto q = g.moduli()[i] / std::gcd(g.moduli()[i], d);
    if (q > 1) {
      pres.push_back(q);
      coord.push_back(i);
    }
  }
  Certificate out{g.moduli(), std::move(weights), {}, c.provenance};
  if (pres.empty()) return out;
  Embedding emb(pres, reduced);
  for (const auto& s : c.elements) {
    auto t = emb.preimage(s);
    auto x = zero_element(g.moduli());
    for (std::size_t k = 0; k < pres.size(); ++k) {
      auto n = g.moduli()[coord[k]];
      auto gi = std::gcd(n, d);
      auto q = pres[k];
      auto dprime = (d / gi) % q;
      x.coords[coord[k]] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t.coords[k]) *
                                                      mod_inverse(dprime, q)) % q);
    }
    out.elements.push_back(std::move(x));
  }
  return checked(std::move(out));
}

}  // namespace detail

// Best known bounds for D_A(G), with the exact value when some rule settles it.
inline BoundsReport exact_value(const AbelianGroup& g, const WeightSet& a, PmCache* shared = nullptr) {
  if (a.exponent() != g.exponent()) throw InvalidInput("weight set does not match group exponent");
  PmCache local;
  PmCache& cache = shared ? *shared : local;
  BoundsReport r;
  r.group = g;
  r.weights = to_spec(a);
  auto exact = [&](std::uint64_t v, std::string rule) {
    r.status = Status::Exact;
    r.lo = r.hi = v;
    r.rule = std::move(rule);
  };
  if (g.trivial()) {
    r.lower.push_back({1, "trivial-group", Certificate{{}, r.weights, {}, "empty"}});
    r.upper.push_back({1, "trivial-group"});
    exact(1, "trivial-group");
    return r;
  }
  if (a.contains_zero()) {
    r.lower.push_back({1, "zero-weight", Certificate{g.moduli(), r.weights, {}, "empty"}});
    r.upper.push_back({1, "zero-weight"});
    exact(1, "zero-weight");
    return r;
  }
  auto norm = normalize(a, g);
  if (!norm.reduced) {
    auto sub = detail::reduced_report(g, a, cache);
    detail::finish(sub);
    return sub;
  }
  auto inner = exact_value(norm.group, norm.weights, &cache);
  r.lower.clear();
  for (const auto& l : inner.lower) {
    LowerBound lb{l.value, l.method, std::nullopt};
    if (l.certificate) lb.certificate = detail::lift_certificate(*l.certificate, g, norm.group, norm.factor, r.weights);
    r.lower.push_back(std::move(lb));
  }
  r.upper = inner.upper;
  r.status = inner.status;
  r.lo = inner.lo;
  r.hi = inner.hi;
  r.rule = inner.rule;
  r.normalization = NormalizationInfo{norm.factor, norm.group, norm.weights.to_string()};
  return r;
}

struct EConstant {
  Status status = Status::Bracket;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

// E_A(G) = D_A(G) + |G| - 1.
inline EConstant e_constant(const AbelianGroup& g, const WeightSet& a) {
  auto r = exact_value(g, a);
  auto shift = g.order() - 1;
  return {r.status, r.lo + shift, r.hi + shift};
}

// ---- JSON ---------------------------------------------------------------

inline nlohmann::json bounds_report_to_json(const BoundsReport& r, bool with_certificates = true) {
  nlohmann::json j;
  j["group"] = r.group.moduli();
  j["group_name"] = r.group.to_string();
  j["weights"] = weights_to_json(r.weights);
  j["status"] = to_string(r.status);
  if (r.exact()) {
    j["value"] = r.lo;
    j["rule"] = r.rule;
  } else {
    j["lower"] = r.lo;
    j["upper"] = r.hi;
  }
  auto lows = nlohmann::json::array();
  for (const auto& l : r.lower) {
    nlohmann::json e{{"value", l.value}, {"method", l.method}};
    if (l.certificate && with_certificates) e["certificate"] = certificate_to_json(*l.certificate);
    lows.push_back(std::move(e));
  }
  j["lower_bounds"] = std::move(lows);
  auto ups = nlohmann::json::array();
  for (const auto& u : r.upper) ups.push_back({{"value", u.value}, {"method", u.method}});
  j["upper_bounds"] = std::move(ups);
  if (r.normalization)
    j["normalization"] = {{"factor", r.normalization->factor},
                          {"group", r.normalization->group.moduli()},
                          {"weights", r.normalization->weights}};
  return j;
}

}  // namespace davenport
