#pragma once

// Weight sets A, stored as residues modulo the group exponent.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "davenport/error.hpp"
#include "davenport/group.hpp"

namespace davenport {

enum class WeightKind { PlusMinus, Full, Custom };

inline std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::PlusMinus: return "pm";
    case WeightKind::Full: return "full";
    case WeightKind::Custom: return "set";
  }
  return "set";
}

// What the user asked for, before reduction against a particular group.
struct WeightSpec {
  WeightKind kind = WeightKind::PlusMinus;
  std::vector<std::int64_t> values;  // only for Custom

  static WeightSpec plus_minus() { return {WeightKind::PlusMinus, {}}; }
  static WeightSpec full() { return {WeightKind::Full, {}}; }
  static WeightSpec set(std::vector<std::int64_t> v) { return {WeightKind::Custom, std::move(v)}; }

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

class WeightSet {
 public:
  WeightSet(std::vector<std::uint64_t> residues, std::uint64_t exponent, WeightKind label)
      : residues_(std::move(residues)), exponent_(exponent), label_(label) {
    if (exponent_ == 0) throw InvalidInput("weight exponent must be positive");
    for (auto& r : residues_) r %= exponent_;
    std::ranges::sort(residues_);
    auto dup = std::ranges::unique(residues_);
    residues_.erase(dup.begin(), dup.end());
    if (residues_.empty()) throw InvalidInput("weight set must be nonempty");
  }

  [[nodiscard]] const std::vector<std::uint64_t>& residues() const { return residues_; }
  [[nodiscard]] std::uint64_t exponent() const { return exponent_; }
  [[nodiscard]] WeightKind label() const { return label_; }

  [[nodiscard]] bool contains(std::uint64_t r) const { return std::ranges::binary_search(residues_, r % exponent_); }
  [[nodiscard]] bool contains_zero() const { return contains(0); }

  [[nodiscard]] bool is_plus_minus() const {
    if (exponent_ == 1) return false;
    std::vector<std::uint64_t> pm{1 % exponent_, exponent_ - 1};
    std::ranges::sort(pm);
    pm.erase(std::unique(pm.begin(), pm.end()), pm.end());
    return residues_ == pm;
  }

  [[nodiscard]] bool is_full() const {
    if (exponent_ == 1 || residues_.size() != exponent_ - 1) return false;
    return residues_.front() == 1;
  }

  // Closed under negation modulo the exponent.
  [[nodiscard]] bool symmetric() const {
    return std::ranges::all_of(residues_, [&](auto r) { return contains((exponent_ - r) % exponent_); });
  }

  // Some unit u with both u and -u in A; then 0/1 subset sums of a dissociated
  // sequence are pairwise distinct.
  [[nodiscard]] std::optional<std::uint64_t> plus_minus_unit() const {
    for (auto r : residues_)
      if (std::gcd(r, exponent_) == 1 && contains((exponent_ - r) % exponent_)) return r;
    return std::nullopt;
  }

  // Signed representative in (-exp/2, exp/2].
  [[nodiscard]] std::int64_t centered(std::uint64_t r) const {
    auto e = static_cast<std::int64_t>(exponent_);
    auto v = static_cast<std::int64_t>(r % exponent_);
    return 2 * v > e ? v - e : v;
  }

  [[nodiscard]] std::string to_string() const {
    if (is_plus_minus() && label_ != WeightKind::Full) return "pm";
    if (is_full()) return "full";
    std::string s = "set:";
    for (std::size_t i = 0; i < residues_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(centered(residues_[i]));
    }
    return s;
  }

  friend bool operator==(const WeightSet& a, const WeightSet& b) {
    return a.exponent_ == b.exponent_ && a.residues_ == b.residues_;
  }

 private:
  std::vector<std::uint64_t> residues_;
  std::uint64_t exponent_;
  WeightKind label_;
};

inline WeightSet make_weightset(const WeightSpec& spec, std::uint64_t exponent) {
  if (exponent == 0) throw InvalidInput("exponent must be positive");
  if (spec.kind == WeightKind::Custom && spec.values.empty()) throw InvalidInput("explicit weight list is empty");
  if (exponent == 1) return WeightSet({0}, 1, spec.kind);
  std::vector<std::uint64_t> r;
  switch (spec.kind) {
    case WeightKind::PlusMinus:
      r = {1, exponent - 1};
      break;
    case WeightKind::Full:
      for (std::uint64_t a = 1; a < exponent; ++a) r.push_back(a);
      break;
    case WeightKind::Custom: {
      auto e = static_cast<std::int64_t>(exponent);
      for (auto v : spec.values) r.push_back(static_cast<std::uint64_t>(((v % e) + e) % e));
      break;
    }
  }
  return WeightSet(std::move(r), exponent, spec.kind);
}

inline WeightSet make_weightset(const WeightSpec& spec, const AbelianGroup& g) {
  return make_weightset(spec, g.exponent());
}

// "pm" | "full" | "set:1,-1,5"
inline WeightSpec parse_weights(std::string_view text) {
  if (text == "pm" || text == "plus-minus" || text == "+-") return WeightSpec::plus_minus();
  if (text == "full") return WeightSpec::full();
  if (text.starts_with("set:")) {
    text.remove_prefix(4);
    std::vector<std::int64_t> values;
    while (!text.empty()) {
      auto comma = text.find(',');
      auto tok = std::string(text.substr(0, comma));
      std::size_t used = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw InvalidInput("bad weight value '" + tok + "'");
      }
      if (used != tok.size()) throw InvalidInput("bad weight value '" + tok + "'");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    if (values.empty()) throw InvalidInput("explicit weight list is empty");
    return WeightSpec::set(std::move(values));
  }
  throw InvalidInput("unknown weights '" + std::string(text) + "' (expected pm | full | set:a,b,...)");
}

struct Normalized {
  WeightSet weights;
  AbelianGroup group;
  bool reduced = false;     // a common factor d > 1 was divided out
  bool degenerate = false;  // 0 is a weight, so every constant is 1
  std::uint64_t factor = 1;
};

// A spec that reproduces `a` exactly when reduced modulo a.exponent().
inline WeightSpec to_spec(const WeightSet& a) {
  if (a.exponent() > 1 && a.is_full() && a.label() == WeightKind::Full) return WeightSpec::full();
  if (a.is_plus_minus()) return WeightSpec::plus_minus();
  if (a.is_full()) return WeightSpec::full();
  std::vector<std::int64_t> v;
  for (auto r : a.residues()) v.push_back(a.centered(r));
  return WeightSpec::set(std::move(v));
}

inline WeightKind classify(const WeightSet& a) {
  if (a.is_plus_minus()) return WeightKind::PlusMinus;
  if (a.is_full()) return WeightKind::Full;
  return WeightKind::Custom;
}

// Dav_{dA'}(G) = Dav_{A'}(dG) with d = gcd(A, exp(G)).
inline Normalized normalize(const WeightSet& a, const AbelianGroup& g) {
  if (a.exponent() != g.exponent()) throw InvalidInput("weight set does not match group exponent");
  auto n = g.exponent();
  bool degenerate = a.contains_zero();
  std::uint64_t d = n;
  for (auto r : a.residues()) {
    auto c = a.centered(r);
    d = std::gcd(d, static_cast<std::uint64_t>(c < 0 ? -c : c));
  }
  if (d == 0) d = 1;
  if (d == 1) return {a, g, false, degenerate, 1};
  auto h = dilate(g, d);
  std::vector<std::uint64_t> res;
  auto m = static_cast<std::int64_t>(h.exponent());
  for (auto r : a.residues()) {
    auto c = a.centered(r) / static_cast<std::int64_t>(d);
    res.push_back(static_cast<std::uint64_t>(((c % m) + m) % m));
  }
  WeightSet out(std::move(res), h.exponent(), WeightKind::Custom);
  out = WeightSet(out.residues(), out.exponent(), classify(out));
  return {out, h, true, degenerate, d};
}

}  // namespace davenport
