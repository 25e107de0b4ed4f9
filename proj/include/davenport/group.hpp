#pragma once

// Finite abelian groups given by invariant factors n_1 | n_2 | ... | n_r, and
// mixed-radix arithmetic on their elements.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "davenport/error.hpp"
#include "davenport/integer.hpp"

namespace davenport {

using Moduli = std::span<const std::uint64_t>;

struct GroupElement {
  std::vector<std::uint64_t> coords;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

std::vector<std::uint64_t> canonical_moduli(std::span<const std::uint64_t> moduli);

class AbelianGroup {
 public:
  // Trivial group.
  AbelianGroup() = default;

  // Any list of positive moduli; canonicalized on entry.
  explicit AbelianGroup(std::span<const std::uint64_t> moduli) : moduli_(canonical_moduli(moduli)) {}
  AbelianGroup(std::initializer_list<std::uint64_t> moduli)
      : AbelianGroup(std::span<const std::uint64_t>(moduli.begin(), moduli.size())) {}

  [[nodiscard]] const std::vector<std::uint64_t>& moduli() const { return moduli_; }
  [[nodiscard]] std::size_t rank() const { return moduli_.size(); }
  [[nodiscard]] bool trivial() const { return moduli_.empty(); }
  [[nodiscard]] std::uint64_t exponent() const { return moduli_.empty() ? 1 : moduli_.back(); }

  [[nodiscard]] std::uint64_t order() const {
    std::uint64_t n = 1;
    for (auto m : moduli_) n = checked_mul(n, m);
    return n;
  }

  // rank_n(G) = |{i : n | n_i}|.
  [[nodiscard]] std::size_t rank_of(std::uint64_t n) const {
    if (n == 0) throw InvalidInput("rank_of(0) is undefined");
    return static_cast<std::size_t>(std::ranges::count_if(moduli_, [n](auto m) { return m % n == 0; }));
  }

  // The q_i with G = C_{q_1} + ... + C_{q_s}, sorted ascending.
  [[nodiscard]] std::vector<std::uint64_t> prime_powers() const {
    std::vector<std::uint64_t> out;
    for (auto m : moduli_)
      for (const auto& pp : factorize(m)) out.push_back(pp.value());
    std::ranges::sort(out);
    return out;
  }

  [[nodiscard]] std::size_t total_rank() const {
    std::size_t s = 0;
    for (auto m : moduli_) s += factorize(m).size();
    return s;
  }

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
  friend auto operator<=>(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  std::vector<std::uint64_t> moduli_;
};

struct GroupStats {
  std::uint64_t order = 1;
  std::uint64_t exponent = 1;
  std::size_t rank = 0;
  std::size_t total_rank = 0;
  std::vector<std::uint64_t> prime_powers;
};

inline GroupStats group_stats(const AbelianGroup& g) {
  return {g.order(), g.exponent(), g.rank(), g.total_rank(), g.prime_powers()};
}

// Merges the multiset of prime powers into a divisor chain: for each prime the
// k-th largest power multiplies into the k-th-from-last invariant factor.
inline std::vector<std::uint64_t> canonical_moduli(std::span<const std::uint64_t> moduli) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_prime;
  for (auto m : moduli) {
    if (m == 0) throw InvalidInput("moduli must be positive");
    for (const auto& pp : factorize(m)) by_prime[pp.prime].push_back(pp.value());
  }
  std::size_t r = 0;
  for (auto& [p, powers] : by_prime) {
    std::ranges::sort(powers, std::greater<>{});
    r = std::max(r, powers.size());
  }
  std::vector<std::uint64_t> out(r, 1);
  for (const auto& [p, powers] : by_prime)
    for (std::size_t k = 0; k < powers.size(); ++k) out[r - 1 - k] = checked_mul(out[r - 1 - k], powers[k]);
  return out;
}

inline AbelianGroup canonicalize(std::span<const std::uint64_t> moduli) { return AbelianGroup(moduli); }

// Isomorphism type of d*G.
inline AbelianGroup dilate(const AbelianGroup& g, std::uint64_t d) {
  if (d == 0) throw InvalidInput("dilation factor must be positive");
  std::vector<std::uint64_t> m;
  m.reserve(g.rank());
  for (auto n : g.moduli()) m.push_back(n / std::gcd(n, d));
  return AbelianGroup(m);
}

// ---- element arithmetic on any product of cyclic groups -------------------

inline std::uint64_t moduli_order(Moduli moduli) {
  std::uint64_t n = 1;
  for (auto m : moduli) n = checked_mul(n, m);
  return n;
}

inline void check_element(Moduli moduli, const GroupElement& a) {
  if (a.coords.size() != moduli.size()) throw InvalidInput("element has wrong number of coordinates");
  for (std::size_t i = 0; i < moduli.size(); ++i)
    if (a.coords[i] >= moduli[i]) throw InvalidInput("element coordinate out of range");
}

inline GroupElement zero_element(Moduli moduli) { return {std::vector<std::uint64_t>(moduli.size(), 0)}; }

inline GroupElement add(Moduli moduli, const GroupElement& a, const GroupElement& b) {
  GroupElement r{std::vector<std::uint64_t>(moduli.size())};
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    auto s = a.coords[i] + b.coords[i];
    r.coords[i] = s >= moduli[i] ? s - moduli[i] : s;
  }
  return r;
}

inline GroupElement negate(Moduli moduli, const GroupElement& a) {
  GroupElement r{std::vector<std::uint64_t>(moduli.size())};
  for (std::size_t i = 0; i < moduli.size(); ++i) r.coords[i] = a.coords[i] == 0 ? 0 : moduli[i] - a.coords[i];
  return r;
}

// k * a for any integer k (negative allowed).
inline GroupElement scale(Moduli moduli, std::int64_t k, const GroupElement& a) {
  GroupElement r{std::vector<std::uint64_t>(moduli.size())};
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    auto n = static_cast<__int128>(moduli[i]);
    auto v = (static_cast<__int128>(k) * a.coords[i]) % n;
    if (v < 0) v += n;
    r.coords[i] = static_cast<std::uint64_t>(v);
  }
  return r;
}

// Mixed-radix rank, coords[0] most significant.
inline std::uint64_t index(Moduli moduli, const GroupElement& a) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) idx = idx * moduli[i] + a.coords[i];
  return idx;
}

inline GroupElement element_at(Moduli moduli, std::uint64_t i) {
  if (i >= moduli_order(moduli)) throw InvalidInput("element index out of range");
  GroupElement r{std::vector<std::uint64_t>(moduli.size())};
  for (std::size_t k = moduli.size(); k-- > 0;) {
    r.coords[k] = i % moduli[k];
    i /= moduli[k];
  }
  return r;
}

inline std::uint64_t element_order(Moduli moduli, const GroupElement& a) {
  std::uint64_t ord = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    auto o = moduli[i] / std::gcd(moduli[i], a.coords[i]);
    ord = std::lcm(ord, o);
  }
  return ord;
}

inline GroupElement add(const AbelianGroup& g, const GroupElement& a, const GroupElement& b) { return add(Moduli(g.moduli()), a, b); }
inline GroupElement negate(const AbelianGroup& g, const GroupElement& a) { return negate(Moduli(g.moduli()), a); }
inline GroupElement scale(const AbelianGroup& g, std::int64_t k, const GroupElement& a) { return scale(Moduli(g.moduli()), k, a); }
inline std::uint64_t index(const AbelianGroup& g, const GroupElement& a) { return index(Moduli(g.moduli()), a); }
inline GroupElement element_at(const AbelianGroup& g, std::uint64_t i) { return element_at(Moduli(g.moduli()), i); }

// ---- enumeration ---------------------------------------------------------

namespace detail {

inline void partitions_into(int n, int max_part, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions_into(n - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace detail

// Partitions of n as non-increasing part lists.
inline std::vector<std::vector<int>> integer_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  detail::partitions_into(n, n, current, out);
  return out;
}

// One representative per isomorphism class of order n, sorted
// lexicographically by moduli.
inline std::vector<AbelianGroup> groups_of_order(std::uint64_t n) {
  if (n < 1) throw InvalidInput("order must be at least 1");
  auto fac = factorize(n);
  std::vector<std::vector<std::vector<int>>> choices;
  for (const auto& pp : fac) choices.push_back(integer_partitions(pp.exponent));
  std::vector<AbelianGroup> out;
  std::vector<std::size_t> pick(fac.size(), 0);
  while (true) {
    std::vector<std::uint64_t> powers;
    for (std::size_t i = 0; i < fac.size(); ++i)
      for (int e : choices[i][pick[i]]) powers.push_back(PrimePower{fac[i].prime, e}.value());
    out.emplace_back(powers);
    std::size_t i = 0;
    for (; i < fac.size(); ++i) {
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == fac.size()) break;
  }
  std::ranges::sort(out);
  return out;
}

// Every order <= max_order, ascending.
inline std::vector<AbelianGroup> enumerate_groups(std::uint64_t max_order) {
  if (max_order < 1) throw InvalidInput("max_order must be at least 1");
  std::vector<AbelianGroup> out;
  for (std::uint64_t n = 1; n <= max_order; ++n) {
    auto of_order = groups_of_order(n);
    out.insert(out.end(), of_order.begin(), of_order.end());
  }
  return out;
}

// ---- text syntax ---------------------------------------------------------

inline std::string AbelianGroup::to_string() const {
  if (moduli_.empty()) return "C1";
  std::string s;
  for (std::size_t i = 0; i < moduli_.size();) {
    std::size_t j = i;
    while (j < moduli_.size() && moduli_[j] == moduli_[i]) ++j;
    if (!s.empty()) s += "*";
    s += "C" + std::to_string(moduli_[i]);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

namespace detail {

inline std::uint64_t parse_positive(std::string_view s, std::string_view whole) {
  if (s.empty()) throw InvalidInput("bad group syntax: '" + std::string(whole) + "'");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw InvalidInput("bad group syntax: '" + std::string(whole) + "'");
    if (v > (UINT64_MAX - 9) / 10) throw InvalidInput("modulus too large in '" + std::string(whole) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (v == 0) throw InvalidInput("moduli must be positive in '" + std::string(whole) + "'");
  return v;
}

}  // namespace detail

// Accepts "C3*C3*C9", "C3^2*C9", "[3,3,9]" or "3,3,9"; canonicalizes.
inline AbelianGroup parse_group(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw InvalidInput("empty group description");
  std::vector<std::uint64_t> moduli;
  if (s.front() == '[') {
    if (s.back() != ']') throw InvalidInput("bad group syntax: '" + std::string(text) + "'");
    std::string_view body(s.data() + 1, s.size() - 2);
    while (!body.empty()) {
      auto comma = body.find(',');
      moduli.push_back(detail::parse_positive(body.substr(0, comma), text));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
      if (body.empty()) throw InvalidInput("bad group syntax: '" + std::string(text) + "'");
    }
  } else if (s.front() == 'C' || s.front() == 'c') {
    std::string_view rest(s);
    while (!rest.empty()) {
      auto star = rest.find('*');
      auto factor = rest.substr(0, star);
      if (factor.size() < 2 || (factor.front() != 'C' && factor.front() != 'c'))
        throw InvalidInput("bad group syntax: '" + std::string(text) + "'");
      factor.remove_prefix(1);
      std::uint64_t count = 1;
      if (auto caret = factor.find('^'); caret != std::string_view::npos) {
        count = detail::parse_positive(factor.substr(caret + 1), text);
        factor = factor.substr(0, caret);
      }
      auto m = detail::parse_positive(factor, text);
      if (count > 64) throw LimitExceeded("repeat count too large in '" + std::string(text) + "'");
      for (std::uint64_t k = 0; k < count; ++k) moduli.push_back(m);
      if (star == std::string_view::npos) break;
      rest.remove_prefix(star + 1);
      if (rest.empty()) throw InvalidInput("bad group syntax: '" + std::string(text) + "'");
    }
  } else {
    std::string_view body(s);
    while (true) {
      auto comma = body.find(',');
      moduli.push_back(detail::parse_positive(body.substr(0, comma), text));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  }
  return AbelianGroup(moduli);
}

}  // namespace davenport
