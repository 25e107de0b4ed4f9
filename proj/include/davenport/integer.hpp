#pragma once

// Exact integer helpers: bit lengths, factorization, and fractional-part
// comparisons of base-2 logarithms. No floating point.

#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "davenport/error.hpp"

namespace davenport {

using BigInt = boost::multiprecision::cpp_int;

inline int bit_length(std::uint64_t x) { return 64 - std::countl_zero(x); }

// floor(log2 x) for x >= 1.
inline int floor_log2(std::uint64_t x) {
  if (x == 0) throw InvalidInput("floor_log2 of zero");
  return bit_length(x) - 1;
}

inline int floor_log2(const BigInt& x) {
  if (x <= 0) throw InvalidInput("floor_log2 of non-positive value");
  return static_cast<int>(boost::multiprecision::msb(x));
}

// Largest k with 3 * 2^k <= m, i.e. floor(log2(m / 3)). Requires m >= 3.
inline int floor_log2_third(std::uint64_t m) {
  if (m < 3) throw InvalidInput("floor_log2_third requires m >= 3");
  return floor_log2(m / 3);
}

inline BigInt pow2(int e) { return BigInt{1} << e; }

// {log2 a} >= {log2 b}, decided as a * 2^floor(log2 b) >= b * 2^floor(log2 a).
inline bool frac_log2_ge(std::uint64_t a, std::uint64_t b) {
  return BigInt{a} * pow2(floor_log2(b)) >= BigInt{b} * pow2(floor_log2(a));
}

// sum_i {log2 m_i} < bound, decided as prod m_i < 2^(bound + sum floor(log2 m_i)).
inline bool frac_log2_sum_less(std::span<const std::uint64_t> values, int bound) {
  BigInt product = 1;
  int floors = 0;
  for (auto v : values) {
    product *= v;
    floors += floor_log2(v);
  }
  return product < pow2(bound + floors);
}

// {log2 n} < num / den, decided as n^den < 2^(num + den * floor(log2 n)).
inline bool frac_log2_less_ratio(std::uint64_t n, int num, int den) {
  if (den <= 0) throw InvalidInput("frac_log2_less_ratio: denominator must be positive");
  if (num <= 0) return false;
  BigInt power = boost::multiprecision::pow(BigInt{n}, static_cast<unsigned>(den));
  return power < pow2(num + den * floor_log2(n));
}

struct PrimePower {
  std::uint64_t prime = 0;
  int exponent = 0;

  [[nodiscard]] std::uint64_t value() const {
    std::uint64_t v = 1;
    for (int i = 0; i < exponent; ++i) v *= prime;
    return v;
  }

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Trial division; moduli here are desk-scale.
inline std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw InvalidInput("cannot factorize zero");
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw LimitExceeded("integer overflow: group order exceeds 64 bits");
  return r;
}

// Inverse of a modulo n; requires gcd(a, n) == 1.
inline std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t n) {
  if (n == 1) return 0;
  std::int64_t t = 0, new_t = 1;
  auto r = static_cast<std::int64_t>(n), new_r = static_cast<std::int64_t>(a % n);
  while (new_r != 0) {
    auto q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw InvalidInput("mod_inverse: value is not a unit");
  if (t < 0) t += static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(t);
}

}  // namespace davenport
