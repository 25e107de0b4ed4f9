#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "davenport/integer.hpp"

using namespace davenport;

namespace {

long double frac_log2(std::uint64_t x) {
  auto l = std::log2(static_cast<long double>(x));
  return l - std::floor(l);
}

}  // namespace

TEST(Integer, FloorLog2MatchesBitLength) {
  EXPECT_EQ(floor_log2(std::uint64_t{1}), 0);
  EXPECT_EQ(floor_log2(std::uint64_t{2}), 1);
  EXPECT_EQ(floor_log2(std::uint64_t{3}), 1);
  EXPECT_EQ(floor_log2(std::uint64_t{1024}), 10);
  EXPECT_EQ(floor_log2(std::uint64_t{1023}), 9);
  EXPECT_EQ(floor_log2(UINT64_MAX), 63);
  EXPECT_EQ(floor_log2(BigInt{1} << 200), 200);
  EXPECT_THROW(floor_log2(std::uint64_t{0}), InvalidInput);
  for (std::uint64_t x = 1; x < 5000; ++x) {
    int k = floor_log2(x);
    EXPECT_LE(std::uint64_t{1} << k, x);
    EXPECT_GT(std::uint64_t{1} << (k + 1), x);
  }
}

TEST(Integer, FloorLog2Third) {
  EXPECT_EQ(floor_log2_third(3), 0);
  EXPECT_EQ(floor_log2_third(5), 0);
  EXPECT_EQ(floor_log2_third(6), 1);
  EXPECT_EQ(floor_log2_third(11), 1);
  EXPECT_EQ(floor_log2_third(12), 2);
  EXPECT_THROW(floor_log2_third(2), InvalidInput);
  for (std::uint64_t m = 3; m < 3000; ++m) {
    int k = floor_log2_third(m);
    EXPECT_LE(3 * (std::uint64_t{1} << k), m);
    EXPECT_GT(3 * (std::uint64_t{1} << (k + 1)), m);
  }
}

TEST(Integer, FractionalComparisonsAgreeWithFloatingPointAwayFromTies) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(2, 1'000'000);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    auto a = dist(rng), b = dist(rng);
    auto fa = frac_log2(a), fb = frac_log2(b);
    if (std::fabs(fa - fb) < 1e-9L) continue;
    EXPECT_EQ(frac_log2_ge(a, b), fa >= fb) << a << " " << b;
    ++checked;
  }
  EXPECT_GT(checked, 19000);
}

TEST(Integer, FractionalTiesAreExact) {
  EXPECT_TRUE(frac_log2_ge(3, 6));
  EXPECT_TRUE(frac_log2_ge(6, 3));
  EXPECT_TRUE(frac_log2_ge(12, 3));
  EXPECT_TRUE(frac_log2_ge(8, 1));
  EXPECT_FALSE(frac_log2_ge(5, 3));
  EXPECT_TRUE(frac_log2_ge(7, 3));
}

TEST(Integer, FractionalSumBound) {
  std::vector<std::uint64_t> pair{3, 5};  // 0.585 + 0.322
  EXPECT_TRUE(frac_log2_sum_less(pair, 1));
  std::vector<std::uint64_t> pair2{3, 3};  // 1.17
  EXPECT_FALSE(frac_log2_sum_less(pair2, 1));
  EXPECT_TRUE(frac_log2_sum_less(pair2, 2));
  std::vector<std::uint64_t> powers{4, 8, 16};
  EXPECT_FALSE(frac_log2_sum_less(powers, 0));
  EXPECT_TRUE(frac_log2_sum_less(powers, 1));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> dist(2, 100000);
  for (int i = 0; i < 5000; ++i) {
    std::vector<std::uint64_t> v{dist(rng), dist(rng), dist(rng)};
    long double s = 0;
    for (auto x : v) s += frac_log2(x);
    for (int k = 0; k <= 3; ++k) {
      if (std::fabs(s - k) < 1e-9L) continue;
      EXPECT_EQ(frac_log2_sum_less(v, k), s < k);
    }
  }
}

TEST(Integer, FractionalRatio) {
  // {log2 7} = 0.807 < 1 = (1 + 1) / 2
  EXPECT_TRUE(frac_log2_less_ratio(7, 2, 2));
  // {log2 7} < 2/3 fails
  EXPECT_FALSE(frac_log2_less_ratio(7, 2, 3));
  // {log2 6} = 0.585 < 2/3
  EXPECT_TRUE(frac_log2_less_ratio(6, 2, 3));
  EXPECT_FALSE(frac_log2_less_ratio(8, 0, 3));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> dist(2, 5000);
  for (int i = 0; i < 3000; ++i) {
    auto n = dist(rng);
    int q = 1 + static_cast<int>(rng() % 9);
    int p = 1 + static_cast<int>(rng() % q);
    auto f = frac_log2(n);
    if (std::fabs(f - static_cast<long double>(p) / q) < 1e-9L) continue;
    EXPECT_EQ(frac_log2_less_ratio(n, p, q), f < static_cast<long double>(p) / q) << n << " " << p << "/" << q;
  }
}

TEST(Integer, FactorizeReconstructs) {
  for (std::uint64_t n = 1; n < 3000; ++n) {
    std::uint64_t prod = 1;
    std::uint64_t last = 0;
    for (const auto& pp : factorize(n)) {
      EXPECT_GT(pp.prime, last);
      last = pp.prime;
      prod *= pp.value();
    }
    EXPECT_EQ(prod, n);
  }
  auto f = factorize(759);
  ASSERT_EQ(f.size(), 3U);
  EXPECT_EQ(f[0].prime, 3U);
  EXPECT_EQ(f[1].prime, 11U);
  EXPECT_EQ(f[2].prime, 23U);
}

TEST(Integer, ModInverseAndCheckedMul) {
  for (std::uint64_t n = 2; n < 60; ++n)
    for (std::uint64_t a = 1; a < n; ++a)
      if (std::gcd(a, n) == 1) {
        EXPECT_EQ(a * mod_inverse(a, n) % n, 1 % n);
      }
  EXPECT_EQ(checked_mul(1ULL << 31, 1ULL << 31), 1ULL << 62);
  EXPECT_THROW(checked_mul(1ULL << 32, 1ULL << 32), LimitExceeded);
}
