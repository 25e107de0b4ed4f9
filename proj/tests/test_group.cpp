#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "davenport/group.hpp"

using namespace davenport;

using V = std::vector<std::uint64_t>;

TEST(Group, CanonicalizeExamples) {
  EXPECT_EQ(canonicalize(V{6, 10}).moduli(), (V{2, 30}));
  EXPECT_EQ(canonicalize(V{15, 5}).moduli(), (V{5, 15}));
  EXPECT_EQ(canonicalize(V{1, 7}).moduli(), (V{7}));
  EXPECT_EQ(canonicalize(V{3, 759}).moduli(), (V{3, 759}));
  EXPECT_TRUE(canonicalize(V{1, 1}).trivial());
  EXPECT_TRUE(canonicalize(V{}).trivial());
  EXPECT_THROW(canonicalize(V{0, 3}), InvalidInput);
}

TEST(Group, CanonicalizeIsIdempotentAndIsomorphismInvariant) {
  std::mt19937_64 rng(3);
  const std::vector<std::uint64_t> primes{2, 3, 5, 7};
  for (int trial = 0; trial < 500; ++trial) {
    // random prime-power multiset, regrouped two different ways
    V powers;
    int count = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < count; ++i) {
      auto p = primes[rng() % primes.size()];
      auto e = 1 + rng() % 3;
      std::uint64_t q = 1;
      for (std::uint64_t k = 0; k < e; ++k) q *= p;
      powers.push_back(q);
    }
    auto g = canonicalize(powers);
    EXPECT_EQ(canonicalize(g.moduli()), g);
    auto shuffled = powers;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    // merge coprime neighbours where possible
    V merged;
    for (auto q : shuffled) {
      if (!merged.empty() && std::gcd(merged.back(), q) == 1 && rng() % 2)
        merged.back() *= q;
      else
        merged.push_back(q);
    }
    EXPECT_EQ(canonicalize(merged), g);
    for (std::size_t i = 0; i + 1 < g.rank(); ++i) EXPECT_EQ(g.moduli()[i + 1] % g.moduli()[i], 0U);
    std::uint64_t order = 1;
    for (auto q : powers) order *= q;
    EXPECT_EQ(g.order(), order);
  }
}

TEST(Group, Stats) {
  AbelianGroup g{3, 9};
  auto s = group_stats(g);
  EXPECT_EQ(s.order, 27U);
  EXPECT_EQ(s.exponent, 9U);
  EXPECT_EQ(s.rank, 2U);
  EXPECT_EQ(g.rank_of(3), 2U);
  EXPECT_EQ(g.rank_of(9), 1U);
  EXPECT_EQ(s.total_rank, 2U);
  EXPECT_EQ(s.prime_powers, (V{3, 9}));

  AbelianGroup h{897, 897};
  EXPECT_EQ(h.prime_powers(), (V{3, 3, 13, 13, 23, 23}));
  EXPECT_EQ(h.total_rank(), 6U);

  AbelianGroup t;
  EXPECT_EQ(t.order(), 1U);
  EXPECT_EQ(t.exponent(), 1U);
  EXPECT_EQ(t.rank(), 0U);
  EXPECT_EQ(t.to_string(), "C1");
}

TEST(Group, ElementOps) {
  V m{6, 3};
  EXPECT_EQ(add(Moduli(m), {{5, 1}}, {{1, 1}}).coords, (V{0, 2}));
  V c9{9};
  EXPECT_EQ(scale(Moduli(c9), 2, {{4}}).coords, (V{8}));
  EXPECT_EQ(scale(Moduli(c9), -1, {{4}}).coords, (V{5}));
  EXPECT_EQ(index(Moduli(m), {{1, 2}}), 5U);
  EXPECT_EQ(element_at(Moduli(m), 5).coords, (V{1, 2}));
  EXPECT_EQ(negate(Moduli(m), {{1, 2}}).coords, (V{5, 1}));
  EXPECT_THROW(element_at(Moduli(m), 18), InvalidInput);
  EXPECT_THROW(check_element(Moduli(m), {{6, 0}}), InvalidInput);
  EXPECT_THROW(check_element(Moduli(m), {{1}}), InvalidInput);
}

TEST(Group, IndexIsABijection) {
  for (const auto& g : enumerate_groups(64)) {
    for (std::uint64_t i = 0; i < g.order(); ++i) {
      auto e = element_at(g, i);
      EXPECT_EQ(index(g, e), i);
    }
  }
}

TEST(Group, DilateExamples) {
  EXPECT_EQ(dilate(AbelianGroup{4, 8}, 2), (AbelianGroup{2, 4}));
  EXPECT_EQ(dilate(AbelianGroup{9}, 3), (AbelianGroup{3}));
  EXPECT_EQ(dilate(AbelianGroup{5, 15}, 3), (AbelianGroup{5, 5}));
  EXPECT_EQ(dilate(AbelianGroup{5, 15}, 1), (AbelianGroup{5, 15}));
}

TEST(Group, DilationTimesKernelIsOrder) {
  for (const auto& g : enumerate_groups(200)) {
    for (std::uint64_t d = 1; d <= 12; ++d) {
      std::uint64_t kernel = 0;
      for (std::uint64_t i = 0; i < g.order(); ++i)
        if (index(g, scale(g, static_cast<std::int64_t>(d), element_at(g, i))) == 0) ++kernel;
      EXPECT_EQ(dilate(g, d).order() * kernel, g.order()) << g.to_string() << " d=" << d;
    }
  }
}

TEST(Group, EnumerateSmallOrders) {
  auto groups = enumerate_groups(8);
  std::set<V> order8;
  for (const auto& g : groups)
    if (g.order() == 8) order8.insert(g.moduli());
  EXPECT_EQ(order8, (std::set<V>{{8}, {2, 4}, {2, 2, 2}}));
  auto sixteen = std::ranges::count_if(enumerate_groups(16), [](const auto& g) { return g.order() == 16; });
  EXPECT_EQ(sixteen, 5);
  EXPECT_EQ(groups.front(), AbelianGroup{});
  EXPECT_THROW(enumerate_groups(0), InvalidInput);
}

TEST(Group, EnumerationIsSortedAndDistinct) {
  auto groups = enumerate_groups(300);
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    auto a = groups[i], b = groups[i + 1];
    ASSERT_TRUE(a.order() < b.order() || (a.order() == b.order() && a.moduli() < b.moduli()))
        << a.to_string() << " " << b.to_string();
  }
}

namespace {

// number of partitions of k, by the standard coin-change recurrence
std::uint64_t partition_count(int k) {
  std::vector<std::uint64_t> p(k + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= k; ++part)
    for (int s = part; s <= k; ++s) p[s] += p[s - part];
  return p[k];
}

std::uint64_t classes_of_order(std::uint64_t n) {
  std::uint64_t total = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) total *= partition_count(e);
  }
  return total;
}

// divisor chains n_1 | n_2 | ... with n_1 >= 2 and product n
void chains(std::uint64_t remaining, std::uint64_t prev, V& cur, std::set<V>& out) {
  if (remaining == 1) {
    out.insert(cur);
    return;
  }
  for (std::uint64_t m = prev; m <= remaining; m += prev) {
    if (m < 2 || remaining % m != 0) continue;
    // every later factor is a multiple of m, so m^k | remaining for the rest
    cur.push_back(m);
    chains(remaining / m, m, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST(Group, EnumerationCountMatchesIndependentOracles) {
  auto groups = enumerate_groups(100);
  std::uint64_t expected = 0;
  std::set<V> direct;
  for (std::uint64_t n = 1; n <= 100; ++n) {
    expected += classes_of_order(n);
    V cur;
    std::set<V> found;
    chains(n, 1, cur, found);
    // chains are built smallest factor first, which is the canonical order
    for (auto c : found) {
      bool valid = true;
      std::uint64_t prod = 1;
      for (std::size_t i = 0; i < c.size(); ++i) {
        prod *= c[i];
        if (i && c[i] % c[i - 1] != 0) valid = false;
      }
      if (valid && prod == n) direct.insert(c);
    }
  }
  EXPECT_EQ(groups.size(), expected);
  EXPECT_EQ(groups.size(), direct.size());
  std::set<V> produced;
  for (const auto& g : groups) produced.insert(g.moduli());
  EXPECT_EQ(produced, direct);
  EXPECT_EQ(groups.size(), 185U);
}

TEST(Group, ParseSyntax) {
  EXPECT_EQ(parse_group("C3*C3*C9"), (AbelianGroup{3, 3, 9}));
  EXPECT_EQ(parse_group("C3^2*C9"), (AbelianGroup{3, 3, 9}));
  EXPECT_EQ(parse_group("[9,3,3]"), (AbelianGroup{3, 3, 9}));
  EXPECT_EQ(parse_group("3, 3, 9"), (AbelianGroup{3, 3, 9}));
  EXPECT_EQ(parse_group("C6*C10"), (AbelianGroup{2, 30}));
  EXPECT_TRUE(parse_group("C1").trivial());
  EXPECT_THROW(parse_group(""), InvalidInput);
  EXPECT_THROW(parse_group("C0"), InvalidInput);
  EXPECT_THROW(parse_group("[3,,9]"), InvalidInput);
  EXPECT_THROW(parse_group("Z3"), InvalidInput);
  EXPECT_THROW(parse_group("C3*"), InvalidInput);
  EXPECT_THROW(parse_group("[3,x]"), InvalidInput);
  EXPECT_EQ(parse_group(AbelianGroup{4, 8, 8}.to_string()), (AbelianGroup{4, 8, 8}));
}
