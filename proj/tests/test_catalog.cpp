#include <gtest/gtest.h>

#include <numeric>

#include "sievelab/catalog.hpp"

using namespace sievelab;

namespace {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// x is k-free when no p^k with p among the first L primes divides it.
bool kfree_oracle(long long x, int k, std::size_t L) {
  if (x == 0) return false;
  std::size_t seen = 0;
  for (long long p = 2; seen < L; ++p) {
    if (!is_prime(p)) continue;
    ++seen;
    long long pk = 1;
    for (int j = 0; j < k; ++j) pk *= p;
    if (x % pk == 0) return false;
  }
  return true;
}

std::size_t count_free(const Sieve& s, std::size_t L, const Window& w) {
  return count_flags(rfree_mask(s, w, L));
}

}  // namespace

TEST(Catalog, SquarefreeAgainstTrialDivision) {
  Sieve s = catalog("kfree", {{"k", "2"}});
  Window w = Window::interval(s.ring_ptr(), -200, 3000);
  auto mask = rfree_mask(s, w, 30);
  w.for_each_index([&](std::size_t idx) {
    long long x = static_cast<long long>(w.element_at(idx).coords[0]);
    EXPECT_EQ(mask[idx] != 0, kfree_oracle(x, 2, 30)) << x;
  });
}

TEST(Catalog, SquarefreeCountOnMillion) {
  // Trial-division oracle over the full range, L = 168 primes.
  std::vector<std::uint8_t> sf(1000001, 1);
  for (long long p = 2; p <= 1000; ++p) {
    if (!is_prime(p)) continue;
    for (long long m = p * p; m <= 1000000; m += p * p) sf[m] = 0;
  }
  std::size_t want = 0;
  for (long long x = 1; x <= 1000000; ++x) want += sf[x];
  EXPECT_EQ(want, 607926u);
  Sieve s = catalog("squarefree");
  EXPECT_EQ(count_free(s, 168, Window::interval(s.ring_ptr(), 1, 1000000)), want);
}

TEST(Catalog, CubefreeAgainstTrialDivision) {
  Sieve s = catalog("kfree", {{"k", "3"}});
  Window w = Window::interval(s.ring_ptr(), 1, 5000);
  auto mask = rfree_mask(s, w, 20);
  w.for_each_index([&](std::size_t idx) {
    long long x = static_cast<long long>(w.element_at(idx).coords[0]);
    EXPECT_EQ(mask[idx] != 0, kfree_oracle(x, 3, 20)) << x;
  });
}

TEST(Catalog, VisiblePointsAgainstGcd) {
  Sieve s = catalog("visible_points", {{"dim", "2"}});
  const long long R = 60;
  Window w = Window::box(s.ring_ptr(), Element{-R, -R}, Element{R, R});
  // All primes up to R: gcd(a, b) > 1 has a prime factor <= R when (a,b) != 0.
  std::size_t L = 0;
  while (nth_prime(L + 1) <= static_cast<std::uint64_t>(R)) ++L;
  auto mask = rfree_mask(s, w, L);
  w.for_each_index([&](std::size_t idx) {
    auto p = w.point_at(idx);
    bool visible = std::gcd(p[0], p[1]) == 1;
    EXPECT_EQ(mask[idx] != 0, visible) << p[0] << "," << p[1];
  });
}

TEST(Catalog, GaussianInertMembership) {
  Sieve s = catalog("gaussian_inert");
  EXPECT_EQ(s.term(1).ideal.norm(), 9);
  EXPECT_EQ(s.term(2).ideal.norm(), 49);
  EXPECT_EQ(s.term(3).ideal.norm(), 121);
  // a + bi lies in R_p iff p | b.
  Window w = Window::ball(s.ring_ptr(), Real(15));
  auto mask = rfree_mask(s, w, 4);
  w.for_each_index([&](std::size_t idx) {
    auto p = w.point_at(idx);
    bool free = true;
    for (long long q : {3, 7, 11, 19}) free = free && p[1] % q != 0;
    EXPECT_EQ(mask[idx] != 0, free);
  });
}

TEST(Catalog, PolySquarefree) {
  Sieve s = catalog("poly_squarefree", {{"f", "1,0,1"}});
  // x^2 + 1 is never divisible by 4 or 9; 25 | x^2+1 iff x = 7, 18 mod 25.
  EXPECT_TRUE(s.term(1).residues.empty());
  EXPECT_TRUE(s.term(2).residues.empty());
  EXPECT_EQ(s.term(3).residues, (std::vector<Element>{Element{7}, Element{18}}));
  Window w = Window::interval(s.ring_ptr(), 0, 3000);
  auto mask = rfree_mask(s, w, 10);
  w.for_each_index([&](std::size_t idx) {
    long long x = static_cast<long long>(w.element_at(idx).coords[0]);
    EXPECT_EQ(mask[idx] != 0, kfree_oracle(x * x + 1, 2, 10)) << x;
  });
}

TEST(Catalog, NoDensitySet) {
  Sieve s = catalog("no_density");
  // S = union over k of (2^(2^(2k)), 2^(2^(2k+1))]: (2,4], (16,256], (65536, 2^32], ...
  auto in_s = [](std::uint64_t i) { return (i > 2 && i <= 4) || (i > 16 && i <= 256) || (i > 65536); };
  for (std::size_t i = 1; i <= 70000; i += (i < 300 ? 1 : 97)) {
    const auto& t = s.term(i);
    Integer want = in_s(i) ? Integer(i) : Integer(0);
    EXPECT_EQ(t.residues.front(), t.ideal.canonical_residue(Element(std::vector<Integer>{want}))) << i;
  }
}

TEST(Catalog, WeakNotStrongFamilies) {
  Sieve s = catalog("weak_not_strong");
  EXPECT_EQ(s.term(3).ideal.norm(), 25);
  EXPECT_EQ(s.term(3).residues.front(), Element{9});
  Sieve W = catalog("weak_not_strong_W");
  EXPECT_EQ(W.term(1).ideal.norm(), 4);
  EXPECT_EQ(W.term(1).residues.front(), Element{1});
  EXPECT_EQ(W.term(4).residues.front(), W.term(4).ideal.canonical_residue(Element{5}));
  EXPECT_EQ(W.term(5).residues.front(), W.term(5).ideal.canonical_residue(Element{-3}));
  Sieve Wp = catalog("weak_not_strong_Wprime");
  EXPECT_EQ(Wp.term(1).ideal.norm(), 9);
  EXPECT_EQ(Wp.term(3).residues, W.term(4).residues);
}

TEST(Catalog, ErdosShifted) {
  Sieve s = catalog("erdos_shifted", {{"b", "4,9,25"}, {"r", "1,2,3"}});
  ASSERT_TRUE(s.is_finite());
  EXPECT_EQ(is_sieved(s, 3, Element{1}), std::nullopt);
  EXPECT_EQ(is_sieved(s, 3, Element{5}), std::optional<std::size_t>(1));
  EXPECT_EQ(is_sieved(s, 3, Element{11}), std::optional<std::size_t>(2));
  Sieve g = catalog("erdos_shifted", {{"power", "2"}, {"shift_seed", "5"}});
  for (std::size_t i = 1; i <= 20; ++i) {
    const auto& t = g.term(i);
    ASSERT_EQ(t.protected_points.size(), 1u);
    EXPECT_EQ(t.ideal.canonical_residue(t.protected_points[0]), t.residues[0]);
  }
  EXPECT_THROW(catalog("erdos_shifted", {{"b", "4"}, {"r", "4"}}), Error);
}

TEST(Catalog, EveryEntryValidates) {
  for (const auto& e : catalog_entries()) {
    ParamRecord p;
    if (e.name == "poly_squarefree") p["f"] = "1,0,1";
    if (e.name == "erdos_shifted") p["power"] = "2";
    Sieve s = catalog(e.name, p);
    EXPECT_NO_THROW(validate(s, 50)) << e.name;
  }
}

TEST(Catalog, SelectorParsing) {
  auto [name, params] = parse_selector("poly_squarefree:f=1,0,1");
  EXPECT_EQ(name, "poly_squarefree");
  EXPECT_EQ(params.at("f"), "1,0,1");
  auto [n2, p2] = parse_selector("erdos_shifted:b=4,9,r=1,2");
  EXPECT_EQ(n2, "erdos_shifted");
  EXPECT_EQ(p2.at("b"), "4,9");
  EXPECT_EQ(p2.at("r"), "1,2");
  try {
    catalog_from_selector("nosuch");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownCatalogEntry);
  }
  try {
    catalog_from_selector("kfree:q=3");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
  }
}
