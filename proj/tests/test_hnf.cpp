#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "sievelab/hnf.hpp"

using namespace sievelab;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t k, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix m = zero_matrix(n, k);
  for (auto& row : m) {
    for (auto& v : row) v = d(rng);
  }
  return m;
}

bool is_hnf(const IntMatrix& h) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i][i] <= 0) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (h[i][j] != 0) return false;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (h[i][j] < 0 || h[i][j] >= h[i][i]) return false;
    }
  }
  return true;
}

// Lattice index of a rank-2 lattice: gcd of all 2x2 minors.
long long minor_gcd(const IntMatrix& m) {
  long long g = 0;
  for (std::size_t a = 0; a < cols(m); ++a) {
    for (std::size_t b = a + 1; b < cols(m); ++b) {
      Integer det = m[0][a] * m[1][b] - m[0][b] * m[1][a];
      g = std::gcd(g, static_cast<long long>(det));
    }
  }
  return g;
}

}  // namespace

TEST(Hnf, SmallExample) {
  IntMatrix m{{4, 6}, {0, 3}};
  IntMatrix h = hnf(m);
  EXPECT_TRUE(is_hnf(h));
  EXPECT_EQ(determinant_lower(h), 12);
}

TEST(Hnf, RandomRankTwoAgainstMinors) {
  std::mt19937_64 rng(1);
  int checked = 0;
  while (checked < 300) {
    IntMatrix m = random_matrix(rng, 2, 2 + rng() % 3, 12);
    long long idx = minor_gcd(m);
    if (idx == 0) continue;
    IntMatrix h = hnf(m);
    ASSERT_TRUE(is_hnf(h));
    EXPECT_EQ(determinant_lower(h), idx);
    // Every generator lies in the HNF lattice and vice versa.
    for (std::size_t c = 0; c < cols(m); ++c) {
      EXPECT_TRUE(solve_lower(h, {m[0][c], m[1][c]}).has_value());
    }
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_TRUE(solve_integer(m, {h[0][c], h[1][c]}).has_value());
    }
    ++checked;
  }
}

TEST(Hnf, TransformIsConsistent) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    IntMatrix m = random_matrix(rng, 3, 5, 9);
    HnfResult r;
    try {
      r = hnf_with_transform(m);
    } catch (const Error&) {
      continue;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        Integer s = 0;
        for (std::size_t k = 0; k < 5; ++k) s += m[i][k] * r.u[k][j];
        EXPECT_EQ(s, r.h[i][j]);
      }
    }
  }
}

TEST(Hnf, CanonicalUnderUnimodularChange) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    IntMatrix m = random_matrix(rng, 3, 3, 8);
    IntMatrix h;
    try {
      h = hnf(m);
    } catch (const Error&) {
      continue;
    }
    IntMatrix m2 = m;
    for (int step = 0; step < 6; ++step) {
      std::size_t a = rng() % 3, b = rng() % 3;
      if (a == b) continue;
      Integer q = static_cast<long long>(rng() % 5) - 2;
      for (std::size_t i = 0; i < 3; ++i) m2[i][a] += q * m2[i][b];
    }
    EXPECT_EQ(hnf(m2), h);
  }
}

TEST(Hnf, RankDeficient) {
  try {
    hnf(IntMatrix{{1, 2}, {2, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficient);
  }
  EXPECT_THROW(hnf(IntMatrix{{1}, {0}}), Error);
}

TEST(Hnf, SolveInteger) {
  IntMatrix m{{4, 9}};
  auto y = solve_integer(m, {1});
  ASSERT_TRUE(y);
  EXPECT_EQ(4 * (*y)[0] + 9 * (*y)[1], 1);
  EXPECT_FALSE(solve_integer(IntMatrix{{4, 6}}, {1}).has_value());
}
