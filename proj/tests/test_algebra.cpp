#include <gtest/gtest.h>

#include <cmath>

#include "sievelab/algebra.hpp"

using namespace sievelab;

namespace {

// |a + b sqrt(d)|^2 taken over both embeddings, computed in double.
double quad_sup_sq(long long d, long long a, long long b, bool omega) {
  double best = 0;
  for (int sign : {1, -1}) {
    double re = 0, im = 0;
    double s = std::sqrt(std::fabs(static_cast<double>(d)));
    if (omega) {
      // a + b (1 + sign sqrt d) / 2
      re = a + b * 0.5;
      (d > 0 ? re : im) += sign * b * 0.5 * s;
    } else {
      re = static_cast<double>(a);
      (d > 0 ? re : im) += sign * b * s;
    }
    best = std::max(best, re * re + im * im);
  }
  return best;
}

}  // namespace

TEST(Ring, GaussianMultiplication) {
  auto g = make_ring(RingSpec::gaussian());
  EXPECT_EQ(g->degree(), 2u);
  EXPECT_EQ(g->label(), "gaussian");
  EXPECT_EQ(mul(*g, Element{0, 1}, Element{0, 1}), (Element{-1, 0}));
  // (2 + 3i)(4 - i) = 11 + 10i
  EXPECT_EQ(mul(*g, Element{2, 3}, Element{4, -1}), (Element{11, 10}));
}

TEST(Ring, QuadraticOmegaBasis) {
  auto r = make_ring(RingSpec::quadratic(5));
  // omega^2 = omega + 1 for omega = (1 + sqrt 5)/2
  EXPECT_EQ(mul(*r, Element{0, 1}, Element{0, 1}), (Element{1, 1}));
  auto r13 = make_ring(RingSpec::quadratic(-3));
  // omega^2 = omega - 1 for omega = (1 + sqrt -3)/2
  EXPECT_EQ(mul(*r13, Element{0, 1}, Element{0, 1}), (Element{-1, 1}));
  auto r5 = make_ring(RingSpec::quadratic(-5));
  EXPECT_EQ(mul(*r5, Element{0, 1}, Element{0, 1}), (Element{-5, 0}));
}

TEST(Ring, MultiplicationAgreesWithEmbeddings) {
  for (long long d : {-1LL, -5LL, 2LL, 5LL, 13LL}) {
    auto r = make_ring(RingSpec::quadratic(d));
    Element x{3, -2}, y{-1, 4};
    Element xy = mul(*r, x, y);
    for (std::size_t k = 0; k < 2; ++k) {
      Complex a = embed(*r, k, x), b = embed(*r, k, y), c = embed(*r, k, xy);
      Real re = a.re * b.re - a.im * b.im, im = a.re * b.im + a.im * b.re;
      EXPECT_LT(abs(re - c.re), Real(1e-25));
      EXPECT_LT(abs(im - c.im), Real(1e-25));
    }
  }
}

TEST(Ring, SupNormMatchesClosedForm) {
  for (long long d : {-1LL, -5LL, 2LL, 5LL, -3LL}) {
    auto r = make_ring(RingSpec::quadratic(d));
    bool omega = ((d % 4) + 4) % 4 == 1;
    for (long long a = -4; a <= 4; ++a) {
      for (long long b = -4; b <= 4; ++b) {
        double want = quad_sup_sq(d, a, b, omega);
        double got = sup_norm_sq(*r, Element{a, b}).convert_to<double>();
        EXPECT_NEAR(got, want, 1e-9 * (1 + want)) << d << " " << a << " " << b;
      }
    }
  }
}

TEST(Ring, ProductIntegers) {
  auto r = make_ring(RingSpec::product_integers(3));
  EXPECT_EQ(r->label(), "product_integers(3)");
  EXPECT_EQ(mul(*r, Element{2, -3, 4}, Element{5, 6, -1}), (Element{10, -18, -4}));
  EXPECT_EQ(r->one(), (Element{1, 1, 1}));
  EXPECT_TRUE(r->coordinate_norm());
}

TEST(Ring, Errors) {
  EXPECT_THROW(make_ring(RingSpec::quadratic(1)), Error);
  try {
    make_ring(RingSpec::quadratic(12));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonSquarefreeDiscriminant);
  }
  try {
    make_ring(RingSpec::product_integers(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDegree);
  }
  auto g = make_ring(RingSpec::gaussian());
  try {
    mul(*g, Element{1}, Element{1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Ball, IntegersAndGaussianAgainstBruteForce) {
  auto z = make_ring(RingSpec::integers());
  EXPECT_EQ(ball_points(*z, Real(7)).size(), 15u);
  auto g = make_ring(RingSpec::gaussian());
  for (int N : {0, 1, 2, 5, 10}) {
    std::size_t want = 0;
    for (int a = -N; a <= N; ++a) {
      for (int b = -N; b <= N; ++b) want += a * a + b * b <= N * N;
    }
    EXPECT_EQ(ball_points(*g, Real(N)).size(), want) << N;
  }
}

TEST(Ball, RealQuadraticAgainstBruteForce) {
  auto r = make_ring(RingSpec::quadratic(5));
  for (int N : {1, 3, 6}) {
    std::size_t want = 0;
    for (long long a = -40; a <= 40; ++a) {
      for (long long b = -40; b <= 40; ++b) want += quad_sup_sq(5, a, b, true) <= N * N * (1 + 1e-9);
    }
    EXPECT_EQ(ball_points(*r, Real(N)).size(), want) << N;
  }
}

TEST(Ball, PointCap) {
  auto r = make_ring(RingSpec::product_integers(4));
  try {
    ball_points(*r, Real(100), 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowTooLarge);
  }
}
