#include <gtest/gtest.h>

#include <cmath>

#include "sievelab/catalog.hpp"
#include "sievelab/density.hpp"

using namespace sievelab;

namespace {

RingPtr Z() { return make_ring(RingSpec::integers()); }

// Membership in the no-density sieve at truncation L for 1 <= x, by direct
// congruence checks.
bool no_density_free(std::uint64_t x, std::size_t L) {
  for (std::size_t i = 1; i <= L; ++i) {
    unsigned __int128 p = nth_prime(i);
    unsigned __int128 m = p * p * p * p;
    unsigned __int128 r = detail::in_no_density_set(i) ? i : 0;
    if ((static_cast<unsigned __int128>(x) % m) == r % m) return false;
  }
  return true;
}

}  // namespace

TEST(Folner, ScheduleValidation) {
  auto z = Z();
  EXPECT_THROW(make_folner(z, FolnerKind::Interval, {}), Error);
  try {
    make_folner(z, FolnerKind::Interval, {10, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSchedule);
  }
  auto ws = make_folner(z, FolnerKind::Interval, {10, 100, 1000});
  ASSERT_EQ(ws.size(), 3u);
  EXPECT_EQ(ws[2].size(), 1000u);
  auto g = make_ring(RingSpec::gaussian());
  auto balls = make_folner(g, FolnerKind::ShiftedBall, {3, 5}, {Element{100, 0}, Element{0, -100}});
  EXPECT_TRUE(balls[1].contains(Element{0, -95}));
}

TEST(Density, PredicateAndMask) {
  auto z = Z();
  auto ws = make_folner(z, FolnerKind::Interval, {10, 1000});
  auto rep = empirical_density(Predicate([](const Element& x) { return x.coords[0] % 2 == 0; }), ws, 0.5);
  EXPECT_DOUBLE_EQ(rep.rows[1].ratio, 0.5);
  EXPECT_EQ(rep.rows[0].count, 5u);
  std::string csv = rep.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "window_id,size,count,ratio,theoretical,abs_error");
  auto j = rep.to_json();
  EXPECT_EQ(j["rows"][1]["abs_error"].get<double>(), 0.0);
}

TEST(Density, UpperLowerOverLastHalf) {
  auto z = Z();
  auto ws = make_folner(z, FolnerKind::Interval, {1, 2, 3, 4});
  // Members: {1, 3}; ratios 1, 1/2, 2/3, 1/2.
  auto rep = empirical_density(Predicate([](const Element& x) { return x.coords[0] % 2 == 1; }), ws);
  EXPECT_DOUBLE_EQ(rep.upper, 2.0 / 3);
  EXPECT_DOUBLE_EQ(rep.lower, 0.5);
}

TEST(Density, PartialProduct) {
  Sieve s = catalog("squarefree");
  auto p = partial_density_product(s, 2);
  EXPECT_NEAR(static_cast<double>(p.value), 2.0 / 3.0, 1e-18);
  EXPECT_EQ(p.terms, 2u);
  long double direct = 1;
  for (std::size_t i = 1; i <= 1500; ++i) {
    long double q = nth_prime(i);
    direct *= 1 - 1 / (q * q);
  }
  EXPECT_NEAR(static_cast<double>(partial_density_product(s, 1500).value), static_cast<double>(direct), 1e-15);
}

TEST(Density, SquarefreeNearSixOverPiSquared) {
  Sieve s = catalog("squarefree");
  auto ws = make_folner(s.ring_ptr(), FolnerKind::Interval, {100000});
  auto rep = empirical_density(rfree_members(s, 100), ws);
  EXPECT_NEAR(rep.last_ratio(), 6 / (M_PI * M_PI), 2e-3);
}

TEST(Density, CompensatedSum) {
  CompensatedSum s;
  for (int i = 0; i < 1000000; ++i) s.add(0.1L);
  EXPECT_NEAR(static_cast<double>(s.value()), 100000.0, 1e-9);
}

TEST(LogDensity, ReciprocalSumOracle) {
  Sieve s = catalog("no_density");
  for (std::size_t N : {256u, 4096u}) {
    long double sum = 0;
    for (std::uint64_t x = 1; x <= N; ++x) {
      if (no_density_free(x, N)) sum += 1.0L / x;
    }
    double want = static_cast<double>(sum / std::log(static_cast<long double>(N)));
    EXPECT_NEAR(log_density(s, N, N), want, 1e-12) << N;
  }
}

TEST(LogDensity, PredicateAndErrors) {
  auto z = Z();
  double all = log_density(*z, [](const Element&) { return true; }, 1000);
  double h = 0;
  for (int m = 1; m <= 1000; ++m) h += 1.0 / m;
  EXPECT_NEAR(all, h / std::log(1000.0), 1e-12);
  auto g = make_ring(RingSpec::gaussian());
  try {
    log_density(*g, [](const Element&) { return true; }, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongRing);
  }
}

TEST(Tails, AgainstDirectUnion) {
  Sieve s = catalog("weak_not_strong");
  auto z = s.ring_ptr();
  const long long lo = 0, hi = 3000;
  Window w = Window::interval(z, lo, hi);
  for (std::size_t L : {2u, 5u, 12u}) {
    const std::size_t Lmax = 300;
    std::size_t strong = 0, weak = 0;
    for (long long x = lo; x <= hi; ++x) {
      bool head = false, tail = false;
      for (std::size_t i = 1; i <= Lmax; ++i) {
        long long p = static_cast<long long>(nth_prime(i));
        long long r = 1 + 4 * (static_cast<long long>(i) - 1);
        bool in = ((x - r) % (p * p) + p * p) % (p * p) == 0;
        (i <= L ? head : tail) |= in;
      }
      strong += tail;
      weak += tail && !head;
    }
    double n = static_cast<double>(hi - lo + 1);
    EXPECT_DOUBLE_EQ(strong_tail_statistic(s, L, Lmax, w).value, strong / n);
    EXPECT_DOUBLE_EQ(weak_tail_statistic(s, L, Lmax, w).value, weak / n);
  }
}

TEST(Tails, Errors) {
  Sieve s = catalog("squarefree");
  EXPECT_THROW(weak_tail_statistic(s, 10, 5, Window::interval(s.ring_ptr(), 0, 10)), Error);
}
