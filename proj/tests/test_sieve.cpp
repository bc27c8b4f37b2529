#include <gtest/gtest.h>

#include "sievelab/sieve.hpp"

using namespace sievelab;

namespace {

RingPtr Z() { return make_ring(RingSpec::integers()); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Sieve small_sieve() {
  auto z = Z();
  return Sieve::finite(z, "small",
                       {make_term(1, scalar_ideal(z, 4), {Element{0}}),
                        make_term(2, scalar_ideal(z, 9), {Element{1}, Element{5}}),
                        make_term(3, scalar_ideal(z, 25), {Element{7}}, {Element{7}})});
}

}  // namespace

TEST(Primes, NthPrimeAgainstTrialDivision) {
  std::size_t i = 0;
  for (std::uint64_t n = 2; n < 20000; ++n) {
    if (is_prime(n)) {
      ++i;
      ASSERT_EQ(nth_prime(i), n);
    }
  }
  EXPECT_EQ(nth_prime(168), 997u);
  EXPECT_EQ(nth_prime(100000), 1299709u);
}

TEST(Primes, PolyRootsAgainstBruteForce) {
  std::vector<Integer> f{1, 0, 1};  // x^2 + 1
  for (std::uint64_t m : {5u, 25u, 9u, 13u, 169u}) {
    std::vector<std::uint64_t> want;
    for (std::uint64_t x = 0; x < m; ++x) {
      if ((x * x + 1) % m == 0) want.push_back(x);
    }
    EXPECT_EQ(poly_roots_mod(f, m), want) << m;
  }
  try {
    poly_roots_mod(f, 20'000'000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ModulusTooLarge);
  }
}

TEST(SieveTerm, CanonicalResidues) {
  auto z = Z();
  auto t = make_term(1, scalar_ideal(z, 9), {Element{10}, Element{-8}, Element{4}});
  EXPECT_EQ(t.residues, (std::vector<Element>{Element{1}, Element{4}}));
  EXPECT_EQ(t.complement_count(), 7);
  EXPECT_TRUE(t.contains(Element{-5}));
  EXPECT_FALSE(t.contains(Element{2}));
}

TEST(Sieve, ValidateAndErrors) {
  auto rep = validate(small_sieve(), 10);
  EXPECT_EQ(rep.checked, 3u);
  EXPECT_NEAR(static_cast<double>(rep.erdos_partial_sum), 0.25 + 2.0 / 9 + 0.04, 1e-15);
  auto z = Z();
  Sieve bad = Sieve::finite(z, "bad", {make_term(1, scalar_ideal(z, 4), {Element{0}}),
                                       make_term(2, scalar_ideal(z, 6), {Element{0}})});
  try {
    validate(bad, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCoprime);
    EXPECT_EQ(e.index(), 1);
    EXPECT_EQ(e.index2(), 2);
  }
  std::vector<Element> all{Element{0}, Element{1}};
  Sieve improper = Sieve::finite(z, "improper", {make_term(1, scalar_ideal(z, 2), all)});
  try {
    validate(improper, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ImproperTerm);
  }
}

TEST(Sieve, MembershipAndLeastIndex) {
  Sieve s = small_sieve();
  EXPECT_EQ(is_sieved(s, 3, Element{8}), std::optional<std::size_t>(1));
  EXPECT_EQ(is_sieved(s, 3, Element{10}), std::optional<std::size_t>(2));
  EXPECT_EQ(is_sieved(s, 3, Element{57}), std::optional<std::size_t>(3));
  // The base point 7 of term 3 is protected.
  EXPECT_EQ(is_sieved(s, 3, Element{7}), std::nullopt);
  EXPECT_EQ(is_sieved(s, 1, Element{10}), std::nullopt);
}

TEST(Sieve, MarkingAgreesWithMembership) {
  Sieve s = small_sieve();
  Window w = Window::interval(s.ring_ptr(), -120, 400);
  for (std::size_t threads : {1u, 2u, 5u}) {
    auto mask = rfree_mask(s, w, 3, threads);
    w.for_each_index([&](std::size_t idx) {
      Element x = w.element_at(idx);
      EXPECT_EQ(mask[idx] != 0, !is_sieved(s, 3, x).has_value()) << x;
    });
  }
}

TEST(Sieve, LazyGeneratorAndWrappers) {
  auto z = Z();
  Sieve s(z, "squares", {}, [z](std::size_t i) {
    std::uint64_t p = nth_prime(i);
    return make_term(i, scalar_ideal(z, Integer(p * p)), {Element{0}});
  });
  EXPECT_FALSE(s.is_finite());
  EXPECT_EQ(s.available(1000), 1000u);
  EXPECT_EQ(s.term(3).ideal.norm(), 25);
  Sieve front = s.with_front_terms({make_term(1, scalar_ideal(z, 7), {Element{3}})});
  EXPECT_EQ(front.term(1).ideal.norm(), 7);
  EXPECT_EQ(front.term(2).ideal.norm(), 4);
  EXPECT_EQ(front.term(2).index, 2u);
  Sieve without = s.without_terms({2});
  EXPECT_EQ(without.term(1).ideal.norm(), 4);
  EXPECT_EQ(without.term(2).ideal.norm(), 25);
  Sieve perm = s.permuted({3, 1, 2});
  EXPECT_EQ(perm.term(1).ideal.norm(), 25);
  EXPECT_EQ(perm.term(4).ideal.norm(), 49);
  EXPECT_THROW(s.permuted({1, 1}), Error);
  Sieve fin = small_sieve();
  EXPECT_EQ(fin.available(10), 3u);
  EXPECT_THROW(fin.term(4), Error);
}

TEST(Sieve, RingMismatch) {
  Sieve s = small_sieve();
  auto g = make_ring(RingSpec::gaussian());
  try {
    rfree_mask(s, Window::ball(g, Real(3)), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RingMismatch);
  }
}

TEST(Sieve, GaussianMarkingOnBall) {
  auto g = make_ring(RingSpec::gaussian());
  auto I = ideal_from_generators(g, {Element{1, 1}});
  auto J = ideal_from_generators(g, {Element{3, 0}});
  Sieve s = Sieve::finite(g, "g", {make_term(1, ideal_product(I, I), {Element{0, 0}}),
                                   make_term(2, J, {Element{1, 0}, Element{0, 2}})});
  validate(s, 2);
  Window w = Window::shifted_ball(g, Element{5, -3}, Real(9));
  auto mask = rfree_mask(s, w, 2, 3);
  std::size_t inside = 0;
  for (std::size_t idx = 0; idx < w.box_volume(); ++idx) {
    if (!w.in_window_index(idx)) {
      EXPECT_EQ(mask[idx], 0);
      continue;
    }
    ++inside;
    Element x = w.element_at(idx);
    EXPECT_EQ(mask[idx] != 0, !is_sieved(s, 2, x).has_value());
  }
  EXPECT_EQ(inside, w.size());
}
