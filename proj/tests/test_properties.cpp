#include <gtest/gtest.h>

#include <random>

#include "sievelab/acceptance.hpp"
#include "sievelab/catalog.hpp"
#include "sievelab/mirsky.hpp"

using namespace sievelab;

namespace {

Element random_element(std::mt19937_64& rng, std::size_t n, long long bound) {
  std::uniform_int_distribution<long long> d(-bound, bound);
  std::vector<Integer> c;
  for (std::size_t k = 0; k < n; ++k) c.push_back(Integer(d(rng)));
  return Element(std::move(c));
}

IdealLattice random_ideal(std::mt19937_64& rng, const RingPtr& ring) {
  for (;;) {
    Element g = random_element(rng, ring->degree(), 7);
    if (g.is_zero()) continue;
    auto I = ideal_from_generators(ring, {g, random_element(rng, ring->degree(), 7)});
    if (I.norm() > 1 && I.norm() < 400) return I;
  }
}

}  // namespace

// CRT against exhaustive search over the residues of the product ideal.
TEST(Property, CrtRoundTripsAgainstExhaustiveSearch) {
  std::mt19937_64 rng(101);
  for (auto ring : {make_ring(RingSpec::integers()), make_ring(RingSpec::gaussian()),
                    make_ring(RingSpec::quadratic(-5))}) {
    int done = 0;
    while (done < 1000) {
      auto I = random_ideal(rng, ring), J = random_ideal(rng, ring);
      if (!is_coprime(I, J)) continue;
      Element a = random_element(rng, ring->degree(), 40), b = random_element(rng, ring->degree(), 40);
      Element x = crt(ring, {{I, a}, {J, b}});
      ASSERT_TRUE(I.contains(x - a));
      ASSERT_TRUE(J.contains(x - b));
      auto IJ = ideal_product(I, J);
      ASSERT_EQ(IJ.canonical_residue(x), x);
      if (done % 50 == 0) {
        std::size_t hits = 0;
        for (const auto& r : residues(IJ).representatives) hits += I.contains(r - a) && J.contains(r - b);
        ASSERT_EQ(hits, 1u);
      }
      ++done;
    }
  }
}

TEST(Property, NormMultiplicativeAndIntersection) {
  std::mt19937_64 rng(102);
  for (auto ring : {make_ring(RingSpec::gaussian()), make_ring(RingSpec::quadratic(5)),
                    make_ring(RingSpec::quadratic(-5)), make_ring(RingSpec::quadratic(-3))}) {
    for (int t = 0; t < 200; ++t) {
      auto I = random_ideal(rng, ring), J = random_ideal(rng, ring);
      EXPECT_EQ(ideal_product(I, J).norm(), I.norm() * J.norm());
      if (is_coprime(I, J)) {
        EXPECT_EQ(ideal_intersection(I, J), ideal_product(I, J));
      }
    }
  }
}

TEST(Property, AcceptanceSuites) {
  std::string why;
  EXPECT_TRUE(acceptance::detail::crt_round_trips(why)) << why;
  EXPECT_TRUE(acceptance::detail::hnf_canonical(why)) << why;
  EXPECT_TRUE(acceptance::detail::norm_multiplicative(why)) << why;
  EXPECT_TRUE(acceptance::detail::cylinder_additive(why)) << why;
  EXPECT_TRUE(acceptance::detail::marking_matches_membership(why, 3)) << why;
  EXPECT_TRUE(acceptance::detail::gaussian_translation(why, 2)) << why;
  EXPECT_TRUE(acceptance::detail::tail_monotone(why, 1)) << why;
}

TEST(Property, CylinderSumsToOneOverPatterns) {
  // Summing nu(A, D \ A) over all A inside a fixed D gives 1.
  Sieve s = catalog("squarefree");
  std::vector<Element> D{Element{0}, Element{1}, Element{2}, Element{5}, Element{9}};
  double total = 0;
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    std::vector<Element> A, B;
    for (std::size_t k = 0; k < D.size(); ++k) (mask >> k & 1U ? A : B).push_back(D[k]);
    total += cylinder_measure(PatternSpec(A, B), s, 8).value;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Property, MirskyAppendingCoprimeTermScalesDensity) {
  // Adding (7Z, all but one class) multiplies density by 1/7; the p = 7
  // square is dropped so that 7Z is coprime to every other ideal.
  Sieve base = catalog("squarefree").without_terms({4});
  auto z = base.ring_ptr();
  std::vector<Element> most;
  for (long long r = 1; r < 7; ++r) most.push_back(Element{r});
  Sieve with = base.with_front_terms({make_term(1, scalar_ideal(z, 7), most)});
  validate(with, 60);
  Window w = Window::interval(z, 1, 700000);
  double a = static_cast<double>(count_flags(rfree_mask(base, w, 60)));
  double b = static_cast<double>(count_flags(rfree_mask(with, w, 61)));
  EXPECT_NEAR(b / a * 7, 1.0, 0.02);
}

TEST(Property, PermutationInvariance) {
  Sieve s = catalog("squarefree");
  Sieve p = s.permuted({5, 3, 1, 2, 4});
  Window w = Window::interval(s.ring_ptr(), -500, 5000);
  EXPECT_EQ(rfree_mask(s, w, 30), rfree_mask(p, w, 30));
}
