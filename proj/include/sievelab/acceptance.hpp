#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "catalog.hpp"
#include "density.hpp"
#include "entropy.hpp"
#include "hnf.hpp"
#include "ideals.hpp"
#include "mirsky.hpp"
#include "sieve.hpp"
#include "window.hpp"

namespace sievelab::acceptance {

struct Result {
  Result() = default;
  Result(int i, std::string n, bool ok = false, std::string d = {})
      : id(i), name(std::move(n)), pass(ok), detail(std::move(d)) {}

  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  std::vector<std::string> info;  // extra diagnostics, never part of the verdict
};

namespace detail {

inline std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::size_t primes_up_to(std::uint64_t x) {
  std::size_t n = 0;
  while (nth_prime(n + 1) <= x) ++n;
  return n;
}

inline double rfree_ratio(const Sieve& s, std::size_t L, const Window& w, std::size_t threads,
                          std::size_t* count = nullptr) {
  auto flags = rfree_mask(s, w, L, threads);
  std::size_t c = 0;
  w.for_each_index([&](std::size_t idx) { c += flags[idx] != 0; });
  if (count) *count = c;
  return static_cast<double>(c) / static_cast<double>(w.size());
}

}  // namespace detail

inline Result squarefree_density(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{1, "squarefree density on [1,1e6]"};
  Sieve s = catalog("kfree", {{"k", "2"}});
  const std::size_t L = detail::primes_up_to(1000);
  Window w = Window::interval(s.ring_ptr(), 1, 1000000);
  std::size_t count = 0;
  double emp = detail::rfree_ratio(s, L, w, threads, &count);
  double prod = static_cast<double>(partial_density_product(s, L).value);
  r.seconds = sw.seconds();
  double err = std::fabs(emp - prod);
  r.pass = count == 607926 && err < 1e-3 && r.seconds < 5;
  r.detail = "count=" + std::to_string(count) + " (want 607926), |emp-prod|=" + detail::num(err) + " (< 1e-3), L=" +
             std::to_string(L) + ", t=" + detail::num(r.seconds, 3) + "s (< 5)";
  return r;
}

inline Result visible_points_density(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{2, "visible lattice points on [-500,500]^2"};
  Sieve s = catalog("visible_points", {{"dim", "2"}});
  const std::size_t L = detail::primes_up_to(500);
  Window w = Window::box(s.ring_ptr(), Element{-500, -500}, Element{500, 500});
  double emp = detail::rfree_ratio(s, L, w, threads);
  double prod = static_cast<double>(partial_density_product(s, L).value);
  r.seconds = sw.seconds();
  double err = std::fabs(emp - prod);
  r.pass = err < 1e-2 && r.seconds < 10;
  r.detail = "emp=" + detail::num(emp) + " prod=" + detail::num(prod) + " |diff|=" + detail::num(err) +
             " (< 1e-2), t=" + detail::num(r.seconds, 3) + "s (< 10)";
  return r;
}

inline Result even_squarefree_ratio(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{3, "appending (2Z,{1}) to squarefree scales density by 2/3"};
  Sieve s = catalog("squarefree");
  const std::size_t L = detail::primes_up_to(1000);
  auto z = s.ring_ptr();
  Sieve even = s.with_front_terms({make_term(1, scalar_ideal(z, 2), {Element{1}})}, "squarefree+(2Z,{1})");
  Window w = Window::interval(z, 1, 1000000);
  double base = detail::rfree_ratio(s, L, w, threads);
  double with = detail::rfree_ratio(even, L + 1, w, threads);
  double ratio = with / base;
  double rel = std::fabs(ratio / (2.0 / 3.0) - 1);
  r.pass = rel <= 0.01;
  r.detail = "ratio=" + detail::num(ratio) + " (want 2/3 within 1% relative, off by " + detail::num(rel * 100, 4) + "%)";
  Sieve odd = s.with_front_terms({make_term(1, scalar_ideal(z, 2), {Element{0}})}, "squarefree+(2Z,{0})");
  double odd_ratio = detail::rfree_ratio(odd, L + 1, w, threads) / base;
  r.info.push_back("(2Z,{0}) removes even numbers instead: ratio=" + detail::num(odd_ratio));
  r.seconds = sw.seconds();
  return r;
}

inline Result weak_not_strong_tails(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{4, "weak but not strong light tails"};
  Sieve s = catalog("weak_not_strong");
  Window w = Window::interval(s.ring_ptr(), 0, 100000);
  auto strong = strong_tail_statistic(s, 10, 10000, w, threads);
  auto weak = weak_tail_statistic(s, 50, 10000, w, threads);
  r.seconds = sw.seconds();
  r.pass = strong.value >= 0.20 && weak.value <= 0.01 && r.seconds < 10;
  r.detail = "strong(L=10)=" + detail::num(strong.value) + " (>= 0.20), weak(L=50)=" + detail::num(weak.value) +
             " (<= 0.01), t=" + detail::num(r.seconds, 3) + "s (< 10)";
  auto wide = strong_tail_statistic(s, 10, 25001, w, threads);
  r.info.push_back("with L_max=25001 (every residue up to 1e5 present): strong=" + detail::num(wide.value));
  return r;
}

inline Result no_density(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{5, "no-density construction"};
  Sieve s = catalog("no_density");
  double a = log_density(s, 256, 256, threads);
  double b = log_density(s, 65536, 65536, threads);
  r.seconds = sw.seconds();
  r.pass = std::fabs(a - b) > 0.2 && r.seconds < 5;
  r.detail = "log density N=256: " + detail::num(a) + ", N=65536: " + detail::num(b) + " (differ by > 0.2), t=" +
             detail::num(r.seconds, 3) + "s (< 5)";
  return r;
}

inline Result shifted_squares(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{6, "shifted square moduli with protected base points"};
  Sieve s = catalog("erdos_shifted", {{"power", "2"}, {"shift_seed", "7"}});
  Sieve plain = catalog("squarefree");
  const std::size_t L = detail::primes_up_to(1000);
  Window w = Window::interval(s.ring_ptr(), 1, 1000000);
  double emp = detail::rfree_ratio(s, L, w, threads);
  double prod = static_cast<double>(partial_density_product(plain, L).value);
  double err = std::fabs(emp - prod);
  r.seconds = sw.seconds();
  r.pass = err < 5e-3;
  r.detail = "emp=" + detail::num(emp) + " prod(1-1/p^2)=" + detail::num(prod) + " |diff|=" + detail::num(err) +
             " (< 5e-3)";
  return r;
}

inline Result twin_squarefree(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{7, "twin squarefree pattern {0,1}"};
  Sieve s = catalog("squarefree");
  const std::size_t L = detail::primes_up_to(1000);
  Window w = Window::interval(s.ring_ptr(), 1, 1000000);
  auto ex = pattern_density_experiment({Element{0}, Element{1}}, s, w, L, threads);
  std::vector<long double> xs;
  for (std::size_t i = 1; i <= L; ++i) {
    long double p = static_cast<long double>(nth_prime(i));
    xs.push_back(2 / (p * p));
  }
  double closed = static_cast<double>(product_one_minus(xs));
  double err = std::fabs(ex.empirical - closed);
  r.seconds = sw.seconds();
  r.pass = err < 5e-3 && std::fabs(ex.theoretical - closed) < 1e-12;
  r.detail = "emp=" + detail::num(ex.empirical) + " prod(1-2/p^2)=" + detail::num(closed) +
             " |diff|=" + detail::num(err) + " (< 5e-3), cylinder product matches closed form: " +
             (std::fabs(ex.theoretical - closed) < 1e-12 ? "yes" : "no");
  return r;
}

inline Result holes() {
  detail::Stopwatch sw;
  Result r{8, "CRT hole construction"};
  auto h = find_hole(catalog("squarefree"), Real(1));
  auto v = find_hole(catalog("visible_points", {{"dim", "2"}}), Real(1));
  r.seconds = sw.seconds();
  r.pass = h.verified && h.x == Element{424} && v.verified;
  r.detail = "squarefree N=1: x=" + h.x.str() + " verified=" + (h.verified ? "yes" : "no") +
             "; visible_points N=1: x=" + v.x.str() + " verified=" + (v.verified ? "yes" : "no");
  return r;
}

inline Result entropy(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{9, "patch-counting entropy"};
  auto z = make_ring(RingSpec::integers());
  Sieve four = Sieve::finite(z, "4Z", {make_term(1, scalar_ideal(z, 4), {Element{0}})});
  Window w4 = Window::interval(z, 0, 3);
  auto c = count_admissible_patterns(four, 1, w4, std::nullopt, threads);
  auto c2 = count_admissible_patterns(four, 1, w4, CapacityVector{{2}}, threads);
  Sieve sq = catalog("squarefree");
  Window w20 = Window::interval(z, 0, 19);
  auto exact = entropy_estimate(sq, 2, w20, EntropyMode::Exact, {std::nullopt, 0, 0, threads});
  double exact_fraction = static_cast<double>(exact.count) / std::ldexp(1.0, 20);
  auto mc = mc_admissible_fraction(sq, 2, w20, 100000, 2024, std::nullopt, threads);
  double z_score = std::fabs(mc.fraction - exact_fraction) / mc.stderr_;
  r.seconds = sw.seconds();
  bool counts = c == 15 && c2 == 5;
  bool close = std::fabs(exact.bits_per_point - 2.0 / 3.0) <= 0.15;
  bool mc_ok = z_score <= 4;
  r.pass = counts && close && mc_ok && r.seconds < 60;
  r.detail = "count=" + std::to_string(c) + " (15), capped=" + std::to_string(c2) + " (5); squarefree L=2 |W|=20: count=" +
             std::to_string(exact.count) + " bits=" + detail::num(exact.bits_per_point) + " (2/3 +- 0.15: " +
             (close ? "yes" : "no") + "); mc z=" + detail::num(z_score, 3) + " (<= 4), t=" +
             detail::num(r.seconds, 3) + "s (< 60)";
  return r;
}

// ---------------------------------------------------------------------------
// Property suite
// ---------------------------------------------------------------------------

namespace detail {

inline Element random_element(std::mt19937_64& rng, std::size_t n, long long bound) {
  std::uniform_int_distribution<long long> d(-bound, bound);
  std::vector<Integer> c;
  for (std::size_t k = 0; k < n; ++k) c.push_back(Integer(d(rng)));
  return Element(std::move(c));
}

inline IdealLattice random_ideal(std::mt19937_64& rng, const RingPtr& ring) {
  for (;;) {
    std::vector<Element> gens{random_element(rng, ring->degree(), 9), random_element(rng, ring->degree(), 9)};
    if (ring->degree() == 1 || rng() % 2) gens.push_back(Element::zero(ring->degree()));
    bool nonzero = false;
    for (const auto& g : gens) nonzero = nonzero || !g.is_zero();
    if (!nonzero) continue;
    try {
      auto I = ideal_from_generators(ring, gens);
      if (I.norm() > 1 && I.norm() < 5000) return I;
    } catch (const Error&) {
    }
  }
}

inline bool crt_round_trips(std::string& why) {
  std::mt19937_64 rng(11);
  std::vector<RingPtr> rings{make_ring(RingSpec::integers()), make_ring(RingSpec::gaussian()),
                             make_ring(RingSpec::quadratic(-5))};
  for (const auto& ring : rings) {
    std::size_t done = 0;
    while (done < 1000) {
      auto I = random_ideal(rng, ring);
      auto J = random_ideal(rng, ring);
      if (!is_coprime(I, J)) continue;
      Element a = random_element(rng, ring->degree(), 50), b = random_element(rng, ring->degree(), 50);
      Element x = crt(ring, {{I, a}, {J, b}});
      if (!I.contains(x - a) || !J.contains(x - b)) {
        why = "crt failed on " + ring->label();
        return false;
      }
      ++done;
    }
  }
  return true;
}

inline bool hnf_canonical(std::string& why) {
  std::mt19937_64 rng(12);
  auto ring = make_ring(RingSpec::quadratic(-5));
  for (int t = 0; t < 300; ++t) {
    auto I = random_ideal(rng, ring);
    // A unimodular change of generators must give the same HNF.
    Element u = I.column(0), v = I.column(1);
    long long k = static_cast<long long>(rng() % 7) - 3;
    Element v2 = v;
    for (long long s = 0; s < std::abs(k); ++s) v2 = k > 0 ? v2 + u : v2 - u;
    auto J = ideal_from_generators(ring, {v2, u});
    if (!(I == J)) {
      why = "HNF differs for " + I.str();
      return false;
    }
  }
  return true;
}

inline bool norm_multiplicative(std::string& why) {
  std::mt19937_64 rng(13);
  for (auto ring : {make_ring(RingSpec::gaussian()), make_ring(RingSpec::quadratic(5)),
                    make_ring(RingSpec::quadratic(-5))}) {
    for (int t = 0; t < 200; ++t) {
      auto I = random_ideal(rng, ring), J = random_ideal(rng, ring);
      if (ideal_product(I, J).norm() != I.norm() * J.norm()) {
        why = "N(IJ) != N(I)N(J) for " + I.str() + ", " + J.str();
        return false;
      }
    }
  }
  return true;
}

inline bool cylinder_additive(std::string& why) {
  Sieve s = catalog("squarefree");
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    std::vector<Element> A, B;
    for (long long x = 0; x < 8; ++x) {
      auto c = rng() % 3;
      if (c == 0) A.push_back(Element{x});
      if (c == 1) B.push_back(Element{x});
    }
    Element y{static_cast<long long>(8 + rng() % 4)};
    auto B_plus = B;
    B_plus.push_back(y);
    auto A_plus = A;
    A_plus.push_back(y);
    double whole = cylinder_measure(PatternSpec(A, B), s, 6).value;
    double parts = cylinder_measure(PatternSpec(A, B_plus), s, 6).value +
                   cylinder_measure(PatternSpec(A_plus, B), s, 6).value;
    if (std::fabs(whole - parts) > 1e-12) {
      why = "cylinder additivity off by " + num(std::fabs(whole - parts));
      return false;
    }
  }
  return true;
}

inline bool marking_matches_membership(std::string& why, std::size_t threads) {
  std::vector<std::pair<Sieve, Window>> cases;
  Sieve sq = catalog("squarefree");
  cases.emplace_back(sq, Window::interval(sq.ring_ptr(), -300, 700));
  Sieve vp = catalog("visible_points", {{"dim", "2"}});
  cases.emplace_back(vp, Window::box(vp.ring_ptr(), Element{-20, -15}, Element{25, 30}));
  Sieve gi = catalog("gaussian_inert");
  cases.emplace_back(gi, Window::ball(gi.ring_ptr(), Real(12)));
  Sieve es = catalog("erdos_shifted", {{"power", "2"}, {"shift_seed", "3"}});
  cases.emplace_back(es, Window::interval(es.ring_ptr(), 1, 2000));
  for (auto& [s, w] : cases) {
    auto mask = rfree_mask(s, w, 12, threads);
    bool ok = true;
    w.for_each_index([&](std::size_t idx) {
      bool member = !is_sieved(s, 12, w.element_at(idx)).has_value();
      ok = ok && (member == (mask[idx] != 0));
    });
    if (!ok) {
      why = "marking disagrees with membership for " + s.name();
      return false;
    }
  }
  return true;
}

inline bool gaussian_translation(std::string& why, std::size_t threads) {
  Sieve s = catalog("gaussian_inert");
  auto ring = s.ring_ptr();
  Window w = Window::box(ring, Element{-20, -20}, Element{20, 20});
  auto res = translation_check(s, Element{1, 0}, w, 8, threads);
  if (!res.holds) {
    why = "shift by 1 changes membership at " + res.counterexample->str();
    return false;
  }
  return true;
}

inline bool tail_monotone(std::string& why, std::size_t threads) {
  Sieve s = catalog("weak_not_strong");
  Window w = Window::interval(s.ring_ptr(), 0, 20000);
  for (std::size_t L : {5, 10, 20, 40}) {
    auto weak = weak_tail_statistic(s, L, 2000, w, threads);
    auto strong = strong_tail_statistic(s, L, 2000, w, threads);
    auto strong_next = strong_tail_statistic(s, L * 2, 2000, w, threads);
    auto strong_wider = strong_tail_statistic(s, L, 4000, w, threads);
    if (weak.value > strong.value || strong_next.value > strong.value || strong_wider.value < strong.value) {
      why = "tail statistics not nested at L=" + std::to_string(L);
      return false;
    }
  }
  return true;
}

}  // namespace detail

inline Result properties(std::size_t threads) {
  detail::Stopwatch sw;
  Result r{10, "property suites"};
  std::vector<std::pair<std::string, std::function<bool(std::string&)>>> suites = {
      {"crt", detail::crt_round_trips},
      {"hnf", detail::hnf_canonical},
      {"norm", detail::norm_multiplicative},
      {"cylinder", detail::cylinder_additive},
      {"marking", [threads](std::string& w) { return detail::marking_matches_membership(w, threads); }},
      {"translation", [threads](std::string& w) { return detail::gaussian_translation(w, threads); }},
      {"tails", [threads](std::string& w) { return detail::tail_monotone(w, threads); }},
  };
  r.pass = true;
  for (auto& [name, fn] : suites) {
    std::string why;
    bool ok = false;
    try {
      ok = fn(why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    r.detail += (r.detail.empty() ? "" : " ") + name + "=" + (ok ? "ok" : "FAIL(" + why + ")");
    r.pass = r.pass && ok;
  }
  r.seconds = sw.seconds();
  return r;
}

/// Runs criteria 1..10 in order; exceptions become failures.
inline std::vector<Result> run_all(std::size_t threads) {
  std::vector<std::function<Result()>> steps = {
      [=] { return squarefree_density(threads); },     [=] { return visible_points_density(threads); },
      [=] { return even_squarefree_ratio(threads); },  [=] { return weak_not_strong_tails(threads); },
      [=] { return no_density(threads); },             [=] { return shifted_squares(threads); },
      [=] { return twin_squarefree(threads); },        [] { return holes(); },
      [=] { return entropy(threads); },                [=] { return properties(threads); },
  };
  std::vector<Result> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      out.push_back(steps[i]());
    } catch (const std::exception& e) {
      out.push_back({static_cast<int>(i + 1), "criterion " + std::to_string(i + 1), false,
                     std::string("exception: ") + e.what()});
    }
  }
  return out;
}

inline std::string format_line(const Result& r) {
  return std::string(r.pass ? "[PASS]" : "[FAIL]") + " criterion " + std::to_string(r.id) + ": " + r.name + " -- " +
         r.detail;
}

}  // namespace sievelab::acceptance
