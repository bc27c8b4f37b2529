#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "density.hpp"
#include "error.hpp"
#include "ideals.hpp"
#include "numeric.hpp"
#include "report.hpp"
#include "sieve.hpp"
#include "window.hpp"

namespace sievelab {

/// Names the cylinder {Y : A in Y, Y cap B empty}. Both lists are kept sorted
/// and deduplicated; they must be disjoint.
struct PatternSpec {
  std::vector<Element> A;
  std::vector<Element> B;

  PatternSpec() = default;
  PatternSpec(std::vector<Element> required, std::vector<Element> forbidden)
      : A(std::move(required)), B(std::move(forbidden)) {
    normalize(A);
    normalize(B);
    for (const auto& b : B) {
      if (std::binary_search(A.begin(), A.end(), b)) {
        throw Error(ErrorKind::InvalidParams, "pattern sets overlap at " + b.str());
      }
    }
  }

 private:
  static void normalize(std::vector<Element>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
};

/// |-A + R_b| as a number of classes modulo b.
inline std::size_t shifted_residue_count(const std::vector<Element>& A, const SieveTerm& term) {
  std::vector<Element> classes;
  classes.reserve(A.size() * term.residues.size());
  for (const auto& a : A) {
    for (const auto& s : term.residues) classes.push_back(term.ideal.canonical_residue(s - a));
  }
  std::sort(classes.begin(), classes.end());
  return static_cast<std::size_t>(std::unique(classes.begin(), classes.end()) - classes.begin());
}

namespace detail {

inline void check_proper(const SieveTerm& t) {
  if (Integer(t.residue_count()) >= t.ideal.norm()) {
    throw Error(ErrorKind::ImproperTerm, "term " + std::to_string(t.index), static_cast<long>(t.index));
  }
}

/// prod_{i<=L} (1 - |-D + R_i| / N(b_i)) and, optionally, its running products.
inline long double cylinder_product(const std::vector<Element>& D, const std::vector<const SieveTerm*>& terms,
                                    std::vector<double>* partial = nullptr) {
  std::vector<long double> xs;
  xs.reserve(terms.size());
  for (const SieveTerm* t : terms) {
    xs.push_back(static_cast<long double>(shifted_residue_count(D, *t)) / to_ld(t->ideal.norm()));
  }
  if (partial) {
    long double p = 1;
    for (long double x : xs) {
      p *= (1 - x);
      partial->push_back(static_cast<double>(p));
    }
  }
  return product_one_minus(xs);
}

}  // namespace detail

inline constexpr std::size_t kMaxForbidden = 20;

struct CylinderMeasure {
  double value = 0;
  /// Running products over i <= L for D = A (the B-empty factor).
  std::vector<double> partial_products;
};

/// nu_R(C_{A,B}) at truncation L by inclusion-exclusion over A <= D <= A cup B.
inline CylinderMeasure cylinder_measure(const PatternSpec& pattern, const Sieve& sieve, std::size_t L) {
  if (pattern.B.size() > kMaxForbidden) {
    throw Error(ErrorKind::PatternTooLarge, "|B| = " + std::to_string(pattern.B.size()) + " exceeds 20");
  }
  auto terms = sieve.terms(L);
  for (const SieveTerm* t : terms) detail::check_proper(*t);
  CylinderMeasure out;
  long double total = 0;
  const std::size_t m = pattern.B.size();
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    std::vector<Element> D = pattern.A;
    int sign = 1;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask >> k & 1U) {
        D.push_back(pattern.B[k]);
        sign = -sign;
      }
    }
    long double p = detail::cylinder_product(D, terms, mask == 0 ? &out.partial_products : nullptr);
    total += sign * p;
  }
  out.value = static_cast<double>(total);
  return out;
}

struct TailBound {
  /// Upper bound on |S_i| for every i > L.
  Integer max_residues;
  /// Lower bound on N(b_i) for every i > L.
  Integer min_norm;
};

struct AdmissibilityStatus {
  enum class Kind { NotAdmissible, AdmissibleUpTo, ProvablyAdmissible };
  Kind kind = Kind::AdmissibleUpTo;
  std::size_t witness = 0;  // term index when NotAdmissible
  std::size_t L = 0;
  std::optional<TailBound> tail;

  std::string str() const {
    switch (kind) {
      case Kind::NotAdmissible: return "NotAdmissible(" + std::to_string(witness) + ")";
      case Kind::AdmissibleUpTo: return "AdmissibleUpTo(" + std::to_string(L) + ")";
      case Kind::ProvablyAdmissible: return "ProvablyAdmissible";
    }
    return "?";
  }
};

/// Tail bound for the catalog's k-free family: |S_i| = 1 and N(b_i) = p_i^k.
inline TailBound kfree_tail_bound(std::size_t L, unsigned k) {
  return {Integer(1), detail::ipow(nth_prime(L + 1), k)};
}

inline AdmissibilityStatus is_admissible(const std::vector<Element>& A, const Sieve& sieve, std::size_t L,
                                         const std::optional<TailBound>& tail = std::nullopt) {
  AdmissibilityStatus st;
  st.L = sieve.available(L);
  for (const SieveTerm* t : sieve.terms(L)) {
    if (Integer(shifted_residue_count(A, *t)) == t->ideal.norm()) {
      st.kind = AdmissibilityStatus::Kind::NotAdmissible;
      st.witness = t->index;
      return st;
    }
  }
  if (tail && Integer(A.size()) * tail->max_residues < tail->min_norm) {
    st.kind = AdmissibilityStatus::Kind::ProvablyAdmissible;
    st.tail = tail;
  }
  return st;
}

struct PatternExperiment {
  std::vector<Element> pattern;
  std::size_t L = 0;
  std::string window;
  std::size_t window_size = 0;
  std::size_t count = 0;
  double empirical = 0;
  double theoretical = 0;
  double abs_error = 0;
  std::vector<double> partial_products;

  Json to_json() const {
    Json j;
    Json pat = Json::array();
    for (const auto& a : pattern) {
      Json c = Json::array();
      for (const auto& v : a.coords) c.push_back(v.str());
      pat.push_back(c);
    }
    j["pattern"] = pat;
    j["L"] = L;
    j["window"] = window;
    j["empirical"] = empirical;
    j["theoretical"] = theoretical;
    j["abs_error"] = abs_error;
    j["partial_products"] = partial_products;
    return j;
  }
};

/// Density of {x in W : x + A inside F_R} against prod (1 - |-A+R_i|/N(b_i)).
inline PatternExperiment pattern_density_experiment(const std::vector<Element>& A, const Sieve& sieve,
                                                    const Window& w, std::size_t L, std::size_t threads = 1) {
  if (A.empty()) throw Error(ErrorKind::EmptyInput, "pattern needs at least one point");
  auto st = is_admissible(A, sieve, L);
  if (st.kind == AdmissibilityStatus::Kind::NotAdmissible) {
    throw Error(ErrorKind::NotAdmissiblePattern, "witness term " + std::to_string(st.witness),
                static_cast<long>(st.witness));
  }
  Window ext = expanded_box(w, A);
  auto free = rfree_mask(sieve, ext, L, threads);
  std::vector<std::vector<Coord>> offs;
  for (const auto& a : A) {
    std::vector<Coord> o;
    for (const auto& v : a.coords) o.push_back(to_coord(v));
    offs.push_back(o);
  }
  PatternExperiment ex;
  ex.pattern = A;
  ex.L = sieve.available(L);
  ex.window = w.describe();
  ex.window_size = w.size();
  w.for_each_index([&](std::size_t idx) {
    auto p = w.point_at(idx);
    for (const auto& o : offs) {
      std::vector<Coord> q(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) q[k] = p[k] + o[k];
      if (!free[ext.index_of(q)]) return;
    }
    ++ex.count;
  });
  ex.empirical = static_cast<double>(ex.count) / static_cast<double>(w.size());
  ex.theoretical = static_cast<double>(detail::cylinder_product(A, sieve.terms(L), &ex.partial_products));
  ex.abs_error = std::fabs(ex.empirical - ex.theoretical);
  return ex;
}

struct HoleResult {
  Element x;
  std::vector<Element> ball;  // B_N in the order matched to terms 1..l
  bool verified = false;
};

/// B_N ordered by sup norm, ties broken lexicographically.
inline std::vector<Element> ball_by_norm(const Ring& ring, const Real& N) {
  auto pts = ball_points(ring, N);
  std::vector<std::pair<Real, Element>> keyed;
  keyed.reserve(pts.size());
  for (auto& p : pts) keyed.emplace_back(sup_norm_sq(ring, p), std::move(p));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Element> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.second));
  return out;
}

/// x such that x + B_N contains no R-free point: the k-th point x_k of B_N
/// (ordered by norm, then lexicographically) is pushed into R_k using the
/// first residue of term k, and the congruences are solved by CRT.
inline HoleResult find_hole(const Sieve& sieve, const Real& N) {
  const Ring& ring = sieve.ring();
  HoleResult res;
  res.ball = ball_by_norm(ring, N);
  const std::size_t l = res.ball.size();
  if (sieve.available(l) < l) throw Error(ErrorKind::InsufficientTerms, "sieve has fewer than |B_N| terms");
  std::vector<std::pair<IdealLattice, Element>> congruences;
  for (std::size_t k = 1; k <= l; ++k) {
    const SieveTerm& t = sieve.term(k);
    if (t.residues.empty()) {
      throw Error(ErrorKind::InsufficientTerms, "term " + std::to_string(k) + " is empty", static_cast<long>(k));
    }
    congruences.emplace_back(t.ideal, t.residues.front() - res.ball[k - 1]);
  }
  res.x = crt(sieve.ring_ptr(), congruences);
  Window hole = Window::shifted_ball(sieve.ring_ptr(), res.x, N);
  res.verified = rfree_window(sieve, hole, l).empty();
  if (!res.verified) throw std::logic_error("find_hole: constructed window still has R-free points");
  return res;
}

struct TranslationResult {
  bool holds = true;
  std::size_t pairs_checked = 0;
  std::optional<Element> counterexample;
};

/// Whether x in F_R <=> x + t in F_R for all x with x, x + t in the window.
inline TranslationResult translation_check(const Sieve& sieve, const Element& t, const Window& w, std::size_t L,
                                           std::size_t threads = 1) {
  check_dim(sieve.ring(), t);
  auto free = rfree_mask(sieve, w, L, threads);
  std::vector<Coord> shift;
  for (const auto& v : t.coords) shift.push_back(to_coord(v));
  TranslationResult r;
  w.for_each_index([&](std::size_t idx) {
    if (!r.holds) return;
    auto p = w.point_at(idx);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += shift[k];
    if (!w.in_box(p)) return;
    std::size_t j = w.index_of(p);
    if (!w.in_window_index(j)) return;
    ++r.pairs_checked;
    if (free[idx] != free[j]) {
      r.holds = false;
      r.counterexample = w.element_at(idx);
    }
  });
  return r;
}

}  // namespace sievelab
