#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "hnf.hpp"
#include "numeric.hpp"
#include "window.hpp"

namespace sievelab {

/// An invertible ideal of the ring, stored as its column HNF basis.
/// Equality is structural: the HNF is unique.
class IdealLattice {
 public:
  /// Adopts `basis` as-is; it must already be the HNF of an ideal.
  IdealLattice(RingPtr ring, IntMatrix basis) : ring_(std::move(ring)), basis_(std::move(basis)) {
    norm_ = determinant_lower(basis_);
  }

  /// HNF of the given columns; checks that the lattice is an ideal.
  static IdealLattice from_columns(RingPtr ring, const IntMatrix& columns) {
    IntMatrix h = hnf(columns);
    IdealLattice I(ring, std::move(h));
    for (std::size_t c = 0; c < I.degree(); ++c) {
      Element v = I.column(c);
      for (std::size_t j = 0; j < I.degree(); ++j) {
        if (!I.contains(mul(*ring, v, ring->basis(j)))) {
          throw Error(ErrorKind::InvalidParams, "lattice is not closed under ring multiplication");
        }
      }
    }
    return I;
  }

  /// The unit ideal O_K.
  static IdealLattice unit(RingPtr ring) {
    const std::size_t n = ring->degree();
    return IdealLattice(std::move(ring), identity_matrix(n));
  }

  const Ring& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  const IntMatrix& basis() const { return basis_; }
  std::size_t degree() const { return basis_.size(); }
  /// N(b) = [O_K : b] = det of the HNF basis.
  const Integer& norm() const { return norm_; }

  Element column(std::size_t j) const {
    Element e = Element::zero(degree());
    for (std::size_t i = 0; i < degree(); ++i) e.coords[i] = basis_[i][j];
    return e;
  }

  bool contains(const Element& x) const {
    check_dim(*ring_, x);
    return solve_lower(basis_, x.coords).has_value();
  }

  /// The representative of x + I with coordinate k in [0, basis[k][k]).
  Element canonical_residue(const Element& x) const {
    check_dim(*ring_, x);
    Element r(x);
    const std::size_t n = degree();
    // Column k only touches rows >= k, so reduce top-down.
    for (std::size_t k = 0; k < n; ++k) {
      Integer q = floor_div(r.coords[k], basis_[k][k]);
      if (q == 0) continue;
      for (std::size_t i = k; i < n; ++i) r.coords[i] -= q * basis_[i][k];
    }
    return r;
  }

  friend bool operator==(const IdealLattice& a, const IdealLattice& b) {
    return a.ring_->same_as(*b.ring_) && a.basis_ == b.basis_;
  }
  friend bool operator!=(const IdealLattice& a, const IdealLattice& b) { return !(a == b); }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < degree(); ++i) {
      if (i) s += ";";
      for (std::size_t j = 0; j < degree(); ++j) s += (j ? "," : "") + basis_[i][j].str();
    }
    return s + "]";
  }

 private:
  RingPtr ring_;
  IntMatrix basis_;
  Integer norm_;
};

namespace detail {

inline void check_same_ring(const IdealLattice& a, const IdealLattice& b) {
  if (!a.ring().same_as(b.ring())) {
    throw Error(ErrorKind::RingMismatch, a.ring().label() + " vs " + b.ring().label());
  }
}

inline void append_column(IntMatrix& m, const Element& v) {
  for (std::size_t i = 0; i < m.size(); ++i) m[i].push_back(v.coords[i]);
}

}  // namespace detail

inline IdealLattice ideal_from_generators(const RingPtr& ring, const std::vector<Element>& gens) {
  if (gens.empty()) throw Error(ErrorKind::EmptyInput, "no generators");
  const std::size_t n = ring->degree();
  IntMatrix m(n);
  for (const auto& g : gens) {
    check_dim(*ring, g);
    for (std::size_t j = 0; j < n; ++j) detail::append_column(m, mul(*ring, g, ring->basis(j)));
  }
  return IdealLattice(ring, hnf(m));
}

/// Principal ideal generated by an integer scalar c: c * O_K.
inline IdealLattice scalar_ideal(const RingPtr& ring, const Integer& c) {
  IntMatrix m = zero_matrix(ring->degree(), ring->degree());
  Integer a = c < 0 ? Integer(-c) : c;
  if (a == 0) throw Error(ErrorKind::RankDeficient, "zero ideal");
  for (std::size_t i = 0; i < ring->degree(); ++i) m[i][i] = a;
  return IdealLattice(ring, std::move(m));
}

inline IdealLattice ideal_sum(const IdealLattice& I, const IdealLattice& J) {
  detail::check_same_ring(I, J);
  IntMatrix m = I.basis();
  for (std::size_t j = 0; j < J.degree(); ++j) detail::append_column(m, J.column(j));
  return IdealLattice(I.ring_ptr(), hnf(m));
}

inline IdealLattice ideal_product(const IdealLattice& I, const IdealLattice& J) {
  detail::check_same_ring(I, J);
  const std::size_t n = I.degree();
  IntMatrix m(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      detail::append_column(m, mul(I.ring(), I.column(a), J.column(b)));
    }
  }
  return IdealLattice(I.ring_ptr(), hnf(m));
}

/// I cap J from the integer kernel of [B_I | -B_J]: the pairs (y, z) with
/// B_I y = B_J z give the intersection as B_I y.
inline IdealLattice ideal_intersection(const IdealLattice& I, const IdealLattice& J) {
  detail::check_same_ring(I, J);
  const std::size_t n = I.degree();
  IntMatrix m = I.basis();
  for (std::size_t j = 0; j < n; ++j) detail::append_column(m, -J.column(j));
  HnfResult r = hnf_with_transform(m);
  IntMatrix out(n);
  for (std::size_t c = n; c < 2 * n; ++c) {
    Element v = Element::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) v.coords[i] += I.basis()[i][k] * r.u[k][c];
    }
    detail::append_column(out, v);
  }
  return IdealLattice(I.ring_ptr(), hnf(out));
}

inline bool is_coprime(const IdealLattice& I, const IdealLattice& J) {
  return ideal_sum(I, J).norm() == 1;
}

/// One canonical representative per class of O_K / I, lexicographic order.
struct ResidueSystem {
  IdealLattice ideal;
  std::vector<Element> representatives;
};

inline constexpr std::size_t kDefaultResidueCap = 10'000'000;

inline ResidueSystem residues(const IdealLattice& I, std::size_t cap = kDefaultResidueCap) {
  if (I.norm() > Integer(cap)) {
    throw Error(ErrorKind::NormTooLarge, "norm " + I.norm().str() + " exceeds residue cap");
  }
  const std::size_t n = I.degree();
  std::vector<Coord> lo(n, 0), hi(n);
  for (std::size_t i = 0; i < n; ++i) hi[i] = static_cast<Coord>(I.basis()[i][i]) - 1;
  ResidueSystem rs{I, {}};
  rs.representatives.reserve(static_cast<std::size_t>(I.norm()));
  detail::for_each_box_point(lo, hi, [&](const std::vector<Coord>& p) {
    rs.representatives.push_back(detail::to_element(p));
  });
  return rs;
}

/// x with x = a_i mod I_i for every pair, canonical modulo the product ideal.
inline Element crt(const RingPtr& ring, const std::vector<std::pair<IdealLattice, Element>>& pairs) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "crt needs at least one congruence");
  const std::size_t n = ring->degree();
  IdealLattice modulus = pairs[0].first;
  Element x = modulus.canonical_residue(pairs[0].second);
  const Element one = ring->one();
  for (std::size_t p = 1; p < pairs.size(); ++p) {
    const IdealLattice& J = pairs[p].first;
    detail::check_same_ring(modulus, J);
    IntMatrix m = modulus.basis();
    for (std::size_t j = 0; j < n; ++j) detail::append_column(m, J.column(j));
    auto y = solve_integer(m, one.coords);
    if (!y) {
      throw Error(ErrorKind::NotCoprime, "congruence " + std::to_string(p + 1) + " is not coprime to the previous ones",
                  static_cast<long>(p + 1));
    }
    Element u = Element::zero(n), v = Element::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        u.coords[i] += modulus.basis()[i][k] * (*y)[k];
        v.coords[i] += J.basis()[i][k] * (*y)[n + k];
      }
    }
    // u in modulus, v in J, u + v = 1
    x = mul(*ring, x, v) + mul(*ring, pairs[p].second, u);
    modulus = ideal_product(modulus, J);
    x = modulus.canonical_residue(x);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Coset enumeration inside windows
// ---------------------------------------------------------------------------

namespace detail {

template <class F>
void coset_level(const IntMatrix& basis, const Window& w, Coord slab_lo, Coord slab_hi,
                 std::size_t k, std::vector<Integer>& acc, std::size_t base, F& f) {
  const std::size_t n = basis.size();
  const Integer& d = basis[k][k];
  const Integer& c = acc[k];
  const Coord lo = k == 0 ? slab_lo : w.lo()[k];
  const Coord hi = k == 0 ? slab_hi : w.hi()[k];
  Integer y_min = ceil_div(Integer(lo) - c, d);
  Integer y_max = floor_div(Integer(hi) - c, d);
  if (y_min > y_max) return;
  const std::size_t stride = w.strides()[k];
  if (k + 1 == n) {
    Coord first = static_cast<Coord>(c + d * y_min);
    std::size_t idx = base + static_cast<std::size_t>(first - w.lo()[k]) * stride;
    std::size_t count = static_cast<std::size_t>(y_max - y_min) + 1;
    if (count == 1) {
      f(idx);
      return;
    }
    std::size_t step = static_cast<std::size_t>(d) * stride;
    for (std::size_t t = 0; t < count; ++t, idx += step) f(idx);
    return;
  }
  std::vector<Integer> saved(acc.begin() + static_cast<std::ptrdiff_t>(k + 1), acc.end());
  for (Integer y = y_min; y <= y_max; ++y) {
    Coord x = static_cast<Coord>(c + d * y);
    for (std::size_t m = k + 1; m < n; ++m) acc[m] = saved[m - k - 1] + basis[m][k] * y;
    coset_level(basis, w, slab_lo, slab_hi, k + 1, acc, base + static_cast<std::size_t>(x - w.lo()[k]) * stride, f);
  }
  for (std::size_t m = k + 1; m < n; ++m) acc[m] = saved[m - k - 1];
}

}  // namespace detail

/// Calls f(box_index) for every point x of the window's bounding box with
/// x - residue in the lattice, restricted to first coordinate in
/// [slab_lo, slab_hi]. The caller filters by the window mask if needed.
template <class F>
void for_each_coset_index(const IntMatrix& basis, const Element& residue, const Window& w,
                          Coord slab_lo, Coord slab_hi, F&& f) {
  std::vector<Integer> acc = residue.coords;
  detail::coset_level(basis, w, slab_lo, slab_hi, 0, acc, 0, f);
}

template <class F>
void for_each_coset_index(const IntMatrix& basis, const Element& residue, const Window& w, F&& f) {
  for_each_coset_index(basis, residue, w, w.lo()[0], w.hi()[0], std::forward<F>(f));
}

/// T_a(W) = |{x in W : x - a in I}|.
inline std::size_t count_in_class(const IdealLattice& I, const Element& a, const Window& window) {
  if (!I.ring().same_as(window.ring())) throw Error(ErrorKind::RingMismatch, "window ring");
  check_dim(I.ring(), a);
  std::size_t count = 0;
  for_each_coset_index(I.basis(), a, window, [&](std::size_t idx) {
    if (window.in_window_index(idx)) ++count;
  });
  return count;
}

/// lambda_1: the smallest sup norm of a nonzero lattice vector.
inline Real shortest_vector(const IdealLattice& I, std::size_t cap = kDefaultPointCap) {
  const Ring& ring = I.ring();
  Real best = sup_norm(ring, I.column(0));
  for (std::size_t j = 1; j < I.degree(); ++j) best = std::min(best, sup_norm(ring, I.column(j)));
  Window box = Window::ball(I.ring_ptr(), best, cap);
  Element zero = Element::zero(I.degree());
  for_each_coset_index(I.basis(), zero, box, [&](std::size_t idx) {
    Element x = box.element_at(idx);
    if (x.is_zero()) return;
    Real nrm = sup_norm(ring, x);
    if (nrm < best) best = nrm;
  });
  return best;
}

}  // namespace sievelab
