#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace sievelab {

// ---------------------------------------------------------------------------
// Element
// ---------------------------------------------------------------------------

/// A ring element as its coordinate vector in the integral basis e_1..e_n.
struct Element {
  std::vector<Integer> coords;

  Element() = default;
  explicit Element(std::vector<Integer> c) : coords(std::move(c)) {}
  Element(std::initializer_list<long long> c) {
    coords.reserve(c.size());
    for (long long v : c) coords.emplace_back(v);
  }

  static Element zero(std::size_t n) { return Element(std::vector<Integer>(n, Integer(0))); }

  std::size_t size() const { return coords.size(); }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Integer& v) { return v == 0; });
  }

  friend bool operator==(const Element& a, const Element& b) { return a.coords == b.coords; }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  friend bool operator<(const Element& a, const Element& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                        b.coords.end());
  }

  friend Element operator+(const Element& a, const Element& b) {
    check_same(a, b);
    Element r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r.coords[i] += b.coords[i];
    return r;
  }
  friend Element operator-(const Element& a, const Element& b) {
    check_same(a, b);
    Element r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
  }
  friend Element operator-(const Element& a) {
    Element r(a);
    for (auto& v : r.coords) v = -v;
    return r;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) s += ",";
      s += coords[i].str();
    }
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const Element& e) { return os << e.str(); }

 private:
  static void check_same(const Element& a, const Element& b) {
    if (a.size() != b.size()) {
      throw Error(ErrorKind::DimensionMismatch, "element lengths " + std::to_string(a.size()) +
                                                    " and " + std::to_string(b.size()));
    }
  }
};

// ---------------------------------------------------------------------------
// Ring
// ---------------------------------------------------------------------------

struct Complex {
  Real re{0};
  Real im{0};

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  Real abs2() const { return re * re + im * im; }
  Real abs() const { return boost::multiprecision::sqrt(abs2()); }
};

using MulTable = std::vector<std::vector<std::vector<Integer>>>;
using EmbeddingMatrix = std::vector<std::vector<Complex>>;

/// Which built-in ring to construct.
struct RingSpec {
  enum class Kind { Integers, ProductIntegers, Gaussian, Quadratic };
  Kind kind = Kind::Integers;
  long long param = 0;  // m for ProductIntegers, d for Quadratic

  static RingSpec integers() { return {Kind::Integers, 0}; }
  static RingSpec product_integers(long long m) { return {Kind::ProductIntegers, m}; }
  static RingSpec gaussian() { return {Kind::Gaussian, 0}; }
  static RingSpec quadratic(long long d) { return {Kind::Quadratic, d}; }
};

/// An order in an etale Q-algebra, realized as Z^n with a multiplication
/// table and the archimedean embeddings. Immutable after construction.
class Ring {
 public:
  Ring(std::string label, MulTable table, std::vector<Integer> one, EmbeddingMatrix embedding,
       bool validated)
      : label_(std::move(label)),
        table_(std::move(table)),
        one_(std::move(one)),
        embedding_(std::move(embedding)),
        validated_(validated) {
    const std::size_t n = one_.size();
    if (n == 0) throw Error(ErrorKind::InvalidDegree, "ring degree must be positive");
    if (table_.size() != n || embedding_.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "multiplication table / embedding size");
    }
    for (const auto& row : table_) {
      if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "multiplication table row");
      for (const auto& v : row) {
        if (v.size() != n) throw Error(ErrorKind::DimensionMismatch, "multiplication table entry");
      }
    }
    for (const auto& row : embedding_) {
      if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "embedding row");
    }
    compute_inverse();
    coordinate_norm_ = true;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        const Complex& c = embedding_[k][j];
        if (c.im != 0 || c.re != (k == j ? 1 : 0)) coordinate_norm_ = false;
      }
    }
  }

  std::size_t degree() const { return one_.size(); }
  const std::string& label() const { return label_; }
  const MulTable& mul_table() const { return table_; }
  Element one() const { return Element(one_); }
  const EmbeddingMatrix& embedding() const { return embedding_; }
  /// False for user-supplied tables ("unvalidated order").
  bool validated() const { return validated_; }

  Element basis(std::size_t j) const {
    Element e = Element::zero(degree());
    e.coords.at(j) = 1;
    return e;
  }

  /// Per-coordinate growth of the coordinate box containing B_N: |x_i| <= N * box_factor(i).
  const Real& box_factor(std::size_t i) const { return box_factor_[i]; }

  /// True when sup_norm is the max of |coordinates| (Z and Z^m); balls are boxes.
  bool coordinate_norm() const { return coordinate_norm_; }

  /// Structural equality (same tables and embedding).
  bool same_as(const Ring& other) const {
    if (this == &other) return true;
    return label_ == other.label_ && table_ == other.table_ && one_ == other.one_;
  }

 private:
  void compute_inverse() {
    // Gauss-Jordan over C with partial pivoting; only the row sums of |inverse| are kept.
    const std::size_t n = degree();
    std::vector<std::vector<Complex>> a = embedding_;
    std::vector<std::vector<Complex>> inv(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i].re = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r) {
        if (a[r][c].abs2() > a[piv][c].abs2()) piv = r;
      }
      if (a[piv][c].abs2() < Real(1e-60)) {
        throw Error(ErrorKind::InvalidDegree, "embedding matrix is singular");
      }
      std::swap(a[c], a[piv]);
      std::swap(inv[c], inv[piv]);
      Complex p = a[c][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[c][k] = a[c][k] / p;
        inv[c][k] = inv[c][k] / p;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c) continue;
        Complex f = a[r][c];
        if (f.abs2() == 0) continue;
        for (std::size_t k = 0; k < n; ++k) {
          a[r][k] = a[r][k] - f * a[c][k];
          inv[r][k] = inv[r][k] - f * inv[c][k];
        }
      }
    }
    box_factor_.assign(n, Real(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) box_factor_[i] += inv[i][k].abs();
    }
  }

  std::string label_;
  MulTable table_;
  std::vector<Integer> one_;
  EmbeddingMatrix embedding_;
  bool validated_;
  std::vector<Real> box_factor_;
  bool coordinate_norm_ = false;
};

using RingPtr = std::shared_ptr<const Ring>;

namespace detail {

inline bool is_squarefree(long long d) {
  long long a = d < 0 ? -d : d;
  if (a == 0) return false;
  for (long long p = 2; p * p <= a; ++p) {
    if (a % (p * p) == 0) return false;
  }
  return true;
}

inline MulTable zero_table(std::size_t n) {
  return MulTable(n, std::vector<std::vector<Integer>>(n, std::vector<Integer>(n, Integer(0))));
}

}  // namespace detail

inline RingPtr make_ring(const RingSpec& spec) {
  using K = RingSpec::Kind;
  switch (spec.kind) {
    case K::Integers: {
      MulTable t = detail::zero_table(1);
      t[0][0][0] = 1;
      EmbeddingMatrix e{{Complex{Real(1), Real(0)}}};
      return std::make_shared<const Ring>("integers", std::move(t), std::vector<Integer>{1},
                                          std::move(e), true);
    }
    case K::ProductIntegers: {
      if (spec.param < 1) {
        throw Error(ErrorKind::InvalidDegree, "product_integers needs m >= 1");
      }
      const auto n = static_cast<std::size_t>(spec.param);
      MulTable t = detail::zero_table(n);
      EmbeddingMatrix e(n, std::vector<Complex>(n));
      for (std::size_t i = 0; i < n; ++i) {
        t[i][i][i] = 1;
        e[i][i].re = 1;
      }
      return std::make_shared<const Ring>("product_integers(" + std::to_string(n) + ")",
                                          std::move(t), std::vector<Integer>(n, Integer(1)),
                                          std::move(e), true);
    }
    case K::Gaussian:
    case K::Quadratic: {
      const long long d = spec.kind == K::Gaussian ? -1 : spec.param;
      if (d == 1) throw Error(ErrorKind::InvalidDegree, "quadratic(1) is not a field");
      if (!detail::is_squarefree(d)) {
        throw Error(ErrorKind::NonSquarefreeDiscriminant, "d = " + std::to_string(d));
      }
      MulTable t = detail::zero_table(2);
      t[0][0] = {1, 0};
      t[0][1] = {0, 1};
      t[1][0] = {0, 1};
      Complex sqrt_d = d > 0 ? Complex{boost::multiprecision::sqrt(Real(d)), Real(0)}
                             : Complex{Real(0), boost::multiprecision::sqrt(Real(-d))};
      EmbeddingMatrix e(2, std::vector<Complex>(2));
      e[0][0].re = 1;
      e[1][0].re = 1;
      const long long dmod4 = ((d % 4) + 4) % 4;
      if (dmod4 == 1) {
        // omega = (1 + sqrt d)/2, omega^2 = omega + (d-1)/4
        t[1][1] = {Integer((d - 1) / 4), Integer(1)};
        Complex half{Real(0.5), Real(0)};
        e[0][1] = half + Complex{sqrt_d.re / 2, sqrt_d.im / 2};
        e[1][1] = half - Complex{sqrt_d.re / 2, sqrt_d.im / 2};
      } else {
        t[1][1] = {Integer(d), Integer(0)};
        e[0][1] = sqrt_d;
        e[1][1] = Complex{-sqrt_d.re, -sqrt_d.im};
      }
      std::string label = spec.kind == K::Gaussian ? "gaussian" : "quadratic(" + std::to_string(d) + ")";
      return std::make_shared<const Ring>(std::move(label), std::move(t), std::vector<Integer>{1, 0},
                                          std::move(e), true);
    }
  }
  throw Error(ErrorKind::InvalidDegree, "unknown ring kind");
}

/// A ring from a user multiplication table; flagged as an unvalidated order.
inline RingPtr make_custom_ring(std::string label, MulTable table, std::vector<Integer> one,
                                EmbeddingMatrix embedding) {
  return std::make_shared<const Ring>(std::move(label), std::move(table), std::move(one),
                                      std::move(embedding), false);
}

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

inline void check_dim(const Ring& ring, const Element& x) {
  if (x.size() != ring.degree()) {
    throw Error(ErrorKind::DimensionMismatch, "element " + x.str() + " in ring of degree " +
                                                  std::to_string(ring.degree()));
  }
}

inline Element mul(const Ring& ring, const Element& x, const Element& y) {
  check_dim(ring, x);
  check_dim(ring, y);
  const std::size_t n = ring.degree();
  const auto& t = ring.mul_table();
  Element r = Element::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x.coords[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (y.coords[j] == 0) continue;
      Integer c = x.coords[i] * y.coords[j];
      for (std::size_t k = 0; k < n; ++k) {
        if (t[i][j][k] != 0) r.coords[k] += c * t[i][j][k];
      }
    }
  }
  return r;
}

/// Image of x under the k-th embedding.
inline Complex embed(const Ring& ring, std::size_t k, const Element& x) {
  check_dim(ring, x);
  Complex acc;
  const auto& row = ring.embedding()[k];
  for (std::size_t j = 0; j < ring.degree(); ++j) {
    if (x.coords[j] == 0) continue;
    Real c(x.coords[j]);
    acc.re += row[j].re * c;
    acc.im += row[j].im * c;
  }
  return acc;
}

inline Real sup_norm_sq(const Ring& ring, const Element& x) {
  Real best(0);
  for (std::size_t k = 0; k < ring.degree(); ++k) best = std::max(best, embed(ring, k, x).abs2());
  return best;
}

/// max_k |phi_k(x)|.
inline Real sup_norm(const Ring& ring, const Element& x) {
  return boost::multiprecision::sqrt(sup_norm_sq(ring, x));
}

/// Relative tolerance applied in favour of inclusion at ball boundaries.
inline constexpr double kBallTolerance = 1e-9;
inline constexpr std::size_t kDefaultPointCap = 100'000'000;

inline bool within_ball(const Ring& ring, const Element& x, const Real& radius) {
  Real lim = radius * (1 + Real(kBallTolerance));
  return sup_norm_sq(ring, x) <= lim * lim;
}

/// Half-width of the integer coordinate box containing B_N.
inline std::vector<Coord> ball_box_radius(const Ring& ring, const Real& radius) {
  std::vector<Coord> r(ring.degree());
  for (std::size_t i = 0; i < ring.degree(); ++i) {
    Real bound = radius * ring.box_factor(i) * (1 + Real(kBallTolerance)) + Real(1e-12);
    Real f = boost::multiprecision::floor(bound);
    if (f > Real(1e15)) throw Error(ErrorKind::WindowTooLarge, "ball radius too large");
    r[i] = static_cast<Coord>(f.convert_to<long long>());
  }
  return r;
}

namespace detail {

inline Integer box_count(const std::vector<Coord>& half) {
  Integer total(1);
  for (Coord h : half) total *= Integer(2 * h + 1);
  return total;
}

/// Calls f on every point of prod [-h_i, h_i] in lexicographic order.
template <class F>
void for_each_box_point(const std::vector<Coord>& lo, const std::vector<Coord>& hi, F&& f) {
  const std::size_t n = lo.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) return;
  }
  std::vector<Coord> cur(lo);
  while (true) {
    f(cur);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (cur[k] < hi[k]) {
        ++cur[k];
        for (std::size_t m = k + 1; m < n; ++m) cur[m] = lo[m];
        break;
      }
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

inline Element to_element(const std::vector<Coord>& p) {
  Element e;
  e.coords.reserve(p.size());
  for (Coord c : p) e.coords.emplace_back(c);
  return e;
}

}  // namespace detail

/// B_N = {x : sup_norm(x) <= N} in lexicographic coordinate order.
inline std::vector<Element> ball_points(const Ring& ring, const Real& radius,
                                        std::size_t cap = kDefaultPointCap) {
  if (radius < 0) throw Error(ErrorKind::WindowTooLarge, "negative radius");
  auto half = ball_box_radius(ring, radius);
  if (detail::box_count(half) > Integer(cap)) {
    throw Error(ErrorKind::WindowTooLarge, "ball bounding box exceeds point cap");
  }
  std::vector<Coord> lo(half.size()), hi(half);
  for (std::size_t i = 0; i < half.size(); ++i) lo[i] = -half[i];
  std::vector<Element> out;
  detail::for_each_box_point(lo, hi, [&](const std::vector<Coord>& p) {
    Element e = detail::to_element(p);
    if (within_ball(ring, e, radius)) out.push_back(std::move(e));
  });
  return out;
}

}  // namespace sievelab
