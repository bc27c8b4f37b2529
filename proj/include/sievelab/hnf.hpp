#pragma once

#include <cstddef>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"

namespace sievelab {

/// Row-major integer matrix; columns are lattice generators.
using IntMatrix = std::vector<std::vector<Integer>>;

inline IntMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, std::vector<Integer>(cols, Integer(0)));
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline std::size_t cols(const IntMatrix& m) { return m.empty() ? 0 : m[0].size(); }

namespace detail {

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

inline void col_combine(IntMatrix& m, std::size_t i, std::size_t j, const Integer& a,
                        const Integer& b, const Integer& c, const Integer& d) {
  // (col_i, col_j) <- (a*col_i + b*col_j, c*col_i + d*col_j)
  for (auto& row : m) {
    Integer x = row[i], y = row[j];
    row[i] = a * x + b * y;
    row[j] = c * x + d * y;
  }
}

inline void col_swap(IntMatrix& m, std::size_t i, std::size_t j) {
  for (auto& row : m) std::swap(row[i], row[j]);
}

inline void col_negate(IntMatrix& m, std::size_t i) {
  for (auto& row : m) row[i] = -row[i];
}

inline void col_axpy(IntMatrix& m, std::size_t dst, const Integer& q, std::size_t src) {
  // col_dst -= q * col_src
  for (auto& row : m) row[dst] -= q * row[src];
}

}  // namespace detail

struct HnfResult {
  IntMatrix h;  // n x k; first n columns lower-triangular, rest zero
  IntMatrix u;  // k x k unimodular with m * u = h
};

/// Column Hermite normal form with the unimodular transform. Requires full
/// row rank; the first n columns of `h` are lower-triangular with positive
/// diagonal and row-i entries left of the diagonal reduced into [0, h[i][i]).
inline HnfResult hnf_with_transform(IntMatrix m) {
  const std::size_t n = m.size();
  const std::size_t k = cols(m);
  if (k < n) throw Error(ErrorKind::RankDeficient, "fewer generators than the dimension");
  IntMatrix u = identity_matrix(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (m[i][j] == 0) continue;
      if (m[i][i] == 0) {
        detail::col_swap(m, i, j);
        detail::col_swap(u, i, j);
        continue;
      }
      Integer a = m[i][i], b = m[i][j];
      auto [g, s, t] = detail::ext_gcd(a, b);
      Integer bg = b / g, ag = a / g;
      detail::col_combine(m, i, j, s, t, -bg, ag);
      detail::col_combine(u, i, j, s, t, -bg, ag);
    }
    if (m[i][i] == 0) throw Error(ErrorKind::RankDeficient, "generators do not span a full-rank lattice");
    if (m[i][i] < 0) {
      detail::col_negate(m, i);
      detail::col_negate(u, i);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Integer q = floor_div(m[i][j], m[i][i]);
      if (q == 0) continue;
      detail::col_axpy(m, j, q, i);
      detail::col_axpy(u, j, q, i);
    }
  }
  return {std::move(m), std::move(u)};
}

/// Square lower-triangular HNF basis of the lattice spanned by the columns.
inline IntMatrix hnf(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty matrix");
  for (const auto& row : m) {
    if (row.size() != cols(m)) throw Error(ErrorKind::DimensionMismatch, "ragged matrix");
  }
  HnfResult r = hnf_with_transform(m);
  IntMatrix out = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = r.h[i][j];
  }
  return out;
}

/// Solves the lower-triangular system basis * y = x; nullopt if there is no
/// integer solution.
inline std::optional<std::vector<Integer>> solve_lower(const IntMatrix& basis,
                                                       const std::vector<Integer>& x) {
  const std::size_t n = basis.size();
  std::vector<Integer> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer rhs = x[i];
    for (std::size_t j = 0; j < i; ++j) rhs -= basis[i][j] * y[j];
    if (rhs % basis[i][i] != 0) return std::nullopt;
    y[i] = rhs / basis[i][i];
  }
  return y;
}

/// Integer solution of m * y = t for a full-row-rank m, or nullopt.
inline std::optional<std::vector<Integer>> solve_integer(const IntMatrix& m,
                                                         const std::vector<Integer>& t) {
  const std::size_t n = m.size();
  const std::size_t k = cols(m);
  HnfResult r = hnf_with_transform(m);
  IntMatrix tri = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) tri[i][j] = r.h[i][j];
  }
  auto w = solve_lower(tri, t);
  if (!w) return std::nullopt;
  std::vector<Integer> y(k, Integer(0));
  for (std::size_t row = 0; row < k; ++row) {
    for (std::size_t j = 0; j < n; ++j) y[row] += r.u[row][j] * (*w)[j];
  }
  return y;
}

inline Integer determinant_lower(const IntMatrix& basis) {
  Integer d(1);
  for (std::size_t i = 0; i < basis.size(); ++i) d *= basis[i][i];
  return d;
}

}  // namespace sievelab
