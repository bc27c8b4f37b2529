#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace sievelab {

using Integer = boost::multiprecision::cpp_int;
/// 113-bit mantissa; used for embeddings and norms.
using Real = boost::multiprecision::cpp_bin_float_quad;
using Coord = std::int64_t;

/// Floor division, b != 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  return -floor_div(-a, b);
}

/// Representative of a in [0, |m|).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += (m < 0 ? -m : m);
  return r;
}

inline bool fits_coord(const Integer& v) {
  return v >= Integer(std::numeric_limits<Coord>::min() / 4) &&
         v <= Integer(std::numeric_limits<Coord>::max() / 4);
}

inline Coord to_coord(const Integer& v) {
  if (!fits_coord(v)) {
    throw Error(ErrorKind::WindowTooLarge, "coordinate " + v.str() + " exceeds 64-bit window range");
  }
  return static_cast<Coord>(v);
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}


inline Integer ipow(std::uint64_t p, unsigned k) {
  Integer r(1);
  for (unsigned i = 0; i < k; ++i) r *= p;
  return r;
}

}  // namespace detail

inline long double to_ld(const Integer& v) { return v.convert_to<long double>(); }

}  // namespace sievelab
