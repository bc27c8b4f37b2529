#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "ideals.hpp"
#include "numeric.hpp"
#include "sieve.hpp"

namespace sievelab {

/// One line of the catalog listing.
struct CatalogEntry {
  std::string name;
  std::string ring;
  std::string params;  // parameter schema, human readable
  std::string summary;
};

inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"kfree", "integers", "k=int>=2 (default 2)", "b_i = p_i^k Z, S = {0}: the k-free integers"},
      {"squarefree", "integers", "", "alias of kfree:k=2"},
      {"poly_squarefree", "integers", "f=c0,c1,...,cd (constant first)",
       "b_p = p^2 Z, S_p = {x : f(x) = 0 mod p^2}"},
      {"visible_points", "product_integers(dim)", "dim=int>=1 (default 2)",
       "b_p = pZ x ... x pZ, S = {0}: visible lattice points"},
      {"gaussian_inert", "gaussian", "", "b = pZ[i] for p = 3 mod 4, S_p = {0,...,p-1}"},
      {"no_density", "integers", "",
       "R_i = i*1_S(i) + p_i^4 Z, S = union (2^(2^(2k)), 2^(2^(2k+1))]: no logarithmic density"},
      {"weak_not_strong", "integers", "", "R_i = 1+4(i-1) + p_i^2 Z: weak but not strong light tails"},
      {"weak_not_strong_W", "integers", "",
       "W_1 = 1+4Z, W_2i = 1+4(i-1) + p_2i^2 Z, W_2i+1 = 1-4(i-1) + p_2i+1^2 Z"},
      {"weak_not_strong_Wprime", "integers", "", "W'_i = W_{i+1}"},
      {"growing_residues", "integers", "", "R_i = {p_i^3 + j : 1 <= j <= p_i} + p_i^4 Z"},
      {"v_bounded", "integers", "", "R_i = {j p_i : 1 <= j <= ceil(sqrt(log i))} + p_i^2 Z"},
      {"erdos_shifted", "integers",
       "b=b1,b2,... r=r1,r2,... | power=int>=1, shift_seed=int (generated: b_i = p_i^power)",
       "R_i = {r_i + k b_i : k >= 1}: base point r_i protected"},
  };
  return entries;
}

namespace detail {

inline long long param_int(const ParamRecord& p, const std::string& key, long long fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidParams, "parameter " + key + " = '" + it->second + "' is not an integer");
  }
}

inline std::vector<Integer> param_list(const ParamRecord& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw Error(ErrorKind::InvalidParams, "missing parameter " + key);
  std::vector<Integer> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw Error(ErrorKind::InvalidParams, "empty entry in list " + key);
    try {
      out.emplace_back(cur);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParams, "bad integer '" + cur + "' in " + key);
    }
    cur.clear();
  };
  for (char ch : it->second) {
    if (ch == ',' || ch == ';') {
      flush();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  flush();
  return out;
}

inline void check_known(const ParamRecord& p, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw Error(ErrorKind::InvalidParams, "unknown parameter " + k);
  }
}

inline SieveTerm int_term(const RingPtr& z, std::size_t i, const Integer& modulus,
                          const std::vector<Integer>& res, std::vector<Element> protect = {}) {
  std::vector<Element> rs;
  rs.reserve(res.size());
  for (const auto& r : res) rs.emplace_back(std::vector<Integer>{r});
  return make_term(i, scalar_ideal(z, modulus), rs, std::move(protect));
}

/// 1_S(i) for S = union over k >= 0 of (2^(2^(2k)), 2^(2^(2k+1))].
inline bool in_no_density_set(std::uint64_t i) {
  // k = 0: (2, 4]; k = 1: (16, 256]; k = 2: (65536, 2^32]; k = 3 starts above 2^64.
  return (i > 2 && i <= 4) || (i > 16 && i <= 256) || (i > 65536 && i <= (std::uint64_t{1} << 32));
}


}  // namespace detail

/// The named example sieves. Unknown names raise UnknownCatalogEntry, bad
/// parameters InvalidParams.
inline Sieve catalog(const std::string& name, const ParamRecord& params = {}) {
  using detail::int_term;
  using detail::ipow;
  const RingPtr z = make_ring(RingSpec::integers());

  if (name == "kfree" || name == "squarefree") {
    detail::check_known(params, {"k"});
    long long k = name == "squarefree" ? 2 : detail::param_int(params, "k", 2);
    if (name == "squarefree" && params.count("k")) throw Error(ErrorKind::InvalidParams, "squarefree takes no k");
    if (k < 1 || k > 64) throw Error(ErrorKind::InvalidParams, "k must be in [1, 64]");
    return Sieve(z, name, params, [z, k](std::size_t i) {
      return int_term(z, i, ipow(nth_prime(i), static_cast<unsigned>(k)), {Integer(0)});
    });
  }

  if (name == "poly_squarefree") {
    detail::check_known(params, {"f"});
    auto f = detail::param_list(params, "f");
    return Sieve(z, name, params, [z, f](std::size_t i) {
      std::uint64_t p = nth_prime(i);
      auto roots = poly_roots_mod(f, p * p);
      std::vector<Integer> rs(roots.begin(), roots.end());
      return int_term(z, i, Integer(p * p), rs);
    });
  }

  if (name == "visible_points") {
    detail::check_known(params, {"dim"});
    long long dim = detail::param_int(params, "dim", 2);
    if (dim < 1 || dim > 8) throw Error(ErrorKind::InvalidParams, "dim must be in [1, 8]");
    RingPtr ring = make_ring(RingSpec::product_integers(dim));
    return Sieve(ring, name, params, [ring](std::size_t i) {
      return make_term(i, scalar_ideal(ring, Integer(nth_prime(i))), {Element::zero(ring->degree())});
    });
  }

  if (name == "gaussian_inert") {
    detail::check_known(params, {});
    RingPtr ring = make_ring(RingSpec::gaussian());
    return Sieve(ring, name, params, [ring](std::size_t i) {
      // i-th prime congruent to 3 mod 4
      std::size_t seen = 0, k = 0;
      std::uint64_t p = 0;
      while (seen < i) {
        p = nth_prime(++k);
        if (p % 4 == 3) ++seen;
      }
      std::vector<Element> rs;
      for (std::uint64_t j = 0; j < p; ++j) rs.push_back(Element{static_cast<long long>(j), 0});
      return make_term(i, scalar_ideal(ring, Integer(p)), rs);
    });
  }

  if (name == "no_density") {
    detail::check_known(params, {});
    return Sieve(z, name, params, [z](std::size_t i) {
      Integer r = detail::in_no_density_set(i) ? Integer(i) : Integer(0);
      return int_term(z, i, ipow(nth_prime(i), 4), {r});
    });
  }

  if (name == "weak_not_strong") {
    detail::check_known(params, {});
    return Sieve(z, name, params, [z](std::size_t i) {
      std::uint64_t p = nth_prime(i);
      return int_term(z, i, Integer(p * p), {Integer(1 + 4 * (static_cast<long long>(i) - 1))});
    });
  }

  if (name == "weak_not_strong_W" || name == "weak_not_strong_Wprime") {
    detail::check_known(params, {});
    const std::size_t shift = name == "weak_not_strong_W" ? 0 : 1;
    return Sieve(z, name, params, [z, shift](std::size_t idx) {
      const std::size_t m = idx + shift;  // index into W
      std::uint64_t p = nth_prime(m);
      if (m == 1) return int_term(z, idx, Integer(4), {Integer(1)});
      const long long i = static_cast<long long>(m / 2);
      const long long r = (m % 2 == 0) ? 1 + 4 * (i - 1) : 1 - 4 * (i - 1);
      return int_term(z, idx, Integer(p * p), {Integer(r)});
    });
  }

  if (name == "growing_residues") {
    detail::check_known(params, {});
    return Sieve(z, name, params, [z](std::size_t i) {
      std::uint64_t p = nth_prime(i);
      Integer p3 = ipow(p, 3);
      std::vector<Integer> rs;
      for (std::uint64_t j = 1; j <= p; ++j) rs.push_back(p3 + j);
      return int_term(z, i, ipow(p, 4), rs);
    });
  }

  if (name == "v_bounded") {
    detail::check_known(params, {});
    return Sieve(z, name, params, [z](std::size_t i) {
      std::uint64_t p = nth_prime(i);
      const auto count = static_cast<std::uint64_t>(std::ceil(std::sqrt(std::log(static_cast<double>(i)))));
      std::vector<Integer> rs;
      for (std::uint64_t j = 1; j <= count; ++j) rs.push_back(Integer(j * p));
      return int_term(z, i, Integer(p * p), rs);
    });
  }

  if (name == "erdos_shifted") {
    detail::check_known(params, {"b", "r", "power", "shift_seed"});
    auto shifted = [z](std::size_t i, const Integer& b, const Integer& r) {
      if (b <= 0 || r < 0 || r >= b) {
        throw Error(ErrorKind::InvalidParams, "need 0 <= r_i < b_i at term " + std::to_string(i));
      }
      return int_term(z, i, b, {r}, {Element(std::vector<Integer>{r})});
    };
    if (params.count("b") || params.count("r")) {
      if (params.count("power") || params.count("shift_seed")) {
        throw Error(ErrorKind::InvalidParams, "give either b/r lists or power/shift_seed");
      }
      auto b = detail::param_list(params, "b");
      auto r = detail::param_list(params, "r");
      if (b.size() != r.size()) throw Error(ErrorKind::InvalidParams, "b and r lengths differ");
      std::vector<SieveTerm> terms;
      for (std::size_t i = 0; i < b.size(); ++i) terms.push_back(shifted(i + 1, b[i], r[i]));
      return Sieve::finite(z, name, std::move(terms), params);
    }
    long long power = detail::param_int(params, "power", 2);
    long long seed = detail::param_int(params, "shift_seed", 1);
    if (power < 1 || power > 16) throw Error(ErrorKind::InvalidParams, "power must be in [1, 16]");
    return Sieve(z, name, params, [shifted, power, seed](std::size_t i) {
      Integer b = ipow(nth_prime(i), static_cast<unsigned>(power));
      std::uint64_t h = detail::splitmix64(static_cast<std::uint64_t>(seed) * 1000003ULL + i);
      return shifted(i, b, Integer(h) % b);
    });
  }

  throw Error(ErrorKind::UnknownCatalogEntry, name);
}

/// Parses `name:key=value,key=value`. A comma-separated token without '='
/// continues the previous value, so lists read naturally: `f=1,0,1`.
inline std::pair<std::string, ParamRecord> parse_selector(const std::string& selector) {
  auto colon = selector.find(':');
  std::string name = selector.substr(0, colon);
  ParamRecord params;
  if (colon == std::string::npos) return {name, params};
  std::string rest = selector.substr(colon + 1);
  std::string last;
  std::size_t start = 0;
  while (start <= rest.size()) {
    std::size_t comma = rest.find(',', start);
    std::string tok = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) {
        if (last.empty()) throw Error(ErrorKind::ConfigError, "malformed selector token '" + tok + "'");
        params[last] += "," + tok;
      } else {
        last = tok.substr(0, eq);
        if (last.empty()) throw Error(ErrorKind::ConfigError, "empty key in selector");
        params[last] = tok.substr(eq + 1);
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return {name, params};
}

inline Sieve catalog_from_selector(const std::string& selector) {
  auto [name, params] = parse_selector(selector);
  return catalog(name, params);
}

}  // namespace sievelab
