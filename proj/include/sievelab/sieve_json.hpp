#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "catalog.hpp"
#include "error.hpp"
#include "hnf.hpp"
#include "ideals.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace sievelab {

/// "integers", "gaussian", "product_integers(m)" or "quadratic(d)".
inline RingPtr ring_from_string(const std::string& text) {
  if (text == "integers") return make_ring(RingSpec::integers());
  if (text == "gaussian") return make_ring(RingSpec::gaussian());
  auto open = text.find('(');
  if (open != std::string::npos && text.back() == ')') {
    std::string head = text.substr(0, open);
    std::string arg = text.substr(open + 1, text.size() - open - 2);
    long long v = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ConfigError, "bad ring argument in '" + text + "'");
    }
    if (head == "product_integers") return make_ring(RingSpec::product_integers(v));
    if (head == "quadratic") return make_ring(RingSpec::quadratic(v));
  }
  throw Error(ErrorKind::ConfigError, "unknown ring '" + text + "'");
}

namespace detail {

inline Json integer_to_json(const Integer& v) {
  if (fits_coord(v)) return static_cast<long long>(v);
  return v.str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::ConfigError, "expected an integer, got " + j.dump());
}

inline Json element_to_json(const Element& x) {
  Json a = Json::array();
  for (const auto& v : x.coords) a.push_back(integer_to_json(v));
  return a;
}

inline Element element_from_json(const Json& j, std::size_t n) {
  if (n == 1 && !j.is_array()) return Element(std::vector<Integer>{integer_from_json(j)});
  if (!j.is_array() || j.size() != n) {
    throw Error(ErrorKind::ConfigError, "element must have " + std::to_string(n) + " coordinates");
  }
  std::vector<Integer> c;
  for (const auto& v : j) c.push_back(integer_from_json(v));
  return Element(std::move(c));
}

}  // namespace detail

/// Catalog sieves: {ring, name, params}. Other sieves: {ring, name, terms} with
/// the first L terms written out as {basis (rows), residues, protected}.
inline Json sieve_to_json(const Sieve& sieve, std::size_t L) {
  Json j;
  j["ring"] = sieve.ring().label();
  j["name"] = sieve.name();
  const auto& entries = catalog_entries();
  bool in_catalog = std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.name == sieve.name(); });
  if (in_catalog) {
    Json p = Json::object();
    for (const auto& [k, v] : sieve.params()) p[k] = v;
    j["params"] = p;
    return j;
  }
  Json terms = Json::array();
  for (const SieveTerm* t : sieve.terms(L)) {
    Json tj;
    Json basis = Json::array();
    for (const auto& row : t->ideal.basis()) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(detail::integer_to_json(v));
      basis.push_back(r);
    }
    tj["basis"] = basis;
    Json res = Json::array();
    for (const auto& s : t->residues) res.push_back(detail::element_to_json(s));
    tj["residues"] = res;
    Json prot = Json::array();
    for (const auto& s : t->protected_points) prot.push_back(detail::element_to_json(s));
    tj["protected"] = prot;
    terms.push_back(tj);
  }
  j["terms"] = terms;
  return j;
}

inline Sieve sieve_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "sieve document must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "ring" && k != "name" && k != "params" && k != "terms") {
      throw Error(ErrorKind::ConfigError, "unknown key '" + k + "' in sieve document");
    }
  }
  if (j.contains("params") == j.contains("terms")) {
    throw Error(ErrorKind::ConfigError, "sieve document needs exactly one of 'params' or 'terms'");
  }
  if (j.contains("params")) {
    if (!j.contains("name")) throw Error(ErrorKind::ConfigError, "catalog sieve needs 'name'");
    ParamRecord p;
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      p[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
    Sieve s = catalog(j["name"].get<std::string>(), p);
    if (j.contains("ring") && j["ring"].get<std::string>() != s.ring().label()) {
      throw Error(ErrorKind::ConfigError, "ring '" + j["ring"].get<std::string>() + "' does not match catalog entry");
    }
    return s;
  }
  if (!j.contains("ring")) throw Error(ErrorKind::ConfigError, "custom sieve needs 'ring'");
  RingPtr ring = ring_from_string(j["ring"].get<std::string>());
  const std::size_t n = ring->degree();
  std::vector<SieveTerm> terms;
  for (const auto& tj : j["terms"]) {
    if (!tj.contains("basis") || !tj["basis"].is_array() || tj["basis"].size() != n) {
      throw Error(ErrorKind::ConfigError, "term basis must be an n x n matrix");
    }
    IntMatrix m;
    for (const auto& row : tj["basis"]) {
      if (!row.is_array() || row.size() != n) throw Error(ErrorKind::ConfigError, "term basis must be n x n");
      std::vector<Integer> r;
      for (const auto& v : row) r.push_back(detail::integer_from_json(v));
      m.push_back(std::move(r));
    }
    std::vector<Element> res, prot;
    if (tj.contains("residues")) {
      for (const auto& s : tj["residues"]) res.push_back(detail::element_from_json(s, n));
    }
    if (tj.contains("protected")) {
      for (const auto& s : tj["protected"]) prot.push_back(detail::element_from_json(s, n));
    }
    terms.push_back(make_term(terms.size() + 1, IdealLattice::from_columns(ring, m), res, std::move(prot)));
  }
  return Sieve::finite(ring, j.value("name", std::string("custom")), std::move(terms));
}

inline Sieve sieve_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open sieve file '" + path + "'");
  try {
    return sieve_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, "sieve file '" + path + "': " + e.what());
  }
}

}  // namespace sievelab
