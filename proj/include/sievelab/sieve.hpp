#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "ideals.hpp"
#include "numeric.hpp"
#include "window.hpp"

namespace sievelab {

// ---------------------------------------------------------------------------
// Primes and polynomial roots
// ---------------------------------------------------------------------------

namespace detail {

class PrimeTable {
 public:
  std::uint64_t nth(std::size_t i) {
    std::lock_guard<std::mutex> lock(mu_);
    while (primes_.size() < i) grow();
    return primes_[i - 1];
  }

 private:
  void grow() {
    limit_ = limit_ == 0 ? 1024 : limit_ * 2;
    std::vector<bool> composite(limit_ + 1, false);
    primes_.clear();
    for (std::uint64_t p = 2; p <= limit_; ++p) {
      if (composite[p]) continue;
      primes_.push_back(p);
      for (std::uint64_t q = p * p; q <= limit_; q += p) composite[q] = true;
    }
  }

  std::mutex mu_;
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

inline PrimeTable& prime_table() {
  static PrimeTable table;
  return table;
}

}  // namespace detail

/// The i-th prime, p_1 = 2.
inline std::uint64_t nth_prime(std::size_t i) {
  if (i == 0) throw Error(ErrorKind::InvalidParams, "prime index starts at 1");
  return detail::prime_table().nth(i);
}

inline constexpr std::uint64_t kMaxPolyModulus = 10'000'000;

/// All x in [0, m) with f(x) = 0 mod m; coefficients constant first.
inline std::vector<std::uint64_t> poly_roots_mod(const std::vector<Integer>& f, std::uint64_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidParams, "modulus must be positive");
  if (m > kMaxPolyModulus) throw Error(ErrorKind::ModulusTooLarge, std::to_string(m));
  std::vector<std::int64_t> c;
  const Integer mm(m);
  for (const auto& a : f) c.push_back(static_cast<std::int64_t>(mod_floor(a, mm)));
  std::vector<std::uint64_t> roots;
  const auto M = static_cast<unsigned __int128>(m);
  for (std::uint64_t x = 0; x < m; ++x) {
    unsigned __int128 acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = (acc * x + static_cast<std::uint64_t>(c[k])) % M;
    if (acc == 0) roots.push_back(x);
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Terms and sieves
// ---------------------------------------------------------------------------

/// R_i = (S_i + b_i) minus the protected points. Residues are canonical,
/// distinct, and sorted; protected points are only used by sieves that
/// remove a congruence class except for its base point.
struct SieveTerm {
  std::size_t index = 0;
  IdealLattice ideal;
  std::vector<Element> residues;
  std::vector<Element> protected_points;

  /// |R_i| as a count of classes in O_K / b_i.
  std::size_t residue_count() const { return residues.size(); }
  /// |R_i^c| = N(b_i) - |R_i|.
  Integer complement_count() const { return ideal.norm() - Integer(residues.size()); }
  /// vol(R_i) = |R_i| / N(b_i).
  long double volume() const { return static_cast<long double>(residues.size()) / to_ld(ideal.norm()); }

  bool contains(const Element& x) const {
    Element r = ideal.canonical_residue(x);
    if (!std::binary_search(residues.begin(), residues.end(), r)) return false;
    return std::find(protected_points.begin(), protected_points.end(), x) == protected_points.end();
  }
};

inline SieveTerm make_term(std::size_t index, IdealLattice ideal, const std::vector<Element>& residues,
                           std::vector<Element> protected_points = {}) {
  SieveTerm t{index, std::move(ideal), {}, std::move(protected_points)};
  t.residues.reserve(residues.size());
  for (const auto& s : residues) t.residues.push_back(t.ideal.canonical_residue(s));
  std::sort(t.residues.begin(), t.residues.end());
  t.residues.erase(std::unique(t.residues.begin(), t.residues.end()), t.residues.end());
  return t;
}

using TermGenerator = std::function<SieveTerm(std::size_t)>;
using ParamRecord = std::map<std::string, std::string>;

/// An ordered family of terms generated lazily by index (1-based). Every
/// computation takes an explicit truncation level L; finite sieves report
/// their length and reject indices beyond it.
class Sieve {
 public:
  Sieve(RingPtr ring, std::string name, ParamRecord params, TermGenerator gen,
        std::optional<std::size_t> length = std::nullopt)
      : ring_(std::move(ring)),
        name_(std::move(name)),
        params_(std::move(params)),
        state_(std::make_shared<State>()),
        length_(length) {
    state_->gen = std::move(gen);
  }

  static Sieve finite(RingPtr ring, std::string name, std::vector<SieveTerm> terms,
                      ParamRecord params = {}) {
    auto shared = std::make_shared<std::vector<SieveTerm>>(std::move(terms));
    for (std::size_t i = 0; i < shared->size(); ++i) (*shared)[i].index = i + 1;
    const std::size_t n = shared->size();
    return Sieve(std::move(ring), std::move(name), std::move(params),
                 [shared](std::size_t i) { return (*shared)[i - 1]; }, n);
  }

  const Ring& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  const std::string& name() const { return name_; }
  const ParamRecord& params() const { return params_; }
  std::optional<std::size_t> length() const { return length_; }
  bool is_finite() const { return length_.has_value(); }

  /// min(L, length).
  std::size_t available(std::size_t L) const { return length_ ? std::min(L, *length_) : L; }

  const SieveTerm& term(std::size_t i) const {
    if (i == 0 || (length_ && i > *length_)) {
      throw Error(ErrorKind::InvalidParams, "term index " + std::to_string(i) + " out of range",
                  static_cast<long>(i));
    }
    std::lock_guard<std::mutex> lock(state_->mu);
    auto& cache = state_->cache;
    while (cache.size() < i) {
      SieveTerm t = state_->gen(cache.size() + 1);
      t.index = cache.size() + 1;
      cache.push_back(std::make_unique<SieveTerm>(std::move(t)));
    }
    return *cache[i - 1];
  }

  /// Terms 1..available(L).
  std::vector<const SieveTerm*> terms(std::size_t L) const {
    std::vector<const SieveTerm*> out;
    const std::size_t n = available(L);
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(&term(i));
    return out;
  }

  /// Places `extra` before the existing terms.
  Sieve with_front_terms(std::vector<SieveTerm> extra, std::string name = {}) const {
    auto front = std::make_shared<std::vector<SieveTerm>>(std::move(extra));
    Sieve base = *this;
    const std::size_t k = front->size();
    std::optional<std::size_t> len = length_ ? std::optional<std::size_t>(*length_ + k) : std::nullopt;
    return Sieve(ring_, name.empty() ? name_ + "+front" : std::move(name), params_,
                 [front, base, k](std::size_t i) { return i <= k ? (*front)[i - 1] : base.term(i - k); }, len);
  }

  /// Drops the listed (1-based) indices; the remaining terms keep their order.
  Sieve without_terms(std::vector<std::size_t> removed, std::string name = {}) const {
    std::sort(removed.begin(), removed.end());
    Sieve base = *this;
    auto map = [removed](std::size_t i) {
      std::size_t j = i;
      for (std::size_t r : removed) {
        if (r <= j) ++j;
      }
      return j;
    };
    std::optional<std::size_t> len =
        length_ ? std::optional<std::size_t>(*length_ - removed.size()) : std::nullopt;
    return Sieve(ring_, name.empty() ? name_ + "-removed" : std::move(name), params_,
                 [base, map](std::size_t i) { return base.term(map(i)); }, len);
  }

  /// Applies a permutation to the first perm.size() indices: new term i is old
  /// term perm[i-1] (1-based values).
  Sieve permuted(std::vector<std::size_t> perm, std::string name = {}) const {
    std::vector<std::size_t> check(perm);
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (check[i] != i + 1) throw Error(ErrorKind::InvalidParams, "not a permutation");
    }
    Sieve base = *this;
    auto p = std::make_shared<std::vector<std::size_t>>(std::move(perm));
    return Sieve(ring_, name.empty() ? name_ + "-permuted" : std::move(name), params_,
                 [base, p](std::size_t i) { return base.term(i <= p->size() ? (*p)[i - 1] : i); }, length_);
  }

 private:
  struct State {
    std::mutex mu;
    TermGenerator gen;
    std::vector<std::unique_ptr<SieveTerm>> cache;
  };

  RingPtr ring_;
  std::string name_;
  ParamRecord params_;
  std::shared_ptr<State> state_;
  std::optional<std::size_t> length_;
};

struct ValidationReport {
  std::size_t checked = 0;
  /// sum_{i<=L} vol(R_i).
  long double erdos_partial_sum = 0;
};

/// Checks invertibility, properness and pairwise coprimality of terms 1..L.
inline ValidationReport validate(const Sieve& sieve, std::size_t L) {
  auto terms = sieve.terms(L);
  ValidationReport rep;
  rep.checked = terms.size();
  for (const SieveTerm* t : terms) {
    const auto idx = static_cast<long>(t->index);
    if (t->ideal.norm() <= 0) throw Error(ErrorKind::RankDeficient, "term " + std::to_string(idx), idx);
    if (Integer(t->residues.size()) >= t->ideal.norm()) {
      throw Error(ErrorKind::ImproperTerm, "term " + std::to_string(idx) + " covers every class", idx);
    }
    rep.erdos_partial_sum += t->volume();
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!is_coprime(terms[i]->ideal, terms[j]->ideal)) {
        throw Error(ErrorKind::NotCoprime,
                    "terms " + std::to_string(i + 1) + " and " + std::to_string(j + 1),
                    static_cast<long>(i + 1), static_cast<long>(j + 1));
      }
    }
  }
  return rep;
}

inline bool in_term(const Sieve& sieve, std::size_t i, const Element& x) {
  return sieve.term(i).contains(x);
}

/// Least i <= L with x in R_i; nullopt means x is R-free at truncation L.
inline std::optional<std::size_t> is_sieved(const Sieve& sieve, std::size_t L, const Element& x) {
  const std::size_t n = sieve.available(L);
  for (std::size_t i = 1; i <= n; ++i) {
    if (sieve.term(i).contains(x)) return i;
  }
  return std::nullopt;
}

inline std::size_t default_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

/// Sets marks[idx] = 1 for every box index of `w` lying in one of the terms.
/// Work is split into slabs of the first coordinate; each thread owns a slab.
inline void mark_terms(const std::vector<const SieveTerm*>& terms, const Window& w,
                       std::vector<std::uint8_t>& marks, std::size_t threads = 1) {
  marks.resize(w.box_volume(), 0);
  const Coord lo0 = w.lo()[0], hi0 = w.hi()[0];
  const auto span = static_cast<std::size_t>(hi0 - lo0 + 1);
  threads = std::max<std::size_t>(1, std::min(threads, span));
  auto run = [&](Coord a, Coord b) {
    for (const SieveTerm* t : terms) {
      std::vector<std::size_t> skip;
      for (const auto& p : t->protected_points) {
        if (!w.contains(p)) continue;
        std::vector<Coord> c;
        for (const auto& v : p.coords) c.push_back(static_cast<Coord>(v));
        if (c[0] >= a && c[0] <= b) skip.push_back(w.index_of(c));
      }
      for (const auto& s : t->residues) {
        if (skip.empty()) {
          for_each_coset_index(t->ideal.basis(), s, w, a, b, [&](std::size_t idx) { marks[idx] = 1; });
        } else {
          for_each_coset_index(t->ideal.basis(), s, w, a, b, [&](std::size_t idx) {
            if (std::find(skip.begin(), skip.end(), idx) == skip.end()) marks[idx] = 1;
          });
        }
      }
    }
  };
  if (threads == 1) {
    run(lo0, hi0);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (span + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    Coord a = lo0 + static_cast<Coord>(t * chunk);
    if (a > hi0) break;
    Coord b = std::min(hi0, a + static_cast<Coord>(chunk) - 1);
    pool.emplace_back(run, a, b);
  }
  for (auto& th : pool) th.join();
}

/// Box-indexed survivor flags: 1 iff the point is in the window and in no
/// R_i, i <= L.
inline std::vector<std::uint8_t> rfree_mask(const Sieve& sieve, const Window& w, std::size_t L,
                                            std::size_t threads = 1) {
  if (!sieve.ring().same_as(w.ring())) throw Error(ErrorKind::RingMismatch, "window ring");
  std::vector<std::uint8_t> marks;
  mark_terms(sieve.terms(L), w, marks, threads);
  for (std::size_t idx = 0; idx < marks.size(); ++idx) {
    marks[idx] = (marks[idx] == 0 && w.in_window_index(idx)) ? 1 : 0;
  }
  return marks;
}

inline std::size_t count_flags(const std::vector<std::uint8_t>& flags) {
  std::size_t c = 0;
  for (auto f : flags) c += f;
  return c;
}

/// The R-free points of the window at truncation L, lexicographic order.
inline std::vector<Element> rfree_window(const Sieve& sieve, const Window& w, std::size_t L,
                                         std::size_t threads = 1) {
  auto mask = rfree_mask(sieve, w, L, threads);
  std::vector<Element> out;
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    if (mask[idx]) out.push_back(w.element_at(idx));
  }
  return out;
}

}  // namespace sievelab
