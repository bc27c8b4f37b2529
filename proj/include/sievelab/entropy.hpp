#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
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

/// s_i for terms 1..s.size(); missing entries are 0.
struct CapacityVector {
  std::vector<std::size_t> s;

  std::size_t at(std::size_t i) const { return i <= s.size() ? s[i - 1] : 0; }
};

inline void check_capacity(const Sieve& sieve, std::size_t L, const CapacityVector& cap) {
  for (std::size_t i = 1; i <= cap.s.size(); ++i) {
    if (cap.s[i - 1] == 0) continue;
    if (i > sieve.available(L)) {
      throw Error(ErrorKind::InvalidCapacity, "capacity given for term " + std::to_string(i) + " beyond L",
                  static_cast<long>(i));
    }
    if (Integer(cap.s[i - 1]) > sieve.term(i).complement_count()) {
      throw Error(ErrorKind::InvalidCapacity, "s_" + std::to_string(i) + " exceeds |R_i^c|", static_cast<long>(i));
    }
  }
}

inline constexpr std::size_t kMaxExhaustiveWindow = 24;

namespace detail {

/// Per-term class tables for the points of a window. For each binding term:
/// cover[k] lists the classes of -x_k + S_i, own[k] the class of x_k.
struct PatternConstraints {
  struct Term {
    std::size_t index = 0;
    std::size_t norm = 0;       // only meaningful when cover_binding
    bool cover_binding = false;  // can E cover all of O_K / b_i?
    bool cap_binding = false;    // can |E + b_i| exceed the capacity?
    std::size_t cap = 0;         // |R_i^c| - s_i
    std::size_t cover_classes = 0;
    std::size_t own_classes = 0;
    std::vector<std::vector<std::uint32_t>> cover;
    std::vector<std::uint32_t> own;
  };
  std::size_t points = 0;
  std::vector<Term> terms;
};

inline PatternConstraints build_constraints(const Sieve& sieve, std::size_t L, const std::vector<Element>& pts,
                                            const CapacityVector& cap) {
  PatternConstraints pc;
  pc.points = pts.size();
  const Integer W(pts.size());
  for (const SieveTerm* t : sieve.terms(L)) {
    PatternConstraints::Term ct;
    ct.index = t->index;
    const Integer& N = t->ideal.norm();
    ct.cover_binding = !t->residues.empty() && W * Integer(t->residues.size()) >= N;
    Integer capacity = t->complement_count() - Integer(cap.at(t->index));
    ct.cap_binding = capacity < W;
    if (!ct.cover_binding && !ct.cap_binding) continue;
    if (ct.cover_binding) ct.norm = static_cast<std::size_t>(N);
    if (ct.cap_binding) ct.cap = static_cast<std::size_t>(capacity);
    std::map<Element, std::uint32_t> cover_ids, own_ids;
    ct.cover.resize(pts.size());
    ct.own.resize(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (ct.cover_binding) {
        for (const auto& s : t->residues) {
          Element c = t->ideal.canonical_residue(s - pts[k]);
          auto [it, fresh] = cover_ids.emplace(c, static_cast<std::uint32_t>(cover_ids.size()));
          ct.cover[k].push_back(it->second);
        }
        std::sort(ct.cover[k].begin(), ct.cover[k].end());
        ct.cover[k].erase(std::unique(ct.cover[k].begin(), ct.cover[k].end()), ct.cover[k].end());
      }
      if (ct.cap_binding) {
        Element c = t->ideal.canonical_residue(pts[k]);
        auto [it, fresh] = own_ids.emplace(c, static_cast<std::uint32_t>(own_ids.size()));
        ct.own[k] = it->second;
      }
    }
    ct.cover_classes = cover_ids.size();
    ct.own_classes = own_ids.size();
    // Every class can be covered only if the window reaches all N of them.
    if (ct.cover_binding && ct.cover_classes < ct.norm) ct.cover_binding = false;
    if (ct.cover_binding || ct.cap_binding) pc.terms.push_back(std::move(ct));
  }
  return pc;
}

/// Incremental state of a pattern against the constraint tables.
class PatternState {
 public:
  explicit PatternState(const PatternConstraints& pc) : pc_(&pc) {
    for (const auto& t : pc.terms) {
      cover_.emplace_back(t.cover_classes, 0);
      own_.emplace_back(t.own_classes, 0);
    }
    covered_.assign(pc.terms.size(), 0);
    owned_.assign(pc.terms.size(), 0);
  }

  /// Adds point k; returns false (leaving the state unchanged) if the
  /// extended pattern violates a constraint.
  bool add(std::size_t k) {
    std::size_t done = 0;
    bool ok = true;
    for (; done < pc_->terms.size(); ++done) {
      if (!apply(done, k, +1)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      for (std::size_t t = 0; t < done; ++t) apply(t, k, -1);
    }
    return ok;
  }

  void remove(std::size_t k) {
    for (std::size_t t = 0; t < pc_->terms.size(); ++t) apply(t, k, -1);
  }

 private:
  // Applies +1/-1 for term t; on +1 returns false after rolling back term t itself.
  bool apply(std::size_t t, std::size_t k, int dir) {
    const auto& ct = pc_->terms[t];
    if (dir > 0) {
      if (ct.cover_binding) {
        for (auto c : ct.cover[k]) {
          if (cover_[t][c]++ == 0) ++covered_[t];
        }
      }
      if (ct.cap_binding && own_[t][ct.own[k]]++ == 0) ++owned_[t];
      bool bad = (ct.cover_binding && covered_[t] == ct.norm) || (ct.cap_binding && owned_[t] > ct.cap);
      if (bad) {
        apply(t, k, -1);
        return false;
      }
      return true;
    }
    if (ct.cover_binding) {
      for (auto c : ct.cover[k]) {
        if (--cover_[t][c] == 0) --covered_[t];
      }
    }
    if (ct.cap_binding && --own_[t][ct.own[k]] == 0) --owned_[t];
    return true;
  }

  const PatternConstraints* pc_;
  std::vector<std::vector<std::uint32_t>> cover_, own_;
  std::vector<std::size_t> covered_, owned_;
};

inline std::uint64_t count_from(const PatternConstraints& pc, PatternState& st, std::size_t k) {
  if (k == pc.points) return 1;
  std::uint64_t total = count_from(pc, st, k + 1);
  if (st.add(k)) {
    total += count_from(pc, st, k + 1);
    st.remove(k);
  }
  return total;
}

}  // namespace detail

/// Number of E within the window that are admissible for terms 1..L and, with
/// a capacity vector, satisfy |E + b_i| <= |R_i^c| - s_i. Depth-first with
/// pruning; the admissible family is closed under taking subsets.
inline std::uint64_t count_admissible_patterns(const Sieve& sieve, std::size_t L, const Window& w,
                                               const std::optional<CapacityVector>& cap = std::nullopt,
                                               std::size_t threads = 1) {
  if (w.size() > kMaxExhaustiveWindow) {
    throw Error(ErrorKind::WindowTooLarge, "exhaustive count needs |window| <= 24");
  }
  CapacityVector s = cap.value_or(CapacityVector{});
  check_capacity(sieve, L, s);
  auto pts = w.points();
  auto pc = detail::build_constraints(sieve, L, pts, s);
  if (pc.terms.empty()) return std::uint64_t{1} << pts.size();
  const std::size_t split = threads > 1 ? std::min<std::size_t>(pts.size(), 3) : 0;
  if (split == 0) {
    detail::PatternState st(pc);
    return detail::count_from(pc, st, 0);
  }
  // Fixed prefixes over the first `split` points, summed in prefix order.
  std::vector<std::future<std::uint64_t>> parts;
  for (std::uint32_t prefix = 0; prefix < (1U << split); ++prefix) {
    parts.push_back(std::async(std::launch::async, [&pc, prefix, split] {
      detail::PatternState st(pc);
      for (std::size_t k = 0; k < split; ++k) {
        if ((prefix >> k & 1U) && !st.add(k)) return std::uint64_t{0};
      }
      return detail::count_from(pc, st, split);
    }));
  }
  std::uint64_t total = 0;
  for (auto& f : parts) total += f.get();
  return total;
}

struct McFraction {
  double fraction = 0;
  double stderr_ = 0;
  std::uint64_t samples = 0;
  std::uint64_t admissible = 0;
};

inline constexpr std::uint64_t kMcBlock = 4096;

/// Fraction of uniformly random subsets (each point kept with probability
/// 1/2) that are admissible. Samples are drawn in fixed blocks whose seeds
/// derive from the master seed, so results do not depend on `threads`.
inline McFraction mc_admissible_fraction(const Sieve& sieve, std::size_t L, const Window& w, std::uint64_t samples,
                                         std::uint64_t seed,
                                         const std::optional<CapacityVector>& cap = std::nullopt,
                                         std::size_t threads = 1) {
  if (samples == 0) throw Error(ErrorKind::InvalidParams, "samples must be positive");
  CapacityVector s = cap.value_or(CapacityVector{});
  check_capacity(sieve, L, s);
  auto pts = w.points();
  auto pc = detail::build_constraints(sieve, L, pts, s);
  const std::uint64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  auto run_block = [&](std::uint64_t b) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(b + 1)));
    const std::uint64_t n = std::min(kMcBlock, samples - b * kMcBlock);
    std::uint64_t ok = 0;
    detail::PatternState st(pc);
    std::vector<std::size_t> added;
    for (std::uint64_t i = 0; i < n; ++i) {
      bool good = true;
      added.clear();
      std::uint64_t bits = 0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k % 64 == 0) bits = rng();
        if (!(bits >> (k % 64) & 1U)) continue;
        if (!good) continue;
        if (st.add(k)) added.push_back(k);
        else good = false;
      }
      for (std::size_t k : added) st.remove(k);
      ok += good;
    }
    return ok;
  };
  std::vector<std::uint64_t> per_block(blocks, 0);
  threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, blocks));
  if (threads == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) per_block[b] = run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += threads) per_block[b] = run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  McFraction r;
  r.samples = samples;
  for (auto c : per_block) r.admissible += c;
  r.fraction = static_cast<double>(r.admissible) / static_cast<double>(samples);
  r.stderr_ = std::sqrt(r.fraction * (1 - r.fraction) / static_cast<double>(samples));
  return r;
}

struct EntropyFormula {
  /// prod_{i<=L} (|R_i^c| - s_i) / N(b_i), in bits per lattice point.
  double bits_per_point = 1;
  bool upper_bound = true;
};

inline EntropyFormula entropy_formula(const Sieve& sieve, std::size_t L,
                                      const std::optional<CapacityVector>& cap = std::nullopt) {
  CapacityVector s = cap.value_or(CapacityVector{});
  check_capacity(sieve, L, s);
  std::vector<long double> xs;
  for (const SieveTerm* t : sieve.terms(L)) {
    Integer blocked = Integer(t->residue_count()) + Integer(s.at(t->index));
    xs.push_back(to_ld(blocked) / to_ld(t->ideal.norm()));
  }
  return {static_cast<double>(product_one_minus(xs)), true};
}

enum class EntropyMode { Exact, MonteCarlo };

struct EntropyParams {
  std::optional<CapacityVector> capacity;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct EntropyEstimate {
  EntropyMode mode = EntropyMode::Exact;
  std::size_t L = 0;
  std::string window;
  std::size_t window_size = 0;
  std::uint64_t count = 0;     // exact mode
  double fraction = 0;         // mc mode
  double stderr_ = 0;          // mc mode
  double bits_per_point = 0;
  double formula_value = 0;
  double gap = 0;

  Json to_json() const {
    Json j;
    j["units"] = "bits per lattice point (topological entropy / log 2)";
    j["L"] = L;
    j["window"] = window;
    j["mode"] = mode == EntropyMode::Exact ? "exact" : "mc";
    if (mode == EntropyMode::Exact) j["count"] = count;
    else {
      j["fraction"] = fraction;
      j["stderr"] = stderr_;
    }
    j["bits_per_point"] = bits_per_point;
    j["formula_value"] = formula_value;
    j["gap"] = gap;
    return j;
  }
};

/// log2(count)/|W| (exact) or 1 + log2(fraction)/|W| (Monte Carlo), next to
/// the closed-form product for the same L.
inline EntropyEstimate entropy_estimate(const Sieve& sieve, std::size_t L, const Window& w, EntropyMode mode,
                                        const EntropyParams& params = {}) {
  EntropyEstimate e;
  e.mode = mode;
  e.L = sieve.available(L);
  e.window = w.describe();
  e.window_size = w.size();
  const double n = static_cast<double>(w.size());
  if (mode == EntropyMode::Exact) {
    e.count = count_admissible_patterns(sieve, L, w, params.capacity, params.threads);
    e.bits_per_point = std::log2(static_cast<double>(e.count)) / n;
  } else {
    auto mc = mc_admissible_fraction(sieve, L, w, params.samples, params.seed, params.capacity, params.threads);
    e.fraction = mc.fraction;
    e.stderr_ = mc.stderr_;
    e.bits_per_point = mc.fraction > 0 ? 1 + std::log2(mc.fraction) / n : 0;
  }
  e.formula_value = entropy_formula(sieve, L, params.capacity).bits_per_point;
  e.gap = e.bits_per_point - e.formula_value;
  return e;
}

}  // namespace sievelab
