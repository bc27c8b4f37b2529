#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "numeric.hpp"
#include "report.hpp"
#include "sieve.hpp"
#include "window.hpp"

namespace sievelab {

using Predicate = std::function<bool(const Element&)>;
/// Box-indexed membership flags for a window (nonzero = member).
using MaskFn = std::function<std::vector<std::uint8_t>(const Window&)>;

// ---------------------------------------------------------------------------
// Folner windows
// ---------------------------------------------------------------------------

enum class FolnerKind { Ball, ShiftedBall, Interval, Box };

/// One window per schedule entry. Ball/ShiftedBall use N as the radius,
/// Interval gives [interval_start, N] (degree 1), Box gives [-N, N]^n.
/// `shifts`, when given, must have one entry per schedule entry.
inline std::vector<Window> make_folner(const RingPtr& ring, FolnerKind kind,
                                       const std::vector<Integer>& schedule,
                                       const std::vector<Element>& shifts = {},
                                       const Integer& interval_start = 1) {
  if (schedule.empty()) throw Error(ErrorKind::InvalidSchedule, "empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 0 || (i > 0 && schedule[i] <= schedule[i - 1])) {
      throw Error(ErrorKind::InvalidSchedule, "schedule must be nonnegative and strictly increasing");
    }
  }
  if (!shifts.empty() && shifts.size() != schedule.size()) {
    throw Error(ErrorKind::InvalidSchedule, "one shift per window required");
  }
  if (kind == FolnerKind::ShiftedBall && shifts.empty()) {
    throw Error(ErrorKind::InvalidSchedule, "shifted balls need shifts");
  }
  std::vector<Window> out;
  const std::size_t n = ring->degree();
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const Element shift = shifts.empty() ? Element::zero(n) : shifts[i];
    switch (kind) {
      case FolnerKind::Ball:
      case FolnerKind::ShiftedBall:
        out.push_back(kind == FolnerKind::Ball && shifts.empty()
                          ? Window::ball(ring, Real(schedule[i]))
                          : Window::shifted_ball(ring, shift, Real(schedule[i])));
        break;
      case FolnerKind::Interval:
        if (n != 1) throw Error(ErrorKind::InvalidSchedule, "interval windows need a degree-1 ring");
        if (schedule[i] < interval_start) throw Error(ErrorKind::InvalidSchedule, "interval end before start");
        out.push_back(Window::interval(ring, interval_start + shift.coords[0], schedule[i] + shift.coords[0]));
        break;
      case FolnerKind::Box: {
        Element lo = Element::zero(n), hi = Element::zero(n);
        for (std::size_t k = 0; k < n; ++k) {
          lo.coords[k] = shift.coords[k] - schedule[i];
          hi.coords[k] = shift.coords[k] + schedule[i];
        }
        out.push_back(Window::box(ring, lo, hi));
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Empirical densities
// ---------------------------------------------------------------------------

struct DensityRow {
  std::size_t window_id = 0;
  std::string window;
  std::size_t size = 0;
  std::size_t count = 0;
  double ratio = 0;
};

/// Per-window ratios plus the upper/lower estimates, taken as max/min over
/// the last half of the schedule (at least one window).
struct DensityReport {
  std::vector<DensityRow> rows;
  double upper = 0;
  double lower = 0;
  std::optional<double> theoretical;

  double last_ratio() const { return rows.empty() ? 0.0 : rows.back().ratio; }

  Json to_json() const {
    Json j;
    Json rs = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["window_id"] = r.window_id;
      row["window"] = r.window;
      row["size"] = r.size;
      row["count"] = r.count;
      row["ratio"] = r.ratio;
      if (theoretical) {
        row["theoretical"] = *theoretical;
        row["abs_error"] = std::fabs(r.ratio - *theoretical);
      } else {
        row["theoretical"] = nullptr;
        row["abs_error"] = nullptr;
      }
      rs.push_back(row);
    }
    j["rows"] = rs;
    j["upper"] = upper;
    j["lower"] = lower;
    j["estimator"] = "max/min over the last half of the window schedule";
    return j;
  }

  /// Columns: window_id,size,count,ratio,theoretical,abs_error.
  std::string to_csv() const {
    std::string out = "window_id,size,count,ratio,theoretical,abs_error\n";
    for (const auto& r : rows) {
      out += std::to_string(r.window_id) + "," + std::to_string(r.size) + "," + std::to_string(r.count) +
             "," + fmt17(r.ratio) + ",";
      if (theoretical) out += fmt17(*theoretical) + "," + fmt17(std::fabs(r.ratio - *theoretical));
      else out += ",";
      out += "\n";
    }
    return out;
  }
};

namespace detail {

inline void finish_report(DensityReport& rep) {
  const std::size_t n = rep.rows.size();
  const std::size_t from = n / 2;
  rep.upper = 0;
  rep.lower = 1;
  for (std::size_t i = from; i < n; ++i) {
    rep.upper = std::max(rep.upper, rep.rows[i].ratio);
    rep.lower = std::min(rep.lower, rep.rows[i].ratio);
  }
}

}  // namespace detail

inline DensityReport empirical_density(const MaskFn& members, const std::vector<Window>& windows,
                                       std::optional<double> theoretical = std::nullopt) {
  DensityReport rep;
  rep.theoretical = theoretical;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const Window& w = windows[i];
    auto flags = members(w);
    std::size_t count = 0;
    w.for_each_index([&](std::size_t idx) { count += flags[idx] != 0; });
    rep.rows.push_back({i, w.describe(), w.size(), count,
                        static_cast<double>(count) / static_cast<double>(w.size())});
  }
  detail::finish_report(rep);
  return rep;
}

inline DensityReport empirical_density(const Predicate& pred, const std::vector<Window>& windows,
                                       std::optional<double> theoretical = std::nullopt) {
  return empirical_density(
      MaskFn([&pred](const Window& w) {
        std::vector<std::uint8_t> flags(w.box_volume(), 0);
        w.for_each_index([&](std::size_t idx) { flags[idx] = pred(w.element_at(idx)) ? 1 : 0; });
        return flags;
      }),
      windows, theoretical);
}

/// Membership in F_R at truncation L, as a mask provider.
inline MaskFn rfree_members(const Sieve& sieve, std::size_t L, std::size_t threads = 1) {
  return [sieve, L, threads](const Window& w) { return rfree_mask(sieve, w, L, threads); };
}

/// Complement of rfree_members inside the window.
inline MaskFn sieved_members(const Sieve& sieve, std::size_t L, std::size_t threads = 1) {
  return [sieve, L, threads](const Window& w) {
    auto m = rfree_mask(sieve, w, L, threads);
    for (std::size_t idx = 0; idx < m.size(); ++idx) m[idx] = (!m[idx] && w.in_window_index(idx)) ? 1 : 0;
    return m;
  };
}

// ---------------------------------------------------------------------------
// Theoretical product
// ---------------------------------------------------------------------------

/// Neumaier-compensated long double accumulator.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0;
  long double comp_ = 0;
};

/// Above this many factors products are taken as exp of a compensated log-sum.
inline constexpr std::size_t kLogProductThreshold = 1000;

/// prod (1 - x_i) evaluated directly for short lists and as exp(sum log1p(-x_i)) otherwise.
inline long double product_one_minus(const std::vector<long double>& xs) {
  if (xs.size() <= kLogProductThreshold) {
    long double p = 1;
    for (long double x : xs) p *= (1 - x);
    return p;
  }
  CompensatedSum s;
  for (long double x : xs) {
    if (x >= 1) return 0;
    s.add(std::log1p(-x));
  }
  return std::exp(s.value());
}

struct DensityProduct {
  /// prod_{i<=L} (1 - |R_i| / N(b_i)); an upper bound on the full product.
  long double value = 1;
  bool upper_bound = true;
  /// sum_{i<=L} vol(R_i).
  long double erdos_partial_sum = 0;
  std::size_t terms = 0;
};

inline DensityProduct partial_density_product(const Sieve& sieve, std::size_t L) {
  DensityProduct out;
  std::vector<long double> vols;
  for (const SieveTerm* t : sieve.terms(L)) {
    if (Integer(t->residue_count()) >= t->ideal.norm()) {
      throw Error(ErrorKind::ImproperTerm, "term " + std::to_string(t->index), static_cast<long>(t->index));
    }
    vols.push_back(t->volume());
    out.erdos_partial_sum += t->volume();
  }
  out.terms = vols.size();
  out.value = product_one_minus(vols);
  return out;
}

// ---------------------------------------------------------------------------
// Light-tail statistics
// ---------------------------------------------------------------------------

struct TailStatistic {
  double value = 0;
  std::size_t count = 0;
  std::size_t window_size = 0;
  std::size_t L = 0;
  std::size_t L_max = 0;
  std::string note;
};

/// Box-indexed marks of the head union (terms <= L) and of the tail union
/// (L < i <= L_max), restricted to the window.
struct TailMarks {
  std::vector<std::uint8_t> head;
  std::vector<std::uint8_t> tail;
};

inline TailMarks tail_marks(const Sieve& sieve, std::size_t L, std::size_t L_max, const Window& w,
                            std::size_t threads = 1) {
  if (L > L_max) throw Error(ErrorKind::InvalidParams, "L must not exceed L_max");
  if (!sieve.ring().same_as(w.ring())) throw Error(ErrorKind::RingMismatch, "window ring");
  auto all = sieve.terms(L_max);
  const std::size_t split = std::min(L, all.size());
  std::vector<const SieveTerm*> head(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(split));
  std::vector<const SieveTerm*> tail(all.begin() + static_cast<std::ptrdiff_t>(split), all.end());
  TailMarks m;
  mark_terms(head, w, m.head, threads);
  mark_terms(tail, w, m.tail, threads);
  for (std::size_t idx = 0; idx < w.box_volume(); ++idx) {
    if (!w.in_window_index(idx)) m.head[idx] = m.tail[idx] = 0;
  }
  return m;
}

namespace detail {

inline TailStatistic tail_statistic(const Sieve& sieve, std::size_t L, std::size_t L_max, const Window& w,
                                    bool weak, std::size_t threads) {
  TailMarks m = tail_marks(sieve, L, L_max, w, threads);
  TailStatistic s;
  for (std::size_t idx = 0; idx < w.box_volume(); ++idx) {
    if (m.tail[idx] && (!weak || !m.head[idx])) ++s.count;
  }
  s.window_size = w.size();
  s.value = static_cast<double>(s.count) / static_cast<double>(w.size());
  s.L = L;
  s.L_max = L_max;
  s.note = "terms with index > " + std::to_string(L_max) + " are omitted";
  return s;
}

}  // namespace detail

/// |W cap U_{L<i<=L_max} R_i \ U_{j<=L} R_j| / |W|.
inline TailStatistic weak_tail_statistic(const Sieve& sieve, std::size_t L, std::size_t L_max,
                                         const Window& w, std::size_t threads = 1) {
  return detail::tail_statistic(sieve, L, L_max, w, true, threads);
}

/// |W cap U_{L<i<=L_max} R_i| / |W|.
inline TailStatistic strong_tail_statistic(const Sieve& sieve, std::size_t L, std::size_t L_max,
                                           const Window& w, std::size_t threads = 1) {
  return detail::tail_statistic(sieve, L, L_max, w, false, threads);
}

// ---------------------------------------------------------------------------
// Logarithmic density over Z
// ---------------------------------------------------------------------------

/// (1 / log N) * sum_{1<=m<=N, member(m)} 1/m; flags[m-1] is membership of m.
inline double log_density_flags(const std::vector<std::uint8_t>& flags) {
  const std::size_t N = flags.size();
  if (N < 2) throw Error(ErrorKind::InvalidParams, "log density needs N >= 2");
  CompensatedSum s;
  for (std::size_t m = 1; m <= N; ++m) {
    if (flags[m - 1]) s.add(1.0L / static_cast<long double>(m));
  }
  return static_cast<double>(s.value() / std::log(static_cast<long double>(N)));
}

inline double log_density(const Ring& ring, const Predicate& pred, std::size_t N) {
  if (ring.degree() != 1) throw Error(ErrorKind::WrongRing, "log density is defined over Z only");
  if (N < 2) throw Error(ErrorKind::InvalidParams, "log density needs N >= 2");
  std::vector<std::uint8_t> flags(N);
  for (std::size_t m = 1; m <= N; ++m) flags[m - 1] = pred(Element{static_cast<long long>(m)}) ? 1 : 0;
  return log_density_flags(flags);
}

/// Logarithmic density of F_R on [1, N] at truncation L.
inline double log_density(const Sieve& sieve, std::size_t L, std::size_t N, std::size_t threads = 1) {
  if (sieve.ring().degree() != 1) throw Error(ErrorKind::WrongRing, "log density is defined over Z only");
  if (N < 2) throw Error(ErrorKind::InvalidParams, "log density needs N >= 2");
  Window w = Window::interval(sieve.ring_ptr(), 1, N);
  return log_density_flags(rfree_mask(sieve, w, L, threads));
}

}  // namespace sievelab
