#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "numeric.hpp"

namespace sievelab {

/// A finite evaluation region: one member of a Folner sequence.
///
/// Every window lives inside an integer coordinate box [lo, hi]; points of
/// the box are addressed by a mixed-radix linear index with the first
/// coordinate most significant, which is also the lexicographic order used
/// for iteration. Interval and box windows fill their box; balls carry an
/// inclusion mask.
class Window {
 public:
  enum class Kind { Ball, ShiftedBall, Interval, Box };

  static Window ball(RingPtr ring, const Real& radius, std::size_t cap = kDefaultPointCap) {
    return shifted_ball(ring, Element::zero(ring->degree()), radius, cap, Kind::Ball);
  }

  static Window shifted_ball(RingPtr ring, const Element& center, const Real& radius,
                             std::size_t cap = kDefaultPointCap) {
    return shifted_ball(std::move(ring), center, radius, cap, Kind::ShiftedBall);
  }

  static Window interval(RingPtr ring, const Integer& lo, const Integer& hi,
                         std::size_t cap = kDefaultPointCap) {
    if (ring->degree() != 1) {
      throw Error(ErrorKind::DimensionMismatch, "interval windows need a degree-1 ring");
    }
    return box(std::move(ring), Element(std::vector<Integer>{lo}), Element(std::vector<Integer>{hi}),
               cap, Kind::Interval);
  }

  static Window box(RingPtr ring, const Element& lo, const Element& hi,
                    std::size_t cap = kDefaultPointCap) {
    return box(std::move(ring), lo, hi, cap, Kind::Box);
  }

  Kind kind() const { return kind_; }
  const Ring& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  std::size_t dim() const { return lo_.size(); }
  const std::vector<Coord>& lo() const { return lo_; }
  const std::vector<Coord>& hi() const { return hi_; }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::size_t box_volume() const { return volume_; }
  /// True when every point of the bounding box belongs to the window.
  bool fills_box() const { return mask_.empty(); }
  const Real& radius() const { return radius_; }
  const Element& center() const { return center_; }

  bool in_window_index(std::size_t idx) const { return mask_.empty() || mask_[idx] != 0; }

  /// Number of points in the window.
  std::size_t size() const { return count_; }

  bool in_box(const std::vector<Coord>& p) const {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    }
    return true;
  }

  std::size_t index_of(const std::vector<Coord>& p) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < p.size(); ++i) idx += static_cast<std::size_t>(p[i] - lo_[i]) * strides_[i];
    return idx;
  }

  std::vector<Coord> point_at(std::size_t idx) const {
    std::vector<Coord> p(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      p[i] = lo_[i] + static_cast<Coord>(idx / strides_[i]);
      idx %= strides_[i];
    }
    return p;
  }

  Element element_at(std::size_t idx) const { return detail::to_element(point_at(idx)); }

  bool contains(const Element& x) const {
    if (x.size() != dim()) return false;
    std::vector<Coord> p(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x.coords[i] < lo_[i] || x.coords[i] > hi_[i]) return false;
      p[i] = static_cast<Coord>(x.coords[i]);
    }
    return in_window_index(index_of(p));
  }

  /// Window points in lexicographic order.
  std::vector<Element> points() const {
    std::vector<Element> out;
    out.reserve(count_);
    for (std::size_t idx = 0; idx < volume_; ++idx) {
      if (in_window_index(idx)) out.push_back(element_at(idx));
    }
    return out;
  }

  /// Calls f(index) for every in-window index in order.
  template <class F>
  void for_each_index(F&& f) const {
    for (std::size_t idx = 0; idx < volume_; ++idx) {
      if (in_window_index(idx)) f(idx);
    }
  }

  std::string describe() const {
    auto vec = [](const std::vector<Coord>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s;
    };
    switch (kind_) {
      case Kind::Interval: return "interval:" + std::to_string(lo_[0]) + ".." + std::to_string(hi_[0]);
      case Kind::Box: return "box:" + vec(lo_) + ".." + vec(hi_);
      case Kind::Ball: return "ball:" + radius_.str();
      case Kind::ShiftedBall: {
        std::string c = center_.str();
        return "shifted_ball:" + c.substr(1, c.size() - 2) + "@" + radius_.str();
      }
    }
    return "window";
  }

 private:
  Window() = default;

  void finish_box(std::size_t cap) {
    const std::size_t n = lo_.size();
    Integer vol(1);
    for (std::size_t i = 0; i < n; ++i) {
      if (hi_[i] < lo_[i]) throw Error(ErrorKind::InvalidSchedule, "empty window");
      vol *= Integer(hi_[i] - lo_[i] + 1);
    }
    if (vol > Integer(cap)) throw Error(ErrorKind::WindowTooLarge, "window box has " + vol.str() + " points");
    volume_ = static_cast<std::size_t>(vol);
    strides_.assign(n, 1);
    for (std::size_t i = n; i-- > 1;) {
      strides_[i - 1] = strides_[i] * static_cast<std::size_t>(hi_[i] - lo_[i] + 1);
    }
  }

  static Window shifted_ball(RingPtr ring, const Element& center, const Real& radius,
                             std::size_t cap, Kind kind) {
    check_dim(*ring, center);
    if (radius < 0) throw Error(ErrorKind::InvalidSchedule, "negative radius");
    Window w;
    w.kind_ = kind;
    w.ring_ = std::move(ring);
    w.radius_ = radius;
    w.center_ = center;
    auto half = ball_box_radius(*w.ring_, radius);
    const std::size_t n = half.size();
    w.lo_.resize(n);
    w.hi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Coord c = to_coord(center.coords[i]);
      w.lo_[i] = c - half[i];
      w.hi_[i] = c + half[i];
    }
    w.finish_box(cap);
    if (w.ring_->coordinate_norm()) {
      w.count_ = w.volume_;
      return w;
    }
    w.mask_.assign(w.volume_, 0);
    w.count_ = 0;
    for (std::size_t idx = 0; idx < w.volume_; ++idx) {
      auto p = w.point_at(idx);
      Element d = Element::zero(n);
      for (std::size_t i = 0; i < n; ++i) d.coords[i] = p[i] - static_cast<Coord>(center.coords[i]);
      if (within_ball(*w.ring_, d, radius)) {
        w.mask_[idx] = 1;
        ++w.count_;
      }
    }
    if (w.count_ == w.volume_) w.mask_.clear();
    return w;
  }

  static Window box(RingPtr ring, const Element& lo, const Element& hi, std::size_t cap, Kind kind) {
    check_dim(*ring, lo);
    check_dim(*ring, hi);
    Window w;
    w.kind_ = kind;
    w.ring_ = std::move(ring);
    w.center_ = Element::zero(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      w.lo_.push_back(to_coord(lo.coords[i]));
      w.hi_.push_back(to_coord(hi.coords[i]));
    }
    w.finish_box(cap);
    w.count_ = w.volume_;
    return w;
  }

  Kind kind_ = Kind::Box;
  RingPtr ring_;
  Real radius_{0};
  Element center_;
  std::vector<Coord> lo_, hi_;
  std::vector<std::size_t> strides_;
  std::size_t volume_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> mask_;  // empty when the window fills its box
};

/// Smallest box window containing {x + a : x in w, a in offsets}.
inline Window expanded_box(const Window& w, const std::vector<Element>& offsets) {
  const std::size_t n = w.dim();
  Element lo = Element::zero(n), hi = Element::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer mn(0), mx(0);
    bool first = true;
    for (const auto& a : offsets) {
      if (first || a.coords[i] < mn) mn = a.coords[i];
      if (first || a.coords[i] > mx) mx = a.coords[i];
      first = false;
    }
    lo.coords[i] = Integer(w.lo()[i]) + mn;
    hi.coords[i] = Integer(w.hi()[i]) + mx;
  }
  return Window::box(w.ring_ptr(), lo, hi);
}

}  // namespace sievelab
