#pragma once

// Exact geometry on the circle T = [0,1) with 0 ~ 1 and on its d-fold product.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "torusvc/rational.hpp"

namespace torusvc {

/// Raised when shapes and points of different dimensions are combined.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Closure { closed, open };

/// An arc of the circle. start > end means the arc wraps through 0.
///
/// Both endpoints are reduced into [0,1); start == end is rejected, so an
/// arc is never empty-by-construction nor the full circle.
class Arc {
 public:
  Arc(Rat start, Rat end, Closure closure);

  static Arc closed(Rat start, Rat end) { return Arc(start, end, Closure::closed); }
  static Arc open(Rat start, Rat end) { return Arc(start, end, Closure::open); }
  /// Arc beginning at `start` of the given length in (0,1).
  static Arc with_length(Rat start, Rat length, Closure closure);

  const Rat& start() const { return start_; }
  const Rat& end() const { return end_; }
  Closure closure() const { return closure_; }
  bool wraps() const { return start_ > end_; }

  /// The arc covering the rest of the circle, with flipped closure.
  Arc complement() const;

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  Rat start_;
  Rat end_;
  Closure closure_;
};

bool arc_contains(const Arc& arc, const Rat& x);
Rat arc_length(const Arc& arc);

struct TorusPoint {
  std::vector<Rat> coords;

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Product of d closed arcs.
class Box {
 public:
  explicit Box(std::vector<Arc> arcs);
  std::size_t dim() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Arc> arcs_;
};

/// Box whose closed factors all have the same length `edge`.
class Cube {
 public:
  Cube(std::vector<Arc> arcs, Rat edge);
  /// Cube with the given lower corner.
  static Cube at(std::span<const Rat> starts, Rat edge);

  std::size_t dim() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Rat& edge() const { return edge_; }
  Box as_box() const { return Box(arcs_); }
  friend bool operator==(const Cube&, const Cube&) = default;

 private:
  std::vector<Arc> arcs_;
  Rat edge_;
};

/// T^{i} x (open arc) x T^{d-i-1}; `anchor` is 0-based.
class Stripe {
 public:
  Stripe(std::size_t anchor, Arc arc, std::size_t ambient_dim);

  std::size_t anchor() const { return anchor_; }
  const Arc& arc() const { return arc_; }
  std::size_t ambient_dim() const { return ambient_; }
  Rat length() const { return arc_length(arc_); }
  friend bool operator==(const Stripe&, const Stripe&) = default;

 private:
  std::size_t anchor_;
  Arc arc_;
  std::size_t ambient_;
};

bool box_contains(const Box& box, const TorusPoint& p);
bool cube_contains(const Cube& cube, const TorusPoint& p);
bool stripe_contains(const Stripe& s, const TorusPoint& p);

/// A finite configuration on T^d whose coordinates are all multiples of 1/denom.
///
/// Coordinates are stored as integer ticks t with 0 <= t < denom.
class PointSet {
 public:
  PointSet(std::size_t dim, std::int64_t denom);
  PointSet(std::size_t dim, std::int64_t denom, std::vector<std::int64_t> ticks);
  /// Picks the least common denominator of all coordinates.
  static PointSet from_points(std::size_t dim, const std::vector<TorusPoint>& points);

  std::size_t dim() const { return dim_; }
  std::int64_t denom() const { return denom_; }
  std::size_t size() const { return dim_ == 0 ? 0 : ticks_.size() / dim_; }
  bool empty() const { return ticks_.empty(); }

  std::int64_t tick(std::size_t point, std::size_t axis) const { return ticks_[point * dim_ + axis]; }
  Rat coord(std::size_t point, std::size_t axis) const { return Rat(tick(point, axis), denom_); }
  TorusPoint point(std::size_t index) const;
  std::vector<TorusPoint> points() const;

  void add(std::span<const std::int64_t> ticks);
  /// The same points expressed over a multiple of the current denominator.
  PointSet rescaled(std::int64_t new_denom) const;
  PointSet subset(std::span<const std::size_t> indices) const;

  const std::vector<std::int64_t>& raw_ticks() const { return ticks_; }
  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_;
  std::int64_t denom_;
  std::vector<std::int64_t> ticks_;
};

struct Gap {
  Rat start;
  Rat end;
  Rat length;
  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Cyclic gaps between consecutive distinct values, longest first (ties by start).
///
/// A single distinct value v yields the gap [v, v) of length 1. Throws
/// std::invalid_argument on empty input.
std::vector<Gap> maximal_gaps(std::span<const Rat> coords);

}  // namespace torusvc
