#include "torusvc/torus.hpp"

#include <algorithm>
#include <string>

namespace torusvc {

namespace {

void require_unit(const Rat& x, const char* what) {
  if (x < Rat(0) || x >= Rat(1)) {
    throw std::invalid_argument(std::string(what) + " " + x.str() + " outside [0,1)");
  }
}

}  // namespace

Arc::Arc(Rat start, Rat end, Closure closure)
    : start_(start.mod1()), end_(end.mod1()), closure_(closure) {
  if (start_ == end_) throw std::invalid_argument("arc of length 0 or 1 is not allowed");
}

Arc Arc::with_length(Rat start, Rat length, Closure closure) {
  if (length <= Rat(0) || length >= Rat(1)) {
    throw std::invalid_argument("arc length " + length.str() + " outside (0,1)");
  }
  return Arc(start, start + length, closure);
}

Arc Arc::complement() const {
  return Arc(end_, start_, closure_ == Closure::closed ? Closure::open : Closure::closed);
}

bool arc_contains(const Arc& arc, const Rat& x) {
  const Rat& a = arc.start();
  const Rat& b = arc.end();
  if (arc.closure() == Closure::closed) {
    return a < b ? (a <= x && x <= b) : (x >= a || x <= b);
  }
  return a < b ? (a < x && x < b) : (x > a || x < b);
}

Rat arc_length(const Arc& arc) {
  if (arc.start() < arc.end()) return arc.end() - arc.start();
  return Rat(1) - arc.start() + arc.end();
}

Box::Box(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  if (arcs_.empty()) throw DimensionError("box needs at least one dimension");
  for (const Arc& a : arcs_) {
    if (a.closure() != Closure::closed) throw std::invalid_argument("box factors must be closed arcs");
  }
}

Cube::Cube(std::vector<Arc> arcs, Rat edge) : arcs_(std::move(arcs)), edge_(edge) {
  if (arcs_.empty()) throw DimensionError("cube needs at least one dimension");
  if (edge_ <= Rat(0) || edge_ >= Rat(1)) throw std::invalid_argument("cube edge outside (0,1)");
  for (const Arc& a : arcs_) {
    if (a.closure() != Closure::closed) throw std::invalid_argument("cube factors must be closed arcs");
    if (arc_length(a) != edge_) throw std::invalid_argument("cube factor length differs from edge");
  }
}

Cube Cube::at(std::span<const Rat> starts, Rat edge) {
  std::vector<Arc> arcs;
  arcs.reserve(starts.size());
  for (const Rat& s : starts) arcs.push_back(Arc::with_length(s, edge, Closure::closed));
  return Cube(std::move(arcs), edge);
}

Stripe::Stripe(std::size_t anchor, Arc arc, std::size_t ambient_dim)
    : anchor_(anchor), arc_(arc), ambient_(ambient_dim) {
  if (anchor_ >= ambient_) throw DimensionError("stripe anchor outside ambient dimension");
  if (arc_.closure() != Closure::open) throw std::invalid_argument("stripe arcs are open");
}

bool box_contains(const Box& box, const TorusPoint& p) {
  if (box.dim() != p.dim()) throw DimensionError("box/point dimension mismatch");
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (!arc_contains(box.arcs()[i], p.coords[i])) return false;
  }
  return true;
}

bool cube_contains(const Cube& cube, const TorusPoint& p) {
  if (cube.dim() != p.dim()) throw DimensionError("cube/point dimension mismatch");
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (!arc_contains(cube.arcs()[i], p.coords[i])) return false;
  }
  return true;
}

bool stripe_contains(const Stripe& s, const TorusPoint& p) {
  if (s.ambient_dim() != p.dim()) throw DimensionError("stripe/point dimension mismatch");
  return arc_contains(s.arc(), p.coords[s.anchor()]);
}

PointSet::PointSet(std::size_t dim, std::int64_t denom) : dim_(dim), denom_(denom) {
  if (dim_ == 0) throw DimensionError("point set dimension must be positive");
  if (denom_ <= 0) throw std::invalid_argument("point set denominator must be positive");
}

PointSet::PointSet(std::size_t dim, std::int64_t denom, std::vector<std::int64_t> ticks)
    : PointSet(dim, denom) {
  if (ticks.size() % dim_ != 0) throw DimensionError("tick count is not a multiple of the dimension");
  for (std::int64_t t : ticks) {
    if (t < 0 || t >= denom_) throw std::invalid_argument("tick " + std::to_string(t) + " outside [0, denom)");
  }
  ticks_ = std::move(ticks);
}

PointSet PointSet::from_points(std::size_t dim, const std::vector<TorusPoint>& points) {
  std::int64_t denom = 1;
  for (const TorusPoint& p : points) {
    if (p.dim() != dim) throw DimensionError("point dimension mismatch");
    for (const Rat& c : p.coords) {
      require_unit(c, "coordinate");
      denom = checked_lcm(denom, c.den());
    }
  }
  PointSet out(dim, denom);
  std::vector<std::int64_t> row(dim);
  for (const TorusPoint& p : points) {
    for (std::size_t i = 0; i < dim; ++i) row[i] = p.coords[i].num() * (denom / p.coords[i].den());
    out.add(row);
  }
  return out;
}

TorusPoint PointSet::point(std::size_t index) const {
  TorusPoint p;
  p.coords.reserve(dim_);
  for (std::size_t i = 0; i < dim_; ++i) p.coords.push_back(coord(index, i));
  return p;
}

std::vector<TorusPoint> PointSet::points() const {
  std::vector<TorusPoint> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

void PointSet::add(std::span<const std::int64_t> ticks) {
  if (ticks.size() != dim_) throw DimensionError("point dimension mismatch");
  for (std::int64_t t : ticks) {
    if (t < 0 || t >= denom_) throw std::invalid_argument("tick " + std::to_string(t) + " outside [0, denom)");
  }
  ticks_.insert(ticks_.end(), ticks.begin(), ticks.end());
}

PointSet PointSet::rescaled(std::int64_t new_denom) const {
  if (new_denom <= 0 || new_denom % denom_ != 0) {
    throw std::invalid_argument("new denominator must be a positive multiple of the old one");
  }
  std::int64_t f = new_denom / denom_;
  std::vector<std::int64_t> t = ticks_;
  for (auto& v : t) v *= f;
  return PointSet(dim_, new_denom, std::move(t));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  PointSet out(dim_, denom_);
  for (std::size_t i : indices) {
    if (i >= size()) throw std::out_of_range("point index out of range");
    out.add(std::span<const std::int64_t>(ticks_.data() + i * dim_, dim_));
  }
  return out;
}

std::vector<Gap> maximal_gaps(std::span<const Rat> coords) {
  if (coords.empty()) throw std::invalid_argument("maximal_gaps needs at least one coordinate");
  std::vector<Rat> v(coords.begin(), coords.end());
  for (const Rat& x : v) require_unit(x, "coordinate");
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());

  std::vector<Gap> gaps;
  if (v.size() == 1) {
    gaps.push_back({v[0], v[0], Rat(1)});
    return gaps;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rat& a = v[i];
    const Rat& b = v[(i + 1) % v.size()];
    Rat len = i + 1 < v.size() ? b - a : Rat(1) - a + b;
    gaps.push_back({a, b, len});
  }
  std::stable_sort(gaps.begin(), gaps.end(), [](const Gap& x, const Gap& y) {
    if (x.length != y.length) return x.length > y.length;
    return x.start < y.start;
  });
  return gaps;
}

}  // namespace torusvc
