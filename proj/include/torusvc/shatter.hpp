#pragma once

// Realizability oracles and shattering verdicts for boxes, cubes and stripes.
//
// All oracles search a finite set of candidate arcs. Point coordinates are
// multiples of 1/D, so every containment pattern achievable by some arc is
// achieved by an arc whose endpoints are critical positions (a point
// coordinate, or a point coordinate minus the arc length) or midpoints
// between consecutive critical positions. Witness shapes therefore have
// endpoints on the 1/(4D) grid for boxes and cubes, and on the
// 1/(2 lcm(D, den(l))) grid for stripes of length l.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "torusvc/torus.hpp"

namespace torusvc {

/// Subset of point indices; bit i set means point i is in the subset.
using Mask = std::uint64_t;

inline constexpr std::size_t kMaxMaskPoints = 64;

inline Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

/// Raised when an enumeration would exceed its documented size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Family {
  enum class Kind { boxes, cubes, stripes_fixed, stripes_any };

  Kind kind = Kind::boxes;
  Rat length{};  // only for stripes_fixed, in (0,1)

  static Family boxes() { return {Kind::boxes, Rat(0)}; }
  static Family cubes() { return {Kind::cubes, Rat(0)}; }
  static Family stripes_any() { return {Kind::stripes_any, Rat(0)}; }
  static Family stripes(Rat l);

  /// "boxes", "cubes", "stripes(l=1/2)", "stripes-any".
  std::string name() const;
  friend bool operator==(const Family&, const Family&) = default;
};

using Shape = std::variant<Box, Cube, Stripe>;

bool shape_contains(const Shape& shape, const TorusPoint& p);
/// Mask of the points of `ps` lying in `shape`, by direct containment tests.
Mask shape_trace(const Shape& shape, const PointSet& ps);

/// Which stripe positions realizable_by_stripe may return.
enum class StripeArcs {
  any,
  /// Only arcs (a, a+l) with 0 <= a and a+l <= 1, i.e. stripes of [0,1]^d.
  non_wrapping,
};

std::optional<Box> realizable_by_box(const PointSet& ps, Mask subset);
std::optional<Cube> realizable_by_cube(const PointSet& ps, Mask subset);
/// Cube oracle restricted to one edge length.
std::optional<Cube> realizable_by_cube_with_edge(const PointSet& ps, Mask subset, Rat edge);
std::optional<Stripe> realizable_by_stripe(const PointSet& ps, Mask subset, Rat length,
                                           StripeArcs arcs = StripeArcs::any);
/// Stripes of any length in (0,1).
std::optional<Stripe> realizable_by_any_stripe(const PointSet& ps, Mask subset);

/// Precomputed oracle for one point set and family; answers many subset queries.
///
/// Construction does all per-point-set work, after which queries are const
/// and safe to run concurrently.
class RealizabilityOracle {
 public:
  RealizabilityOracle(const PointSet& ps, Family family);
  ~RealizabilityOracle();
  RealizabilityOracle(RealizabilityOracle&&) noexcept;
  RealizabilityOracle& operator=(RealizabilityOracle&&) noexcept;

  const PointSet& points() const;
  const Family& family() const;

  bool realizable(Mask subset) const;
  std::optional<Shape> witness(Mask subset) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ShatterReport {
  bool shattered = false;
  std::optional<Mask> missing;
  /// Ascending by mask; complete (2^n entries) when shattered.
  std::vector<std::pair<Mask, Shape>> witnesses;
};

inline constexpr std::size_t kShatterGuard = 30;
inline constexpr std::size_t kGrowthGuard = 20;

/// Walks all masks in ascending order; stops at the first unrealizable one.
ShatterReport shatter_report(const PointSet& ps, const Family& family, unsigned jobs = 1);
/// Same verdict as shatter_report without materialising witnesses.
std::optional<Mask> first_missing(const RealizabilityOracle& oracle, unsigned jobs = 1);
bool is_shattered(const PointSet& ps, const Family& family);

/// Number of distinct subsets cut out by the family.
std::uint64_t growth_count(const PointSet& ps, const Family& family, unsigned jobs = 1);
std::uint64_t growth_count(const RealizabilityOracle& oracle, unsigned jobs = 1);

}  // namespace torusvc
