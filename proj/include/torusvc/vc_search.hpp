#pragma once

// Exact VC dimension for small d by enumerating configurations up to symmetry,
// and a randomized hill-climber for larger d.
//
// A configuration assigns every point a level per dimension. Only the weak
// cyclic order of each dimension is kept: levels are normalized so point 0
// sits at level 0 and the used levels are 0..r-1, then realized at level/n.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "torusvc/shatter.hpp"

namespace torusvc {

struct ConfigCode {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<std::vector<int>> levels;  // [dimension][point]

  PointSet realize() const;
  friend bool operator==(const ConfigCode&, const ConfigCode&) = default;
};

/// Block sizes of a weak cyclic order read around the circle, in the
/// lexicographically least rotation or reflection.
std::vector<int> composition_bracelet(const std::vector<int>& levels);

inline constexpr std::size_t kEnumMaxDim = 2;
inline constexpr std::size_t kEnumMaxPoints = 8;

/// Visits one configuration per class under level rotation and reflection,
/// point relabeling and dimension swap (the reduction is sound, not maximal).
/// Return false from the callback to stop early. Throws GuardError beyond
/// d <= 2, n <= 8.
void for_each_config(std::size_t d, std::size_t n, const std::function<bool(const ConfigCode&)>& visit);
std::vector<ConfigCode> enumerate_configs(std::size_t d, std::size_t n);

using Certificates = std::vector<std::pair<Mask, Shape>>;

struct VcExactResult {
  std::size_t value = 0;
  std::optional<PointSet> witness;  // a shattered set of size `value`
  Certificates certificates;        // ascending by mask
  /// Size at which the enumeration found nothing shattered, if it got there.
  std::optional<std::size_t> refuted_at;
  /// Whether that refutation covers every real configuration. Weak orders
  /// decide boxes exactly; for cubes in d >= 2 and fixed-length stripes the
  /// metric matters and the enumeration only samples level/n coordinates.
  bool refutation_complete = false;
  std::uint64_t configs_checked = 0;
};

/// Scans n = 1..n_max, stopping at the first n with no shattered configuration.
VcExactResult vc_exact(std::size_t d, const Family& family, std::size_t n_max, unsigned jobs = 1);

struct SearchResult {
  PointSet points;
  Certificates certificates;
  std::uint64_t evaluations = 0;
};

/// Hill-climbing on levels in 0..2n-1 (coordinates level/(2n)); one move
/// changes one point's level in one dimension, moves that do not lower the
/// number of realizable masks are kept, and the climb restarts after a stall.
/// The budget counts objective evaluations. A result is re-verified by
/// shatter_report before being returned.
std::optional<SearchResult> search_shattered(std::size_t d, std::size_t n, std::uint64_t budget, std::uint64_t seed,
                                             const Family& family = Family::boxes());

}  // namespace torusvc
