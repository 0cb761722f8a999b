#include "torusvc/stripes.hpp"

#include <algorithm>
#include <string>

namespace torusvc {

namespace {

constexpr std::size_t kMaxStripeN = 20;

void check_params(std::size_t n, const Rat& l) {
  if (n == 0) throw std::invalid_argument("stripe construction needs n >= 1");
  if (n > kMaxStripeN) throw GuardError("stripe construction refuses n = " + std::to_string(n) + " (2^n axes)");
  if (l <= Rat(0) || l >= Rat(1)) throw std::invalid_argument("stripe length must lie in (0,1), got " + l.str());
}

std::size_t resolve_ambient(std::size_t n, std::size_t ambient) {
  const std::size_t base = std::size_t{1} << n;
  if (ambient == 0) return base;
  if (ambient < base) {
    throw DimensionError("ambient dimension " + std::to_string(ambient) + " below 2^n = " + std::to_string(base));
  }
  return ambient;
}

}  // namespace

Mask pair_representative(std::size_t axis) { return static_cast<Mask>(axis) << 1; }

std::size_t pair_axis(std::size_t n, Mask subset) {
  Mask rep = ((subset & 1) ? ~subset : subset) & full_mask(n + 1);
  return static_cast<std::size_t>(rep >> 1);
}

Rat stripe_low_value(Rat l) { return (Rat(1) - l) / Rat(3); }
Rat stripe_high_value(Rat l) { return (Rat(2) + l) / Rat(3); }

PointSet build_stripe_shattered_set(std::size_t n, Rat l, std::size_t ambient) {
  check_params(n, l);
  const std::size_t dims = resolve_ambient(n, ambient);
  const std::size_t paired = std::size_t{1} << n;
  const Rat lo = stripe_low_value(l);
  const Rat hi = stripe_high_value(l);
  std::vector<TorusPoint> pts(n + 1);
  for (std::size_t p = 0; p <= n; ++p) {
    pts[p].coords.reserve(dims);
    for (std::size_t axis = 0; axis < dims; ++axis) {
      bool in_rep = axis < paired && ((pair_representative(axis) >> p) & 1);
      pts[p].coords.push_back(in_rep ? lo : hi);
    }
  }
  return PointSet::from_points(dims, pts);
}

Stripe stripe_witness(std::size_t n, Rat l, Mask subset, std::size_t ambient) {
  check_params(n, l);
  const std::size_t dims = resolve_ambient(n, ambient);
  if ((subset & ~full_mask(n + 1)) != 0) throw std::out_of_range("subset mask beyond the n+1 points");
  const std::size_t axis = pair_axis(n, subset);
  // Point 0 is never in the representative, so it sits at (2+l)/3 on every axis.
  const Rat target = (subset & 1) ? stripe_high_value(l) : stripe_low_value(l);
  Rat start = std::clamp(target - l / Rat(2), Rat(0), Rat(1) - l);
  return Stripe(axis, Arc::with_length(start, l, Closure::open), dims);
}

}  // namespace torusvc
