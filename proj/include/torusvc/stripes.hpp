#pragma once

// n+1 points in dimension 2^n that stripes of any fixed length shatter.
//
// Subsets of the point set C = {0..n} come in complementary pairs {S, C\S};
// the representative of a pair is the member not containing point 0, and
// axis i carries the pair whose representative is {p in 1..n : bit p-1 of i}.
// On axis i the representative sits at (1-l)/3 and everyone else at (2+l)/3.

#include <cstddef>

#include "torusvc/shatter.hpp"

namespace torusvc {

/// The representative subset (bit p = point p, point 0 never included) for axis i.
Mask pair_representative(std::size_t axis);
/// The axis whose pair contains `subset`, for a subset of the n+1 points.
std::size_t pair_axis(std::size_t n, Mask subset);

Rat stripe_low_value(Rat l);   // (1-l)/3
Rat stripe_high_value(Rat l);  // (2+l)/3

/// n+1 points in T^ambient, ambient >= 2^n (defaults to 2^n). Axes beyond 2^n
/// put every point at (2+l)/3.
PointSet build_stripe_shattered_set(std::size_t n, Rat l, std::size_t ambient = 0);

/// Stripe of length exactly l cutting `subset` out of build_stripe_shattered_set(n, l, ambient).
///
/// The arc is centred on the value the subset occupies, then shifted as little
/// as possible to stay inside [0,1] so it never wraps.
Stripe stripe_witness(std::size_t n, Rat l, Mask subset, std::size_t ambient = 0);

}  // namespace torusvc
