#pragma once

// Lifting a stripe-shattered set through an extraction matrix.
//
// Given u points X in T^k shattered by stripes of length l, and a c x d matrix
// M over k symbols with the extraction property, the c*u points
//
//     y(i;j)_n = (i + x(j)_{M[i][n]}) / (c+1)      (0-based i, n)
//
// are shattered by cubes in T^d of edge 1 - l/(c+1). Group i lives in the
// open cell (i/(c+1), (i+1)/(c+1))^d. Lifted point y(i;j) has index i*u + j.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "torusvc/extraction.hpp"
#include "torusvc/shatter.hpp"

namespace torusvc {

/// Raised when a cube witness cannot be built, e.g. the matrix cannot extract a word.
class LiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LiftInstance {
  PointSet base;          // X, u points in T^k
  SymbolMatrix matrix;    // c x d over k symbols
  Rat l;
  PointSet lifted;        // c*u points in T^d, denominator (c+1)*denom(X)
  bool canonical_base = false;  // X is build_stripe_shattered_set(u-1, l, k)

  std::size_t groups() const { return matrix.rows(); }
  std::size_t group_size() const { return base.size(); }
  Rat cube_edge() const;
};

LiftInstance lift_points(const PointSet& base, const SymbolMatrix& matrix, Rat l);

struct LiftWitness {
  Cube cube;
  /// One open stripe per axis of T^d; the cube is the complement of their union.
  std::vector<Stripe> stripes;
  /// Column n_i carrying group i's stripe.
  std::vector<std::size_t> columns;
};

/// Builds the cube cutting `subset` out of the lifted points. Each group gets
/// a stripe witness in T^k placed on its matched column; the other columns get
/// filler stripes above every group.
LiftWitness lift_witness(const LiftInstance& inst, Mask subset);
Cube cube_witness(const LiftInstance& inst, Mask subset);

struct LiftCheck {
  bool exhaustive = true;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static LiftCheck all() { return {true, 0, 0}; }
  static LiftCheck sample(std::size_t count, std::uint64_t seed) { return {false, count, seed}; }
};

struct LiftFailure {
  Mask mask;
  std::string reason;
};

struct LiftReport {
  std::size_t checked = 0;
  std::vector<LiftFailure> failures;
  std::vector<std::pair<Mask, Cube>> witnesses;  // filled when requested, in check order

  bool passed() const { return failures.empty(); }
};

inline constexpr std::size_t kLiftExhaustiveGuard = 24;

/// Checks that every cube witness cuts out exactly its mask.
LiftReport verify_lift(const LiftInstance& inst, LiftCheck mode, unsigned jobs = 1, bool keep_witnesses = false);

}  // namespace torusvc
