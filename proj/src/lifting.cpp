#include "torusvc/lifting.hpp"

#include <bit>
#include <optional>

#include "torusvc/parallel.hpp"
#include "torusvc/random.hpp"
#include "torusvc/stripes.hpp"

namespace torusvc {

namespace {

bool is_canonical_stripe_set(const PointSet& base, Rat l) {
  const std::size_t u = base.size();
  if (u < 2 || u - 1 >= 63) return false;
  const std::size_t n = u - 1;
  if (n > 20 || (std::size_t{1} << n) > base.dim()) return false;
  try {
    return build_stripe_shattered_set(n, l, base.dim()).points() == base.points();
  } catch (const std::exception&) {
    return false;
  }
}

// Open stripe (start, start + l) in T^k cutting `sub` out of the base set; the
// arc never wraps.
Stripe base_stripe(const LiftInstance& inst, Mask sub) {
  if (inst.canonical_base) return stripe_witness(inst.group_size() - 1, inst.l, sub, inst.base.dim());
  auto s = realizable_by_stripe(inst.base, sub, inst.l, StripeArcs::non_wrapping);
  if (!s) throw LiftError("base set admits no non-wrapping stripe for subset " + std::to_string(sub));
  return *s;
}

}  // namespace

Rat LiftInstance::cube_edge() const {
  return Rat(1) - l / Rat(static_cast<std::int64_t>(groups() + 1));
}

LiftInstance lift_points(const PointSet& base, const SymbolMatrix& matrix, Rat l) {
  if (static_cast<std::size_t>(matrix.alphabet()) != base.dim()) {
    throw DimensionError("matrix alphabet " + std::to_string(matrix.alphabet()) + " differs from base dimension " +
                         std::to_string(base.dim()));
  }
  if (l <= Rat(0) || l >= Rat(1)) throw std::invalid_argument("stripe length must lie in (0,1)");
  if (matrix.rows() == 0 || matrix.cols() == 0) throw std::invalid_argument("matrix must be non-empty");
  const std::size_t c = matrix.rows();
  const std::size_t d = matrix.cols();
  const std::size_t u = base.size();
  const std::int64_t D = base.denom();
  PointSet lifted(d, static_cast<std::int64_t>(c + 1) * D);
  std::vector<std::int64_t> row(d);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < u; ++j) {
      for (std::size_t col = 0; col < d; ++col) {
        auto symbol = static_cast<std::size_t>(matrix.at(i, col));
        row[col] = static_cast<std::int64_t>(i) * D + base.tick(j, symbol);
      }
      lifted.add(row);
    }
  }
  LiftInstance inst{base, matrix, l, std::move(lifted), false};
  inst.canonical_base = is_canonical_stripe_set(base, l);
  return inst;
}

LiftWitness lift_witness(const LiftInstance& inst, Mask subset) {
  const std::size_t c = inst.groups();
  const std::size_t u = inst.group_size();
  const std::size_t d = inst.matrix.cols();
  if (c * u > kMaxMaskPoints) throw GuardError("lifted set exceeds 64 points");
  if ((subset & ~full_mask(c * u)) != 0) throw std::out_of_range("subset mask beyond the lifted points");

  const Rat cells(static_cast<std::int64_t>(c + 1));
  std::vector<Stripe> base_stripes;
  std::vector<int> word(c);
  for (std::size_t i = 0; i < c; ++i) {
    // the stripe covers the group's points left out of the cube
    Mask outside = ~(subset >> (i * u)) & full_mask(u);
    base_stripes.push_back(base_stripe(inst, outside));
    word[i] = static_cast<int>(base_stripes.back().anchor());
  }
  auto columns = extract_columns(inst.matrix, word);
  if (!columns) throw LiftError("matrix cannot extract the anchor word; it lacks the extraction property");

  // Filler stripe above every group cell.
  const Arc filler = Arc::open(Rat(static_cast<std::int64_t>(c)) / cells,
                               (Rat(static_cast<std::int64_t>(c)) + inst.l) / cells);
  std::vector<std::optional<Arc>> per_axis(d);
  for (std::size_t i = 0; i < c; ++i) {
    const Rat alpha = base_stripes[i].arc().start();
    const Rat beta = alpha + inst.l;
    const Rat shift(static_cast<std::int64_t>(i));
    per_axis[(*columns)[i]] = Arc::open((shift + alpha) / cells, (shift + beta) / cells);
  }

  std::vector<Stripe> stripes;
  std::vector<Arc> factors;
  for (std::size_t axis = 0; axis < d; ++axis) {
    const Arc open = per_axis[axis].value_or(filler);
    stripes.emplace_back(axis, open, d);
    factors.push_back(open.complement());
  }
  return LiftWitness{Cube(std::move(factors), inst.cube_edge()), std::move(stripes), std::move(*columns)};
}

Cube cube_witness(const LiftInstance& inst, Mask subset) { return lift_witness(inst, subset).cube; }

LiftReport verify_lift(const LiftInstance& inst, LiftCheck mode, unsigned jobs, bool keep_witnesses) {
  const std::size_t total_points = inst.lifted.size();
  if (total_points > kMaxMaskPoints) throw GuardError("lifted set exceeds 64 points");
  std::vector<Mask> masks;
  if (mode.exhaustive) {
    if (total_points > kLiftExhaustiveGuard) {
      throw GuardError("exhaustive lift check refuses " + std::to_string(total_points) + " > " +
                       std::to_string(kLiftExhaustiveGuard) + " lifted points");
    }
    masks.resize(std::size_t{1} << total_points);
    for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = i;
  } else {
    Rng rng(mode.seed);
    const Mask all = full_mask(total_points);
    for (std::size_t i = 0; i < mode.samples; ++i) masks.push_back(rng.next() & all);
  }

  std::vector<std::optional<Cube>> cubes(masks.size());
  std::vector<std::string> reasons(masks.size());
  parallel_for(masks.size(), jobs, [&](std::size_t i) {
    try {
      Cube cube = cube_witness(inst, masks[i]);
      Mask got = shape_trace(cube, inst.lifted);
      if (got != masks[i]) {
        reasons[i] = "cube cuts out mask " + std::to_string(got);
      }
      cubes[i] = std::move(cube);
    } catch (const LiftError& e) {
      reasons[i] = e.what();
    }
  });

  LiftReport report;
  report.checked = masks.size();
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (!reasons[i].empty()) {
      report.failures.push_back({masks[i], reasons[i]});
    } else if (keep_witnesses) {
      report.witnesses.emplace_back(masks[i], std::move(*cubes[i]));
    }
  }
  return report;
}

}  // namespace torusvc
