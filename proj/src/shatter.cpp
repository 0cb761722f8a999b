#include "torusvc/shatter.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "torusvc/parallel.hpp"

namespace torusvc {

namespace {

void check_mask(const PointSet& ps, Mask subset) {
  if (ps.size() > kMaxMaskPoints) {
    throw GuardError("mask-based oracles support at most 64 points, got " + std::to_string(ps.size()));
  }
  if ((subset & ~full_mask(ps.size())) != 0) {
    throw std::out_of_range("subset mask refers to points beyond index " + std::to_string(ps.size()));
  }
}

// Distinct coordinate values of one axis, with the points sitting at each value.
struct AxisValues {
  std::vector<std::int64_t> vals;  // ascending ticks over denom
  std::vector<Mask> at;            // points at vals[i]
  // run[i][len-1]: points in the cyclic value run starting at i of the given length
  std::vector<std::vector<Mask>> run;

  std::size_t size() const { return vals.size(); }
};

AxisValues axis_values(const PointSet& ps, std::size_t axis) {
  AxisValues av;
  for (std::size_t p = 0; p < ps.size(); ++p) av.vals.push_back(ps.tick(p, axis));
  std::sort(av.vals.begin(), av.vals.end());
  av.vals.erase(std::unique(av.vals.begin(), av.vals.end()), av.vals.end());
  av.at.assign(av.vals.size(), 0);
  for (std::size_t p = 0; p < ps.size(); ++p) {
    auto it = std::lower_bound(av.vals.begin(), av.vals.end(), ps.tick(p, axis));
    av.at[static_cast<std::size_t>(it - av.vals.begin())] |= Mask{1} << p;
  }
  const std::size_t r = av.size();
  av.run.assign(r, std::vector<Mask>(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    Mask acc = 0;
    for (std::size_t len = 1; len <= r; ++len) {
      acc |= av.at[(i + len - 1) % r];
      av.run[i][len - 1] = acc;
    }
  }
  return av;
}

// A candidate factor: the points it contains and enough data to rebuild the arc.
struct Candidate {
  Mask mask;
  std::int64_t a;  // start position or value index, interpretation per family
  std::int64_t b;  // run length or unused
};

// Picks one candidate per axis so that the intersection of their masks equals
// `target`. Every candidate must already contain `target`. Breadth-first over
// axes, deduplicating partial intersections.
std::optional<std::vector<std::size_t>> choose_factors(const std::vector<std::vector<Candidate>>& cands,
                                                       Mask target, Mask all) {
  struct Node {
    Mask cur;
    std::uint32_t prev;
    std::uint32_t cand;
  };
  const std::size_t d = cands.size();
  for (const auto& c : cands) {
    if (c.empty()) return std::nullopt;
  }
  std::vector<std::vector<Node>> layers(d + 1);
  layers[0].push_back({all, 0, 0});

  auto backtrack = [&](std::size_t layer, std::size_t node) {
    std::vector<std::size_t> pick(d, 0);
    for (std::size_t k = layer; k > 0; --k) {
      const Node& nd = layers[k][node];
      pick[k - 1] = nd.cand;
      node = nd.prev;
    }
    return pick;
  };

  std::unordered_set<Mask> seen;
  for (std::size_t axis = 0; axis < d; ++axis) {
    const auto& prev = layers[axis];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (prev[i].cur == target) return backtrack(axis, i);
    }
    seen.clear();
    auto& next = layers[axis + 1];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      for (std::size_t c = 0; c < cands[axis].size(); ++c) {
        Mask m = prev[i].cur & cands[axis][c].mask;
        if (seen.insert(m).second) {
          next.push_back({m, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(c)});
        }
      }
    }
  }
  const auto& last = layers[d];
  for (std::size_t i = 0; i < last.size(); ++i) {
    if (last[i].cur == target) return backtrack(d, i);
  }
  return std::nullopt;
}

// Start positions, on a tick grid of size T, at which every distinct trace of
// an arc of length L is attained. Point ticks and L must be even.
std::vector<std::int64_t> critical_positions(const std::vector<std::int64_t>& xs, std::int64_t T,
                                             std::int64_t L, bool non_wrapping) {
  std::vector<std::int64_t> crit;
  for (std::int64_t x : xs) {
    crit.push_back(x);
    crit.push_back(((x - L) % T + T) % T);
  }
  if (non_wrapping) {
    std::erase_if(crit, [&](std::int64_t a) { return a > T - L; });
    crit.push_back(0);
    crit.push_back(T - L);
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  std::vector<std::int64_t> out;
  if (crit.empty()) {
    out.push_back(0);
    return out;
  }
  for (std::size_t i = 0; i < crit.size(); ++i) {
    out.push_back(crit[i]);
    if (i + 1 < crit.size()) {
      out.push_back((crit[i] + crit[i + 1]) / 2);
    } else if (!non_wrapping) {
      out.push_back(((crit[i] + crit[0] + T) / 2) % T);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t cyc(std::int64_t v, std::int64_t T) { return ((v % T) + T) % T; }

// Distinct traces of closed arcs [a, a+L] on one axis, first position wins.
std::vector<Candidate> closed_traces(const std::vector<std::int64_t>& xs, std::int64_t T, std::int64_t L) {
  std::vector<Candidate> out;
  std::unordered_set<Mask> seen;
  for (std::int64_t a : critical_positions(xs, T, L, false)) {
    Mask m = 0;
    for (std::size_t p = 0; p < xs.size(); ++p) {
      if (cyc(xs[p] - a, T) <= L) m |= Mask{1} << p;
    }
    if (seen.insert(m).second) out.push_back({m, a, 0});
  }
  return out;
}

std::vector<Candidate> open_traces(const std::vector<std::int64_t>& xs, std::int64_t T, std::int64_t L,
                                   bool non_wrapping) {
  std::vector<Candidate> out;
  std::unordered_set<Mask> seen;
  for (std::int64_t a : critical_positions(xs, T, L, non_wrapping)) {
    Mask m = 0;
    for (std::size_t p = 0; p < xs.size(); ++p) {
      std::int64_t off = cyc(xs[p] - a, T);
      if (off > 0 && off < L) m |= Mask{1} << p;
    }
    if (seen.insert(m).second) out.push_back({m, a, 0});
  }
  return out;
}

std::vector<std::int64_t> axis_ticks(const PointSet& ps, std::size_t axis, std::int64_t scale) {
  std::vector<std::int64_t> xs;
  xs.reserve(ps.size());
  for (std::size_t p = 0; p < ps.size(); ++p) xs.push_back(ps.tick(p, axis) * scale);
  return xs;
}

// Closed arc clear of every point: inside (0, 1/D), which holds no grid value.
Arc empty_closed_arc(std::int64_t D) { return Arc::closed(Rat(1, 4 * D), Rat(3, 4 * D)); }

// Candidates for one stripe length over all axes, positions on a grid of T ticks.
struct StripeTable {
  std::int64_t T = 0;
  std::int64_t L = 0;
  std::vector<std::vector<Candidate>> per_axis;
};

StripeTable stripe_table(const PointSet& ps, Rat length, bool non_wrapping) {
  if (length <= Rat(0) || length >= Rat(1)) throw std::invalid_argument("stripe length outside (0,1)");
  StripeTable t;
  t.T = 2 * checked_lcm(ps.denom(), length.den());
  t.L = length.num() * (t.T / length.den());
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) {
    t.per_axis.push_back(open_traces(axis_ticks(ps, axis, t.T / ps.denom()), t.T, t.L, non_wrapping));
  }
  return t;
}

std::optional<Stripe> stripe_lookup(const PointSet& ps, const StripeTable& t, Mask subset, Rat length) {
  for (std::size_t axis = 0; axis < t.per_axis.size(); ++axis) {
    for (const Candidate& c : t.per_axis[axis]) {
      if (c.mask == subset) {
        return Stripe(axis, Arc::with_length(Rat(c.a, t.T), length, Closure::open), ps.dim());
      }
    }
  }
  return std::nullopt;
}

// Cube candidates for one edge length.
struct CubeLevel {
  std::int64_t T = 0;
  std::int64_t L = 0;
  std::vector<std::vector<Candidate>> per_axis;
};

CubeLevel cube_level(const PointSet& ps, std::int64_t T, std::int64_t L) {
  CubeLevel lv{T, L, {}};
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) {
    lv.per_axis.push_back(closed_traces(axis_ticks(ps, axis, T / ps.denom()), T, L));
  }
  return lv;
}

std::optional<Cube> cube_lookup(const PointSet& ps, const CubeLevel& lv, Mask subset) {
  std::vector<std::vector<Candidate>> cands(ps.dim());
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) {
    for (const Candidate& c : lv.per_axis[axis]) {
      if ((c.mask & subset) == subset) cands[axis].push_back(c);
    }
  }
  auto pick = choose_factors(cands, subset, full_mask(ps.size()));
  if (!pick) return std::nullopt;
  std::vector<Rat> starts;
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) starts.push_back(Rat(cands[axis][(*pick)[axis]].a, lv.T));
  return Cube::at(starts, Rat(lv.L, lv.T));
}

std::vector<Candidate> box_candidates(const AxisValues& av, Mask subset) {
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (av.at[i] & subset) sel.push_back(i);
  }
  std::vector<Candidate> out;
  const std::size_t r = av.size();
  if (sel.size() == 1) {
    out.push_back({av.at[sel[0]], static_cast<std::int64_t>(sel[0]), 1});
    return out;
  }
  // One minimal arc per gap between consecutive selected values: it runs from
  // the value after the gap forward to the value before it.
  for (std::size_t g = 0; g < sel.size(); ++g) {
    std::size_t start = sel[(g + 1) % sel.size()];
    std::size_t stop = sel[g];
    std::size_t len = (stop + r - start) % r + 1;
    out.push_back({av.run[start][len - 1], static_cast<std::int64_t>(start), static_cast<std::int64_t>(len)});
  }
  return out;
}

Arc box_arc(const AxisValues& av, const Candidate& c, std::int64_t D) {
  auto start = static_cast<std::size_t>(c.a);
  auto len = static_cast<std::size_t>(c.b);
  Rat lo(av.vals[start], D);
  if (len == 1) return Arc::closed(lo, lo + Rat(1, 2 * D));
  Rat hi(av.vals[(start + len - 1) % av.size()], D);
  return Arc::closed(lo, hi);
}

std::optional<Box> box_lookup(const PointSet& ps, const std::vector<AxisValues>& axes, Mask subset) {
  const std::int64_t D = ps.denom();
  if (subset == 0) return Box(std::vector<Arc>(ps.dim(), empty_closed_arc(D)));
  std::vector<std::vector<Candidate>> cands;
  for (const AxisValues& av : axes) cands.push_back(box_candidates(av, subset));
  auto pick = choose_factors(cands, subset, full_mask(ps.size()));
  if (!pick) return std::nullopt;
  std::vector<Arc> arcs;
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) arcs.push_back(box_arc(axes[axis], cands[axis][(*pick)[axis]], D));
  return Box(std::move(arcs));
}

// Open arcs of free length: a subset is cut out on an axis iff its values are
// not shared with outsiders and form one cyclic run of the distinct values.
std::optional<Stripe> any_stripe_lookup(const PointSet& ps, const std::vector<AxisValues>& axes, Mask subset) {
  const std::int64_t D = ps.denom();
  if (subset == 0) return Stripe(0, Arc::open(Rat(1, 4 * D), Rat(3, 4 * D)), ps.dim());
  for (std::size_t axis = 0; axis < axes.size(); ++axis) {
    const AxisValues& av = axes[axis];
    const std::size_t r = av.size();
    std::vector<bool> in(r, false);
    bool clean = true;
    std::size_t count = 0;
    for (std::size_t i = 0; i < r; ++i) {
      Mask hit = av.at[i] & subset;
      if (hit == 0) continue;
      if (hit != av.at[i]) {
        clean = false;
        break;
      }
      in[i] = true;
      ++count;
    }
    if (!clean) continue;
    // Start of the run: an included value whose predecessor is excluded.
    std::size_t start = r;
    if (count == r) {
      // Everything included: open the arc just after the longest gap.
      std::size_t best = 0;
      std::int64_t best_len = -1;
      for (std::size_t i = 0; i < r; ++i) {
        std::int64_t gap = i + 1 < r ? av.vals[i + 1] - av.vals[i] : D - av.vals[i] + av.vals[0];
        if (gap > best_len) {
          best_len = gap;
          best = (i + 1) % r;
        }
      }
      start = best;
    } else {
      std::size_t starts = 0;
      for (std::size_t i = 0; i < r; ++i) {
        if (in[i] && !in[(i + r - 1) % r]) {
          start = i;
          ++starts;
        }
      }
      if (starts != 1) continue;
    }
    std::size_t stop = (start + count - 1) % r;
    Rat lo = Rat(av.vals[start], D) - Rat(1, 4 * D);
    Rat hi = Rat(av.vals[stop], D) + Rat(1, 4 * D);
    return Stripe(axis, Arc::open(lo, hi), ps.dim());
  }
  return std::nullopt;
}

}  // namespace

Family Family::stripes(Rat l) {
  if (l <= Rat(0) || l >= Rat(1)) throw std::invalid_argument("stripe length must lie in (0,1)");
  return {Kind::stripes_fixed, l};
}

std::string Family::name() const {
  switch (kind) {
    case Kind::boxes:
      return "boxes";
    case Kind::cubes:
      return "cubes";
    case Kind::stripes_fixed:
      return "stripes(l=" + length.str() + ")";
    case Kind::stripes_any:
      return "stripes-any";
  }
  return "?";
}

bool shape_contains(const Shape& shape, const TorusPoint& p) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) return box_contains(s, p);
        if constexpr (std::is_same_v<T, Cube>) return cube_contains(s, p);
        if constexpr (std::is_same_v<T, Stripe>) return stripe_contains(s, p);
      },
      shape);
}

Mask shape_trace(const Shape& shape, const PointSet& ps) {
  if (ps.size() > kMaxMaskPoints) throw GuardError("shape_trace supports at most 64 points");
  Mask m = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (shape_contains(shape, ps.point(i))) m |= Mask{1} << i;
  }
  return m;
}

std::optional<Box> realizable_by_box(const PointSet& ps, Mask subset) {
  check_mask(ps, subset);
  std::vector<AxisValues> axes;
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) axes.push_back(axis_values(ps, axis));
  return box_lookup(ps, axes, subset);
}

std::optional<Cube> realizable_by_cube(const PointSet& ps, Mask subset) {
  check_mask(ps, subset);
  const std::int64_t T = 4 * ps.denom();
  for (std::int64_t L = 2; L < T; L += 2) {
    if (auto c = cube_lookup(ps, cube_level(ps, T, L), subset)) return c;
  }
  return std::nullopt;
}

std::optional<Cube> realizable_by_cube_with_edge(const PointSet& ps, Mask subset, Rat edge) {
  check_mask(ps, subset);
  if (edge <= Rat(0) || edge >= Rat(1)) throw std::invalid_argument("cube edge outside (0,1)");
  const std::int64_t T = 2 * checked_lcm(ps.denom(), edge.den());
  return cube_lookup(ps, cube_level(ps, T, edge.num() * (T / edge.den())), subset);
}

std::optional<Stripe> realizable_by_stripe(const PointSet& ps, Mask subset, Rat length, StripeArcs arcs) {
  check_mask(ps, subset);
  StripeTable t = stripe_table(ps, length, arcs == StripeArcs::non_wrapping);
  return stripe_lookup(ps, t, subset, length);
}

std::optional<Stripe> realizable_by_any_stripe(const PointSet& ps, Mask subset) {
  check_mask(ps, subset);
  std::vector<AxisValues> axes;
  for (std::size_t axis = 0; axis < ps.dim(); ++axis) axes.push_back(axis_values(ps, axis));
  return any_stripe_lookup(ps, axes, subset);
}

struct RealizabilityOracle::Impl {
  PointSet ps;
  Family family;
  std::vector<AxisValues> axes;
  std::vector<CubeLevel> cube_levels;
  StripeTable stripes;
};

RealizabilityOracle::RealizabilityOracle(const PointSet& ps, Family family)
    : impl_(std::make_unique<Impl>(Impl{ps, family, {}, {}, {}})) {
  if (ps.size() > kMaxMaskPoints) throw GuardError("oracle supports at most 64 points");
  switch (family.kind) {
    case Family::Kind::boxes:
    case Family::Kind::stripes_any:
      for (std::size_t axis = 0; axis < ps.dim(); ++axis) impl_->axes.push_back(axis_values(ps, axis));
      break;
    case Family::Kind::cubes: {
      const std::int64_t T = 4 * ps.denom();
      for (std::int64_t L = 2; L < T; L += 2) impl_->cube_levels.push_back(cube_level(ps, T, L));
      break;
    }
    case Family::Kind::stripes_fixed:
      impl_->stripes = stripe_table(ps, family.length, false);
      break;
  }
}

RealizabilityOracle::~RealizabilityOracle() = default;
RealizabilityOracle::RealizabilityOracle(RealizabilityOracle&&) noexcept = default;
RealizabilityOracle& RealizabilityOracle::operator=(RealizabilityOracle&&) noexcept = default;

const PointSet& RealizabilityOracle::points() const { return impl_->ps; }
const Family& RealizabilityOracle::family() const { return impl_->family; }

std::optional<Shape> RealizabilityOracle::witness(Mask subset) const {
  const PointSet& ps = impl_->ps;
  check_mask(ps, subset);
  switch (impl_->family.kind) {
    case Family::Kind::boxes:
      if (auto b = box_lookup(ps, impl_->axes, subset)) return Shape(*b);
      return std::nullopt;
    case Family::Kind::cubes:
      for (const CubeLevel& lv : impl_->cube_levels) {
        if (auto c = cube_lookup(ps, lv, subset)) return Shape(*c);
      }
      return std::nullopt;
    case Family::Kind::stripes_fixed:
      if (auto s = stripe_lookup(ps, impl_->stripes, subset, impl_->family.length)) return Shape(*s);
      return std::nullopt;
    case Family::Kind::stripes_any:
      if (auto s = any_stripe_lookup(ps, impl_->axes, subset)) return Shape(*s);
      return std::nullopt;
  }
  return std::nullopt;
}

bool RealizabilityOracle::realizable(Mask subset) const {
  const PointSet& ps = impl_->ps;
  check_mask(ps, subset);
  switch (impl_->family.kind) {
    case Family::Kind::boxes: {
      if (subset == 0) return true;
      std::vector<std::vector<Candidate>> cands;
      for (const AxisValues& av : impl_->axes) cands.push_back(box_candidates(av, subset));
      return choose_factors(cands, subset, full_mask(ps.size())).has_value();
    }
    case Family::Kind::cubes:
      for (const CubeLevel& lv : impl_->cube_levels) {
        std::vector<std::vector<Candidate>> cands(ps.dim());
        for (std::size_t axis = 0; axis < ps.dim(); ++axis) {
          for (const Candidate& c : lv.per_axis[axis]) {
            if ((c.mask & subset) == subset) cands[axis].push_back(c);
          }
        }
        if (choose_factors(cands, subset, full_mask(ps.size()))) return true;
      }
      return false;
    case Family::Kind::stripes_fixed:
      for (const auto& axis : impl_->stripes.per_axis) {
        for (const Candidate& c : axis) {
          if (c.mask == subset) return true;
        }
      }
      return false;
    case Family::Kind::stripes_any:
      return any_stripe_lookup(ps, impl_->axes, subset).has_value();
  }
  return false;
}

namespace {

constexpr std::size_t kBlock = 1 << 12;

}  // namespace

ShatterReport shatter_report(const PointSet& ps, const Family& family, unsigned jobs) {
  if (ps.size() > kShatterGuard) {
    throw GuardError("shatter_report refuses n = " + std::to_string(ps.size()) + " > " +
                     std::to_string(kShatterGuard));
  }
  RealizabilityOracle oracle(ps, family);
  ShatterReport report;
  const Mask total = Mask{1} << ps.size();
  std::vector<std::optional<Shape>> block;
  for (Mask base = 0; base < total; base += kBlock) {
    const std::size_t count = static_cast<std::size_t>(std::min<Mask>(kBlock, total - base));
    block.assign(count, std::nullopt);
    parallel_for(count, jobs, [&](std::size_t i) { block[i] = oracle.witness(base + i); });
    for (std::size_t i = 0; i < count; ++i) {
      if (!block[i]) {
        report.shattered = false;
        report.missing = base + i;
        return report;
      }
      report.witnesses.emplace_back(base + i, std::move(*block[i]));
    }
  }
  report.shattered = true;
  return report;
}

std::optional<Mask> first_missing(const RealizabilityOracle& oracle, unsigned jobs) {
  const std::size_t n = oracle.points().size();
  if (n > kShatterGuard) {
    throw GuardError("shattering check refuses n = " + std::to_string(n) + " > " + std::to_string(kShatterGuard));
  }
  const Mask total = Mask{1} << n;
  std::vector<char> ok;
  for (Mask base = 0; base < total; base += kBlock) {
    const std::size_t count = static_cast<std::size_t>(std::min<Mask>(kBlock, total - base));
    if (jobs <= 1) {
      for (std::size_t i = 0; i < count; ++i) {
        if (!oracle.realizable(base + i)) return base + i;
      }
      continue;
    }
    ok.assign(count, 0);
    parallel_for(count, jobs, [&](std::size_t i) { ok[i] = oracle.realizable(base + i) ? 1 : 0; });
    for (std::size_t i = 0; i < count; ++i) {
      if (!ok[i]) return base + i;
    }
  }
  return std::nullopt;
}

bool is_shattered(const PointSet& ps, const Family& family) {
  return !first_missing(RealizabilityOracle(ps, family)).has_value();
}

std::uint64_t growth_count(const RealizabilityOracle& oracle, unsigned jobs) {
  const std::size_t n = oracle.points().size();
  if (n > kGrowthGuard) {
    throw GuardError("growth_count refuses n = " + std::to_string(n) + " > " + std::to_string(kGrowthGuard));
  }
  const std::size_t total = std::size_t{1} << n;
  std::vector<char> ok(total, 0);
  parallel_for(total, jobs, [&](std::size_t i) { ok[i] = oracle.realizable(i) ? 1 : 0; });
  return static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1));
}

std::uint64_t growth_count(const PointSet& ps, const Family& family, unsigned jobs) {
  if (ps.size() > kGrowthGuard) {
    throw GuardError("growth_count refuses n = " + std::to_string(ps.size()) + " > " + std::to_string(kGrowthGuard));
  }
  return growth_count(RealizabilityOracle(ps, family), jobs);
}

}  // namespace torusvc
