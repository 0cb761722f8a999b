#include "torusvc/vc_search.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <string>

#include "torusvc/parallel.hpp"
#include "torusvc/random.hpp"

namespace torusvc {

namespace {

std::vector<int> canonical_cycle(const std::vector<int>& seq) {
  std::vector<int> best = seq;
  const std::size_t r = seq.size();
  std::vector<int> cand(r);
  for (int dir = 0; dir < 2; ++dir) {
    for (std::size_t s = 0; s < r; ++s) {
      for (std::size_t i = 0; i < r; ++i) {
        cand[i] = dir == 0 ? seq[(s + i) % r] : seq[(s + r - i) % r];
      }
      if (cand < best) best = cand;
    }
  }
  return best;
}

// Canonical compositions of n, each the least member of its dihedral class.
std::vector<std::vector<int>> canonical_compositions(std::size_t n) {
  std::vector<std::vector<int>> out;
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (n - 1)); ++cuts) {
    std::vector<int> comp;
    int run = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if ((cuts >> i) & 1U) {
        comp.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    comp.push_back(run);
    if (canonical_cycle(comp) == comp) out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> levels_of(const std::vector<int>& comp) {
  std::vector<int> lv;
  for (std::size_t b = 0; b < comp.size(); ++b) lv.insert(lv.end(), static_cast<std::size_t>(comp[b]), static_cast<int>(b));
  return lv;
}

// Level maps with point 0 at level 0 whose image is exactly 0..r-1.
void for_each_weak_order(std::size_t n, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> lv(n, 0);
  std::vector<int> used(n, 0);
  used[0] = 1;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (stop) return;
    if (p == n) {
      std::size_t r = 0;
      while (r < n && used[r]) ++r;
      for (std::size_t j = r; j < n; ++j) {
        if (used[j]) return;
      }
      if (!visit(lv)) stop = true;
      return;
    }
    for (std::size_t v = 0; v < n && !stop; ++v) {
      lv[p] = static_cast<int>(v);
      ++used[v];
      rec(p + 1);
      --used[v];
    }
  };
  rec(1);
}

void check_enum_guard(std::size_t d, std::size_t n) {
  if (d == 0 || n == 0) throw std::invalid_argument("d and n must be positive");
  if (d > kEnumMaxDim || n > kEnumMaxPoints) {
    throw GuardError("enumeration refuses d = " + std::to_string(d) + ", n = " + std::to_string(n) + " (limits d <= " +
                     std::to_string(kEnumMaxDim) + ", n <= " + std::to_string(kEnumMaxPoints) + ")");
  }
}

bool refutation_is_complete(std::size_t d, const Family& f) {
  switch (f.kind) {
    case Family::Kind::boxes:
    case Family::Kind::stripes_any:
      return true;
    case Family::Kind::cubes:
      return d == 1;
    case Family::Kind::stripes_fixed:
      return false;
  }
  return false;
}

PointSet realize_levels(const std::vector<std::vector<int>>& levels, std::size_t n, std::int64_t denom) {
  PointSet ps(levels.size(), denom);
  std::vector<std::int64_t> row(levels.size());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t a = 0; a < levels.size(); ++a) row[a] = levels[a][p];
    ps.add(row);
  }
  return ps;
}

}  // namespace

PointSet ConfigCode::realize() const { return realize_levels(levels, n, static_cast<std::int64_t>(n)); }

std::vector<int> composition_bracelet(const std::vector<int>& levels) {
  std::map<int, int> counts;
  for (int v : levels) ++counts[v];
  std::vector<int> seq;
  for (const auto& [v, c] : counts) seq.push_back(c);
  return canonical_cycle(seq);
}

void for_each_config(std::size_t d, std::size_t n, const std::function<bool(const ConfigCode&)>& visit) {
  check_enum_guard(d, n);
  const auto comps = canonical_compositions(n);
  ConfigCode code;
  code.d = d;
  code.n = n;
  code.levels.resize(d);
  for (const auto& comp : comps) {
    code.levels[0] = levels_of(comp);
    if (d == 1) {
      if (!visit(code)) return;
      continue;
    }
    bool stop = false;
    for_each_weak_order(n, [&](const std::vector<int>& lv) {
      // dimension swap: keep the order whose first dimension has the smaller bracelet
      if (composition_bracelet(lv) < comp) return true;
      code.levels[1] = lv;
      if (!visit(code)) {
        stop = true;
        return false;
      }
      return true;
    });
    if (stop) return;
  }
}

std::vector<ConfigCode> enumerate_configs(std::size_t d, std::size_t n) {
  std::vector<ConfigCode> out;
  for_each_config(d, n, [&](const ConfigCode& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

VcExactResult vc_exact(std::size_t d, const Family& family, std::size_t n_max, unsigned jobs) {
  check_enum_guard(d, n_max);
  VcExactResult res;
  constexpr std::size_t kBatch = 4096;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::optional<ConfigCode> found;
    std::vector<ConfigCode> batch;
    auto flush = [&]() {
      std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
      parallel_for(batch.size(), jobs, [&](std::size_t i) {
        if (i > best.load()) return;
        RealizabilityOracle oracle(batch[i].realize(), family);
        if (!first_missing(oracle).has_value()) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      });
      res.configs_checked += std::min(batch.size(), best.load() == std::numeric_limits<std::size_t>::max()
                                                        ? batch.size()
                                                        : best.load() + 1);
      if (best.load() != std::numeric_limits<std::size_t>::max()) found = batch[best.load()];
      batch.clear();
    };
    for_each_config(d, n, [&](const ConfigCode& c) {
      batch.push_back(c);
      if (batch.size() == kBatch) flush();
      return !found.has_value();
    });
    if (!found && !batch.empty()) flush();
    if (!found) {
      res.refuted_at = n;
      res.refutation_complete = refutation_is_complete(d, family);
      break;
    }
    ShatterReport rep = shatter_report(found->realize(), family);
    if (!rep.shattered) throw std::logic_error("enumerated witness failed re-verification");
    res.value = n;
    res.witness = found->realize();
    res.certificates = std::move(rep.witnesses);
  }
  return res;
}

std::optional<SearchResult> search_shattered(std::size_t d, std::size_t n, std::uint64_t budget, std::uint64_t seed,
                                             const Family& family) {
  if (d == 0 || n == 0) throw std::invalid_argument("d and n must be positive");
  if (n > kGrowthGuard) {
    throw GuardError("search refuses n = " + std::to_string(n) + " > " + std::to_string(kGrowthGuard));
  }
  if (budget == 0) return std::nullopt;
  const int grid = static_cast<int>(2 * n);
  const std::uint64_t target = std::uint64_t{1} << n;
  const std::uint64_t stall_limit = 20 * n * d;
  Rng rng(seed);
  std::uint64_t evaluations = 0;
  std::vector<std::vector<int>> levels(d, std::vector<int>(n, 0));

  auto evaluate = [&]() {
    ++evaluations;
    return growth_count(RealizabilityOracle(realize_levels(levels, n, grid), family));
  };

  while (evaluations < budget) {
    for (auto& dim : levels) {
      for (auto& v : dim) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid)));
    }
    std::uint64_t cur = evaluate();
    std::uint64_t stall = 0;
    while (cur < target && evaluations < budget && stall < stall_limit) {
      const auto a = static_cast<std::size_t>(rng.below(d));
      const auto p = static_cast<std::size_t>(rng.below(n));
      const int old = levels[a][p];
      int nv = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid - 1)));
      if (nv >= old) ++nv;
      levels[a][p] = nv;
      const std::uint64_t val = evaluate();
      if (val >= cur) {
        stall = val > cur ? 0 : stall + 1;
        cur = val;
      } else {
        levels[a][p] = old;
        ++stall;
      }
    }
    if (cur == target) {
      PointSet ps = realize_levels(levels, n, grid);
      ShatterReport rep = shatter_report(ps, family);
      if (!rep.shattered) throw std::logic_error("search objective disagrees with shatter_report");
      return SearchResult{std::move(ps), std::move(rep.witnesses), evaluations};
    }
  }
  return std::nullopt;
}

}  // namespace torusvc
