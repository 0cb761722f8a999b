#include "torusvc/bounds.hpp"

#include <bit>
#include <sstream>

#include "torusvc/bigint.hpp"
#include "torusvc/extraction.hpp"
#include "torusvc/parallel.hpp"

namespace torusvc {

namespace {

BigInt pow2(std::uint64_t n) {
  BigInt r = 1;
  r <<= static_cast<unsigned>(n);
  return r;
}

// 2^n > x for non-negative x.
bool pow2_exceeds(std::uint64_t n, const BigInt& x) {
  return x == 0 || bit_length_minus_one(x) < static_cast<std::int64_t>(n);
}

void require_positive(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("d must be at least 1");
}

}  // namespace

std::uint64_t floor_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("floor_log2 of zero");
  return static_cast<std::uint64_t>(std::bit_width(x) - 1);
}

std::uint64_t scan_first_true(const std::function<bool(std::uint64_t)>& pred, std::uint64_t start,
                              std::uint64_t window) {
  std::uint64_t n = start;
  if (!pred(start)) {
    std::uint64_t lo = start;  // pred(lo) false
    std::uint64_t step = 1;
    std::uint64_t hi = start + step;
    while (!pred(hi)) {
      lo = hi;
      step *= 2;
      hi = lo + step;
    }
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (pred(mid) ? hi : lo) = mid;
    }
    n = hi;
    if (pred(n - 1)) throw std::logic_error("scan: predicate not single-crossing below " + std::to_string(n));
  }
  for (std::uint64_t i = 1; i <= window; ++i) {
    if (!pred(n + i)) {
      throw std::logic_error("scan: predicate fails at " + std::to_string(n + i) + " inside the persistence window");
    }
  }
  return n;
}

bool stripe_count_exceeded(std::uint64_t d, std::uint64_t n) {
  BigInt x = BigInt(d) * BigInt(n + 1) * BigInt(n + 1);
  return pow2_exceeds(n, x);
}

bool trivial_count_exceeded(std::uint64_t d, std::uint64_t n) {
  return pow2_exceeds(n, ipow(BigInt(n + 1), 2 * d));
}

bool refined_count_exceeded(std::uint64_t d, std::uint64_t n) {
  BigInt lhs = double_factorial(static_cast<std::int64_t>(2 * d) - 1) << static_cast<unsigned>(n);
  BigInt rhs = ipow(BigInt(n), 2 * d) << static_cast<unsigned>(d);
  return lhs > rhs;
}

std::uint64_t stripe_upper_bound_n(std::uint64_t d) {
  require_positive(d);
  return scan_first_true([d](std::uint64_t n) { return stripe_count_exceeded(d, n); }, 0);
}

std::uint64_t trivial_upper_bound_n(std::uint64_t d) {
  require_positive(d);
  return scan_first_true([d](std::uint64_t n) { return trivial_count_exceeded(d, n); }, 0);
}

std::uint64_t refined_upper_bound_n(std::uint64_t d) {
  require_positive(d);
  // the (2d-1)!! is shared by every probe
  const BigInt df = double_factorial(static_cast<std::int64_t>(2 * d) - 1);
  auto pred = [d, &df](std::uint64_t n) {
    return (df << static_cast<unsigned>(n)) > (ipow(BigInt(n), 2 * d) << static_cast<unsigned>(d));
  };
  return scan_first_true(pred, d);
}

BoundParams choose_parameters(std::uint64_t d, std::optional<std::uint64_t> f_override) {
  if (d < 2) throw std::invalid_argument("choose_parameters needs d >= 2");
  const std::uint64_t lg = floor_log2(d);
  BoundParams p;
  p.d = d;
  p.f = f_override.value_or(lg);
  if (p.f == 0) throw std::invalid_argument("f must be positive");
  if (p.f > (std::uint64_t{1} << 20)) throw std::invalid_argument("f too large");
  p.q = Rat(static_cast<std::int64_t>(p.f + 1), static_cast<std::int64_t>(p.f));
  p.m = 24 * p.f * lg;
  if (p.m % p.f != 0) p.m += p.f - p.m % p.f;
  // k = floor(d f / (m (f+1)))
  BigInt k = (BigInt(d) * BigInt(p.f)) / (BigInt(p.m) * BigInt(p.f + 1));
  if (k == 0) throw std::domain_error("k = 0: d = " + std::to_string(d) + " is too small for m = " + std::to_string(p.m));
  p.k = k.convert_to<std::uint64_t>();
  p.c = p.m * p.k;
  p.d_used = p.m / p.f * (p.f + 1) * p.k;
  const BigInt f2 = BigInt(p.f + 2);
  p.condition_ok = BigInt(d) > BigInt(48) * f2 * f2 * BigInt(lg);
  p.ext_req = verify_ext_req(p.q, p.m, p.k);
  return p;
}

std::uint64_t lower_bound_value(std::uint64_t d) {
  BoundParams p;
  try {
    p = choose_parameters(d);
  } catch (const std::domain_error& e) {
    throw BoundNotCertified(std::string("bound not certified at this d: ") + e.what());
  }
  if (!p.condition_ok) throw BoundNotCertified("bound not certified at this d: d/floor(log2 d) <= 48(f+2)^2");
  if (!p.ext_req) throw BoundNotCertified("bound not certified at this d: (q-q/k)^(qm) <= q m^2 k^3");
  const unsigned __int128 v = static_cast<unsigned __int128>(p.c) * (floor_log2(p.k) + 1);
  if (v > UINT64_MAX) throw std::overflow_error("lower bound exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

bool within_trivial_estimate(std::uint64_t n, std::uint64_t d) {
  require_positive(d);
  return pow2(n) <= ipow(BigInt(d), 3 * d);
}

bool within_refined_estimate(std::uint64_t n, std::uint64_t d) {
  if (d < 4 || !std::has_single_bit(d)) throw std::invalid_argument("refined estimate is decided only for powers of two >= 4");
  if (n == 0) return true;
  const std::uint64_t e = floor_log2(d);
  // 2^(n-1) <= 2^(d e) e^(3d)
  if (n - 1 <= d * e) return true;
  return pow2(n - 1 - d * e) <= ipow(BigInt(e), 3 * d);
}

bool meets_lower_estimate(std::uint64_t value, std::uint64_t d) {
  if (d < 2) throw std::invalid_argument("lower estimate needs d >= 2");
  const std::uint64_t e = floor_log2(d);
  if (std::has_single_bit(d)) {
    // 2^value e^(4d) >= 2^(d e)
    if (value >= d * e) return true;
    return ipow(BigInt(e), 4 * d) >= pow2(d * e - value);
  }
  return (ipow(BigInt(e), 4 * d) << static_cast<unsigned>(value)) >= ipow(BigInt(d), d);
}

std::vector<BoundsRow> bounds_table(const std::vector<std::uint64_t>& d_list, unsigned jobs) {
  for (auto d : d_list) require_positive(d);
  std::vector<BoundsRow> rows(d_list.size());
  parallel_for(d_list.size(), jobs, [&](std::size_t i) {
    const std::uint64_t d = d_list[i];
    BoundsRow& r = rows[i];
    r.d = d;
    r.stripe_vc_ub = stripe_upper_bound_n(d) - 1;
    r.trivial_vc_ub = trivial_upper_bound_n(d) - 1;
    r.refined_vc_ub = refined_upper_bound_n(d) - 1;
    if (d >= 2) {
      try {
        r.lower = lower_bound_value(d);
      } catch (const BoundNotCertified&) {
      }
    }
  });
  return rows;
}

std::string format_bounds_table(const std::vector<BoundsRow>& rows) {
  std::ostringstream out;
  out << "d\tstripe_ub\ttrivial_ub\trefined_ub\tlower_bound\n";
  for (const auto& r : rows) {
    out << r.d << '\t' << r.stripe_vc_ub << '\t' << r.trivial_vc_ub << '\t' << r.refined_vc_ub << '\t';
    if (r.lower) {
      out << *r.lower;
    } else {
      out << "NA";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace torusvc
