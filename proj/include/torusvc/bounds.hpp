#pragma once

// Exact evaluation of the VC bounds for boxes, cubes and stripes on T^d.
//
// Every comparison is done on big integers; logarithms appear only through
// floor(log2) computed from bit lengths.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torusvc/rational.hpp"

namespace torusvc {

/// Raised when the parameter conditions needed for the cube lower bound fail.
class BoundNotCertified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t floor_log2(std::uint64_t x);

inline constexpr std::uint64_t kPersistenceWindow = 64;

/// Smallest n >= start with pred(n), assuming pred switches from false to true
/// once. Gallops, then bisects, then checks pred(n-1) is false and pred holds
/// on n..n+window; throws std::logic_error if either check fails.
std::uint64_t scan_first_true(const std::function<bool(std::uint64_t)>& pred, std::uint64_t start,
                              std::uint64_t window = kPersistenceWindow);

/// 2^n > d (n+1)^2
bool stripe_count_exceeded(std::uint64_t d, std::uint64_t n);
/// 2^n > (n+1)^(2d)
bool trivial_count_exceeded(std::uint64_t d, std::uint64_t n);
/// 2^n (2d-1)!! > 2^d n^(2d)
bool refined_count_exceeded(std::uint64_t d, std::uint64_t n);

/// Smallest persistent n with 2^n > d (n+1)^2; stripes of T^d have VC <= n-1.
std::uint64_t stripe_upper_bound_n(std::uint64_t d);
/// Smallest persistent n with 2^n > (n+1)^(2d); boxes of T^d have VC <= n-1.
std::uint64_t trivial_upper_bound_n(std::uint64_t d);
/// Smallest persistent n >= d with 2^n (2d-1)!! > 2^d n^(2d); boxes of T^d have VC <= n-1.
/// The closed form counts subsets under the assumption n >= d, so the scan starts there.
std::uint64_t refined_upper_bound_n(std::uint64_t d);

struct BoundParams {
  std::uint64_t d = 0;
  std::uint64_t f = 0;
  Rat q;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t c = 0;
  std::uint64_t d_used = 0;  // q m k <= d
  bool condition_ok = false;  // d / floor(log2 d) > 48 (f+2)^2
  bool ext_req = false;       // verify_ext_req(q, m, k)
};

/// f defaults to floor(log2 d); q = 1 + 1/f, m = 24 f floor(log2 d), k = floor(d / (m q)).
/// With an override, m is rounded up to a multiple of f so that q m is integral.
/// Throws std::invalid_argument for d < 2 or f = 0, and std::domain_error when k = 0.
BoundParams choose_parameters(std::uint64_t d, std::optional<std::uint64_t> f_override = std::nullopt);

/// c (floor(log2 k) + 1) cubes-VC lower bound; throws BoundNotCertified unless
/// condition_ok and ext_req both hold.
std::uint64_t lower_bound_value(std::uint64_t d);

/// n <= 3 d log2 d, decided exactly as 2^n <= d^(3d).
bool within_trivial_estimate(std::uint64_t n, std::uint64_t d);
/// n <= d (log2 d + 3 log2 log2 d) + 1 for d a power of two >= 4, decided as
/// 2^(n-1) <= d^d (log2 d)^(3d). Throws std::invalid_argument for other d.
bool within_refined_estimate(std::uint64_t n, std::uint64_t d);
/// value >= d (log2 d - 4 log2 log2 d), checked as 2^value floor(log2 d)^(4d) >= d^d.
/// Exact for powers of two; for other d a true answer is still sound.
bool meets_lower_estimate(std::uint64_t value, std::uint64_t d);

struct BoundsRow {
  std::uint64_t d = 0;
  std::uint64_t stripe_vc_ub = 0;   // stripe_upper_bound_n(d) - 1
  std::uint64_t trivial_vc_ub = 0;
  std::uint64_t refined_vc_ub = 0;
  std::optional<std::uint64_t> lower;  // empty when not certified
};

std::vector<BoundsRow> bounds_table(const std::vector<std::uint64_t>& d_list, unsigned jobs = 1);
/// Tab-separated, header line first; "NA" for uncertified lower bounds.
std::string format_bounds_table(const std::vector<BoundsRow>& rows);

}  // namespace torusvc
