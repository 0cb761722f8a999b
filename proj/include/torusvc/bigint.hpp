#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "torusvc/rational.hpp"

namespace torusvc {

using BigInt = boost::multiprecision::mpz_int;
using BigRat = boost::multiprecision::mpq_rational;

BigInt factorial(std::uint64_t n);
/// C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);
/// (2j-1)(2j-3)...1 for odd argument 2j-1; 1 for arguments <= 0.
BigInt double_factorial(std::int64_t n);
BigInt ipow(const BigInt& base, std::uint64_t exp);
BigRat ipow(const BigRat& base, std::uint64_t exp);

BigRat to_big(const Rat& r);
/// Index of the highest set bit; -1 for zero. Requires a non-negative value.
std::int64_t bit_length_minus_one(const BigInt& v);

}  // namespace torusvc
