#include "torusvc/bigint.hpp"

#include <gmp.h>

#include <stdexcept>

namespace torusvc {

BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.backend().data(), static_cast<unsigned long>(n));
  return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.backend().data(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

BigInt double_factorial(std::int64_t n) {
  if (n <= 0) return BigInt(1);
  BigInt r;
  mpz_2fac_ui(r.backend().data(), static_cast<unsigned long>(n));
  return r;
}

BigInt ipow(const BigInt& base, std::uint64_t exp) {
  BigInt r;
  mpz_pow_ui(r.backend().data(), base.backend().data(), static_cast<unsigned long>(exp));
  return r;
}

BigRat ipow(const BigRat& base, std::uint64_t exp) {
  BigInt num = ipow(BigInt(boost::multiprecision::numerator(base)), exp);
  BigInt den = ipow(BigInt(boost::multiprecision::denominator(base)), exp);
  return BigRat(num, den);
}

BigRat to_big(const Rat& r) { return BigRat(BigInt(r.num()), BigInt(r.den())); }

std::int64_t bit_length_minus_one(const BigInt& v) {
  if (v < 0) throw std::domain_error("bit length of a negative number");
  if (v == 0) return -1;
  return static_cast<std::int64_t>(mpz_sizeinbase(v.backend().data(), 2)) - 1;
}

}  // namespace torusvc
