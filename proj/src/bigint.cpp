#include "csl/bigint.hpp"

#include <cmath>
#include <limits>

#include "csl/error.hpp"

namespace csl {

double log2_big(const BigInt& value) {
  const int sign = sgn(value);
  if (sign < 0) throw Error(ErrorKind::DomainError, "log2 of a negative integer");
  if (sign == 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exponent);
}

double ratio_big(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw Error(ErrorKind::DomainError, "division by zero");
  if (sgn(num) == 0) return 0.0;
  long en = 0;
  long ed = 0;
  const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

BigInt binomial_big(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace csl
