#pragma once

#include <string>

#include <gmpxx.h>

namespace csl {

using BigInt = mpz_class;

/// log2 of a non-negative integer, accurate to about 1e-15 absolute for any size;
/// -inf for zero.
double log2_big(const BigInt& value);

/// num / den as a double without overflowing for huge operands.
double ratio_big(const BigInt& num, const BigInt& den);

std::string to_decimal(const BigInt& value);

BigInt binomial_big(unsigned long n, unsigned long k);

}  // namespace csl
