#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace splitsieve {

using Integer = mpz_class;

std::string to_string(const Integer& value);

Integer power(const Integer& base, unsigned long exponent);

/// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);

bool is_perfect_square(const Integer& n);

bool is_prime_power(std::int64_t q);

/// Möbius function on positive integers.
int moebius(int n);

/// Comma-joined decimal rendering, e.g. "1,2,-1".
std::string join(const std::vector<Integer>& values, const char* separator = ",");

}  // namespace splitsieve
