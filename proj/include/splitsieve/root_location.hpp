#pragma once

// Exact certification that an integer polynomial has all of its roots real
// and inside the closed interval [-2 sqrt(q), 2 sqrt(q)].

#include "splitsieve/integer.hpp"

#include <cstdint>
#include <vector>

namespace splitsieve {

/// Dense integer polynomial, ascending: coefficient i multiplies T^i.
using IntPoly = std::vector<Integer>;

namespace poly {

int degree(const IntPoly& p);
void trim(IntPoly& p);
IntPoly derivative(const IntPoly& p);
IntPoly multiply(const IntPoly& a, const IntPoly& b);
Integer evaluate(const IntPoly& p, const Integer& x);
/// lc(b)^(deg a - deg b + 1) * a  mod  b, with the multiplier's sign folded
/// out so the result is a positive multiple of the true remainder.
IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b);
/// Divide out the positive content. The zero polynomial is left alone.
void make_primitive(IntPoly& p);
IntPoly primitive_gcd(IntPoly a, IntPoly b);
/// Exact quotient a / b up to a positive rational factor (b must divide a over Q).
IntPoly exact_quotient(const IntPoly& a, const IntPoly& b);
IntPoly square_free_part(const IntPoly& p);

/// Sign of p(side * sqrt(m)) for side = +1 or -1, computed without rounding.
int sign_at_root_of(const IntPoly& p, const Integer& m, int side);

/// Number of distinct real roots of a square-free p in the closed interval
/// [-sqrt(m), sqrt(m)], by Sturm sign variations.
int distinct_roots_in_symmetric_interval(const IntPoly& square_free, const Integer& m);

}  // namespace poly

/// True iff every complex root of p is real and lies in [-2 sqrt(q), 2 sqrt(q)].
/// Nonzero constants qualify vacuously.
bool roots_in_weil_interval(const IntPoly& ascending, std::int64_t q);

}  // namespace splitsieve
