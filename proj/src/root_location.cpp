#include "splitsieve/root_location.hpp"

#include <stdexcept>
#include <utility>

namespace splitsieve {
namespace poly {

int degree(const IntPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (sgn(p[i]) != 0) return i;
  return -1;
}

void trim(IntPoly& p) { p.resize(static_cast<std::size_t>(degree(p) + 1)); }

IntPoly derivative(const IntPoly& p) {
  if (p.size() <= 1) return {};
  IntPoly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<unsigned long>(i);
  trim(d);
  return d;
}

IntPoly multiply(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

Integer evaluate(const IntPoly& p, const Integer& x) {
  Integer acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  const int db = degree(b);
  if (db < 0) throw std::domain_error("pseudo-remainder by the zero polynomial");
  IntPoly r = a;
  trim(r);
  const Integer& lead = b[db];
  int dr = degree(r);
  int steps = dr - db + 1;
  if (steps <= 0) return r;
  while (dr >= db) {
    Integer top = r[dr];
    for (auto& c : r) c *= lead;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= top * b[i];
    --steps;
    trim(r);
    dr = degree(r);
  }
  // Complete the multiplier to lead^(deg a - deg b + 1).
  for (; steps > 0; --steps)
    for (auto& c : r) c *= lead;
  if (sgn(lead) < 0 && ((degree(a) - db + 1) % 2 != 0))
    for (auto& c : r) c = -c;
  return r;
}

void make_primitive(IntPoly& p) {
  Integer content = 0;
  for (const auto& c : p) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  if (sgn(content) == 0 || content == 1) return;
  for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
}

IntPoly primitive_gcd(IntPoly a, IntPoly b) {
  trim(a);
  trim(b);
  if (degree(a) < degree(b)) std::swap(a, b);
  make_primitive(a);
  make_primitive(b);
  while (degree(b) >= 0) {
    IntPoly r = pseudo_remainder(a, b);
    make_primitive(r);
    a = std::move(b);
    b = std::move(r);
  }
  make_primitive(a);
  return a;
}

IntPoly exact_quotient(const IntPoly& a, const IntPoly& b) {
  const int da = degree(a);
  const int db = degree(b);
  if (db < 0) throw std::domain_error("division by the zero polynomial");
  if (da < db) return {};
  IntPoly r = a;
  trim(r);
  IntPoly q(static_cast<std::size_t>(da - db + 1));
  const Integer& lead = b[db];
  // Scale by |lead|^(da-db+1) so that every step divides exactly.
  Integer scale = power(abs(lead), static_cast<unsigned long>(da - db + 1));
  for (auto& c : r) c *= scale;
  for (int k = da - db; k >= 0; --k) {
    Integer coef = r[db + k];
    mpz_divexact(coef.get_mpz_t(), coef.get_mpz_t(), lead.get_mpz_t());
    q[k] = coef;
    for (int i = 0; i <= db; ++i) r[k + i] -= coef * b[i];
  }
  trim(q);
  return q;
}

IntPoly square_free_part(const IntPoly& p) {
  IntPoly g = primitive_gcd(p, derivative(p));
  if (degree(g) <= 0) {
    IntPoly out = p;
    trim(out);
    return out;
  }
  IntPoly q = exact_quotient(p, g);
  make_primitive(q);
  return q;
}

int sign_at_root_of(const IntPoly& p, const Integer& m, int side) {
  // p(x) = even(x^2) + x * odd(x^2), and x^2 = m.
  Integer even = 0;
  Integer odd = 0;
  Integer mk = 1;
  for (int i = 0; i <= degree(p); i += 2) {
    even += p[i] * mk;
    if (i + 1 <= degree(p)) odd += p[i + 1] * mk;
    mk *= m;
  }
  if (side < 0) odd = -odd;
  if (is_perfect_square(m)) {
    Integer v = even + odd * isqrt(m);
    return sgn(v);
  }
  const int se = sgn(even);
  const int so = sgn(odd);
  if (se >= 0 && so >= 0) return (se > 0 || so > 0) ? 1 : 0;
  if (se <= 0 && so <= 0) return -1;
  // Opposite signs: compare even^2 with m * odd^2 (m not a square, so never equal).
  Integer lhs = even * even;
  Integer rhs = m * odd * odd;
  if (se > 0) return lhs > rhs ? 1 : -1;
  return rhs > lhs ? 1 : -1;
}

namespace {

std::vector<IntPoly> sturm_sequence(const IntPoly& p) {
  std::vector<IntPoly> seq;
  IntPoly a = p;
  trim(a);
  IntPoly b = derivative(a);
  seq.push_back(a);
  while (degree(b) >= 0) {
    seq.push_back(b);
    IntPoly r = pseudo_remainder(a, b);
    for (auto& c : r) c = -c;
    make_primitive(r);
    a = std::move(b);
    b = std::move(r);
  }
  return seq;
}

int variations(const std::vector<int>& signs) {
  int count = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

int distinct_roots_in_symmetric_interval(const IntPoly& square_free, const Integer& m) {
  if (degree(square_free) <= 0) return 0;
  const auto seq = sturm_sequence(square_free);
  std::vector<int> lo;
  std::vector<int> hi;
  lo.reserve(seq.size());
  hi.reserve(seq.size());
  for (const auto& s : seq) {
    lo.push_back(sign_at_root_of(s, m, -1));
    hi.push_back(sign_at_root_of(s, m, +1));
  }
  // Sturm counts roots in (a, b]; the left endpoint is added separately.
  const int at_left = lo.front() == 0 ? 1 : 0;
  return variations(lo) - variations(hi) + at_left;
}

}  // namespace poly

bool roots_in_weil_interval(const IntPoly& ascending, std::int64_t q) {
  IntPoly p = ascending;
  poly::trim(p);
  const int deg = poly::degree(p);
  if (deg < 0) return false;
  if (deg == 0) return true;
  IntPoly sf = poly::square_free_part(p);
  const Integer m = Integer(4) * Integer(static_cast<long>(q));
  return poly::distinct_roots_in_symmetric_interval(sf, m) == poly::degree(sf);
}

}  // namespace splitsieve
