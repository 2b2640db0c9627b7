#include "splitsieve/weil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace splitsieve {

namespace {

void require_field_size(std::int64_t q) {
  if (!is_prime_power(q)) throw InvalidWeilPolynomial("field size " + std::to_string(q) + " is not a prime power");
}

/// v[n][k]: coefficient of x^k in V_n(x), where V_0 = 2, V_1 = x,
/// V_n = x V_{n-1} - q V_{n-2}, so that V_n(alpha + q/alpha) = alpha^n + (q/alpha)^n.
std::vector<std::vector<Integer>> lucas_table(int n_max, std::int64_t q) {
  std::vector<std::vector<Integer>> v(static_cast<std::size_t>(std::max(n_max, 1) + 1));
  v[0] = {Integer(2)};
  v[1] = {Integer(0), Integer(1)};
  const Integer qq(static_cast<long>(q));
  for (int n = 2; n <= n_max; ++n) {
    std::vector<Integer> cur(static_cast<std::size_t>(n + 1));
    for (int k = 1; k <= n; ++k) cur[k] += v[n - 1][k - 1];
    for (int k = 0; k <= n - 2; ++k) cur[k] -= qq * v[n - 2][k];
    v[n] = std::move(cur);
  }
  return v;
}

/// Real power sums s_0..s_{n_max} of the roots of a monic polynomial given by
/// c_1..c_g (c_0 = 1 implicit at index 0).
std::vector<Integer> real_power_sums(const std::vector<Integer>& c, int n_max) {
  const int g = static_cast<int>(c.size()) - 1;
  std::vector<Integer> s(static_cast<std::size_t>(n_max + 1));
  s[0] = g;
  for (int n = 1; n <= n_max; ++n) {
    Integer acc = 0;
    for (int i = 1; i <= std::min(n - 1, g); ++i) acc -= c[i] * s[n - i];
    if (n <= g) acc -= Integer(n) * c[n];
    s[n] = acc;
  }
  return s;
}

Integer trace_from_real_sums(const std::vector<std::vector<Integer>>& v,
                             const std::vector<Integer>& s, int n) {
  Integer p = 0;
  for (int k = 0; k <= n; ++k) p += v[n][k] * s[k];
  return p;
}

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Integer binomial(int n, int k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

long double to_ld(const Integer& x) {
  if (x.fits_slong_p()) return static_cast<long double>(x.get_si());
  return static_cast<long double>(x.get_d());
}

}  // namespace

// ---------------------------------------------------------------------------
// RealWeilPolynomial

RealWeilPolynomial::RealWeilPolynomial(std::vector<Integer> coefficients, std::int64_t field_size)
    : coefficients_(std::move(coefficients)), field_size_(field_size) {
  require_field_size(field_size_);
  if (coefficients_.size() < 2) throw InvalidWeilPolynomial("a real Weil polynomial needs positive degree");
  if (coefficients_.front() != 1) throw InvalidWeilPolynomial("a real Weil polynomial must be monic");
  if (!roots_in_weil_interval(ascending(), field_size_))
    throw InvalidWeilPolynomial("roots of " + to_string() + " are not all real in [-2 sqrt(q), 2 sqrt(q)]");
}

RealWeilPolynomial::RealWeilPolynomial(int genus, std::vector<Integer> coefficients,
                                       std::int64_t field_size)
    : RealWeilPolynomial(
          [&] {
            if (genus < 1 || coefficients.size() != static_cast<std::size_t>(genus) + 1)
              throw InvalidWeilPolynomial("expected " + std::to_string(genus + 1) +
                                          " coefficients for genus " + std::to_string(genus));
            return std::move(coefficients);
          }(),
          field_size) {}

RealWeilPolynomial RealWeilPolynomial::certified(std::vector<Integer> coefficients,
                                                 std::int64_t field_size) {
  RealWeilPolynomial h;
  h.coefficients_ = std::move(coefficients);
  h.field_size_ = field_size;
  return h;
}

IntPoly RealWeilPolynomial::ascending() const {
  return IntPoly(coefficients_.rbegin(), coefficients_.rend());
}

std::string RealWeilPolynomial::to_string() const { return join(coefficients_); }

std::string RealWeilPolynomial::pretty() const {
  std::ostringstream out;
  const int g = genus();
  bool first = true;
  for (int k = 0; k <= g; ++k) {
    const Integer& c = coefficients_[k];
    if (sgn(c) == 0) continue;
    const int deg = g - k;
    Integer mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    if (mag != 1 || deg == 0) out << mag.get_str();
    if (deg >= 1) out << "T";
    if (deg >= 2) out << "^" << deg;
    first = false;
  }
  return out.str();
}

bool operator<(const RealWeilPolynomial& a, const RealWeilPolynomial& b) {
  if (a.field_size_ != b.field_size_) return a.field_size_ < b.field_size_;
  if (a.coefficients_.size() != b.coefficients_.size())
    return a.coefficients_.size() < b.coefficients_.size();
  return std::lexicographical_compare(a.coefficients_.begin(), a.coefficients_.end(),
                                      b.coefficients_.begin(), b.coefficients_.end());
}

RealWeilPolynomial multiply(const RealWeilPolynomial& a, const RealWeilPolynomial& b) {
  if (a.field_size() != b.field_size())
    throw InvalidWeilPolynomial("cannot multiply real Weil polynomials over different fields");
  IntPoly prod = poly::multiply(a.ascending(), b.ascending());
  return RealWeilPolynomial::certified(std::vector<Integer>(prod.rbegin(), prod.rend()), a.field_size());
}

// ---------------------------------------------------------------------------
// Frobenius data

std::vector<Integer> frobenius_power_sums(const RealWeilPolynomial& h, int n_max) {
  if (n_max <= 0) return {};
  const auto& c = h.coefficients();
  const auto s = real_power_sums(c, n_max);
  const auto v = lucas_table(n_max, h.field_size());
  std::vector<Integer> p;
  p.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) p.push_back(trace_from_real_sums(v, s, n));
  return p;
}

std::vector<Integer> newton_power_sums(const std::vector<Integer>& monic_descending, int n_max) {
  if (monic_descending.empty() || monic_descending.front() != 1)
    throw std::invalid_argument("newton_power_sums expects a monic polynomial");
  auto s = real_power_sums(monic_descending, n_max);
  return std::vector<Integer>(s.begin() + 1, s.end());
}

std::optional<std::vector<Integer>> coefficients_from_power_sums(std::span<const Integer> power_sums,
                                                                 int degree) {
  if (static_cast<int>(power_sums.size()) < degree)
    throw std::invalid_argument("not enough power sums to determine the coefficients");
  std::vector<Integer> c(static_cast<std::size_t>(degree + 1));
  c[0] = 1;
  for (int n = 1; n <= degree; ++n) {
    Integer acc = power_sums[n - 1];
    for (int i = 1; i < n; ++i) acc += c[i] * power_sums[n - i - 1];
    if (!mpz_divisible_ui_p(acc.get_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
    mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
    c[n] = -acc;
  }
  return c;
}

FrobeniusData expand_real_weil(const RealWeilPolynomial& h, int n_max) {
  const int g = h.genus();
  const Integer q(static_cast<long>(h.field_size()));
  // L(T) = sum_k c_k T^k (T^2 + q)^{g-k}
  IntPoly full(static_cast<std::size_t>(2 * g + 1));
  const IntPoly quad{q, Integer(0), Integer(1)};
  std::vector<IntPoly> quad_pow{IntPoly{Integer(1)}};
  for (int i = 1; i <= g; ++i) quad_pow.push_back(poly::multiply(quad_pow.back(), quad));
  const auto& c = h.coefficients();
  for (int k = 0; k <= g; ++k) {
    const IntPoly& qp = quad_pow[g - k];
    for (std::size_t i = 0; i < qp.size(); ++i) full[i + k] += c[k] * qp[i];
  }
  FrobeniusData data;
  data.full_weil_coefficients.assign(full.rbegin(), full.rend());
  data.power_sums = frobenius_power_sums(h, n_max);
  for (int n = 1; n <= n_max; ++n) data.group_orders.push_back(group_order(h, n));
  return data;
}

bool satisfies_functional_equation(const std::vector<Integer>& full_descending, std::int64_t q) {
  const int deg = static_cast<int>(full_descending.size()) - 1;
  if (deg < 0 || deg % 2 != 0) return false;
  const int g = deg / 2;
  const Integer qq(static_cast<long>(q));
  // Coefficient of T^i is a_i; T^{2g} L(q/T) has coefficient a_{2g-i} q^{2g-i} at T^i.
  IntPoly a(full_descending.rbegin(), full_descending.rend());
  const Integer qg = power(qq, static_cast<unsigned long>(g));
  for (int i = 0; i <= deg; ++i) {
    if (a[deg - i] * power(qq, static_cast<unsigned long>(deg - i)) != qg * a[i]) return false;
  }
  return true;
}

bool within_weil_bound(const Integer& trace, int genus, std::int64_t q, int n) {
  const Integer bound = Integer(4) * genus * genus * power(Integer(static_cast<long>(q)), static_cast<unsigned long>(n));
  return trace * trace <= bound;
}

// ---------------------------------------------------------------------------
// Point and place counts

bool PointCountProfile::complete() const {
  return std::all_of(counts.begin(), counts.end(), [](const auto& c) { return c.has_value(); });
}

std::string PointCountProfile::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += ",";
    out += counts[i] ? counts[i]->get_str() : std::string("*");
  }
  return out;
}

PointCountProfile point_counts(const RealWeilPolynomial& h, int n_max) {
  PointCountProfile profile;
  profile.field_size = h.field_size();
  profile.genus = h.genus();
  const auto p = frobenius_power_sums(h, n_max);
  const Integer q(static_cast<long>(h.field_size()));
  for (int n = 1; n <= n_max; ++n) {
    Integer count = power(q, static_cast<unsigned long>(n)) + 1 - p[n - 1];
    if (sgn(count) < 0)
      throw InconsistentProfile("negative point count N_" + std::to_string(n) + " = " + count.get_str() +
                                " for h = " + h.to_string());
    profile.counts.emplace_back(std::move(count));
  }
  return profile;
}

std::vector<std::optional<Integer>> place_counts(const PointCountProfile& profile) {
  const int n_max = static_cast<int>(profile.counts.size());
  std::vector<std::optional<Integer>> places;
  places.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    Integer acc = 0;
    bool known = true;
    for (int m = 1; m <= n && known; ++m) {
      if (n % m != 0) continue;
      const int mu = moebius(n / m);
      if (mu == 0) continue;
      if (!profile.counts[m - 1]) {
        known = false;
        break;
      }
      acc += mu * *profile.counts[m - 1];
    }
    if (!known) {
      places.emplace_back(std::nullopt);
      continue;
    }
    if (!mpz_divisible_ui_p(acc.get_mpz_t(), static_cast<unsigned long>(n)))
      throw InconsistentProfile("place count a_" + std::to_string(n) + " is not integral");
    mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
    if (sgn(acc) < 0) throw InconsistentProfile("place count a_" + std::to_string(n) + " is negative");
    places.emplace_back(std::move(acc));
  }
  return places;
}

std::vector<Integer> counts_from_places(const std::vector<Integer>& places) {
  std::vector<Integer> counts(places.size());
  for (std::size_t n = 1; n <= places.size(); ++n)
    for (std::size_t m = 1; m <= n; ++m)
      if (n % m == 0) counts[n - 1] += Integer(static_cast<long>(m)) * places[m - 1];
  return counts;
}

Integer group_order(const RealWeilPolynomial& h, int n) {
  if (n < 1) throw std::invalid_argument("group_order needs n >= 1");
  const int g = h.genus();
  const auto p = frobenius_power_sums(h, 2 * g * n);
  std::vector<Integer> base_changed;
  base_changed.reserve(static_cast<std::size_t>(2 * g));
  for (int i = 1; i <= 2 * g; ++i) base_changed.push_back(p[i * n - 1]);
  auto coeffs = coefficients_from_power_sums(base_changed, 2 * g);
  if (!coeffs) throw std::logic_error("base-changed Weil polynomial is not integral");
  Integer value = 0;
  for (const auto& c : *coeffs) value += c;
  return value;
}

// ---------------------------------------------------------------------------
// Enumeration

std::string WeilFilters::key() const {
  std::ostringstream out;
  if (group_order) out << "L1=" << group_order->get_str() << ";";
  for (const auto& d : divisibility) out << "div" << d.extension_degree << "=" << d.divisor.get_str() << ";";
  for (const auto& [n, values] : allowed_traces) out << "p" << n << "in{" << join(values) << "};";
  return out.str();
}

const char* to_string(WeilVerdict verdict) {
  switch (verdict) {
    case WeilVerdict::kFound: return "found";
    case WeilVerdict::kNoPolynomial: return "no-weil-polynomial";
    case WeilVerdict::kWeilBound: return "weil-bound";
    case WeilVerdict::kNonIntegral: return "non-integral";
  }
  return "?";
}

namespace {

struct Prescription {
  std::vector<std::optional<Integer>> fixed;  // index 1..g
  std::optional<WeilVerdict> failure;
};

Prescription prescribe(int g, std::int64_t q, std::span<const Integer> traces) {
  Prescription out;
  out.fixed.assign(static_cast<std::size_t>(g + 1), std::nullopt);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!within_weil_bound(traces[i], g, q, static_cast<int>(i) + 1)) {
      out.failure = WeilVerdict::kWeilBound;
      return out;
    }
  }
  const int k = std::min<int>(g, static_cast<int>(traces.size()));
  if (k == 0) return out;
  const auto v = lucas_table(k, q);
  std::vector<Integer> s(static_cast<std::size_t>(k + 1));
  s[0] = g;
  for (int n = 1; n <= k; ++n) {
    Integer acc = traces[n - 1];
    for (int j = 0; j < n; ++j) acc -= v[n][j] * s[j];
    s[n] = acc;  // v[n][n] == 1
  }
  auto c = coefficients_from_power_sums(std::span<const Integer>(s.data() + 1, static_cast<std::size_t>(k)), k);
  if (!c) {
    out.failure = WeilVerdict::kNonIntegral;
    return out;
  }
  for (int n = 1; n <= k; ++n) out.fixed[n] = (*c)[n];
  return out;
}

// Depth-first search over coefficients c_1, c_2, ... of h = sum c_k T^{g-k}.
// After c_1..c_j are fixed, Q_j := h^{(g-j)} is known; every root of h lies in
// I = [-2 sqrt q, 2 sqrt q] only if every root of Q_j does (Rolle). Given the
// roots of Q_{j-1} = Q_j', real-rootedness of Q_j in I is equivalent to sign
// alternation of Q_j at those roots and at the endpoints, which confines the
// constant term of Q_j (and hence c_j) to an interval. The interval is located
// in floating point and widened; every candidate is then certified exactly.
class Enumerator {
 public:
  Enumerator(int g, std::int64_t q, std::vector<std::optional<Integer>> fixed,
             std::span<const Integer> prescribed, const WeilFilters& filters, bool stop_at_first)
      : g_(g),
        q_(q),
        fixed_(std::move(fixed)),
        prescribed_(prescribed.begin(), prescribed.end()),
        filters_(filters),
        stop_at_first_(stop_at_first) {
    c_.assign(static_cast<std::size_t>(g + 1), Integer(0));
    c_[0] = 1;
    s_.assign(static_cast<std::size_t>(g + 1), Integer(0));
    s_[0] = g;
    roots_.resize(static_cast<std::size_t>(g + 1));
    for (int i = 0; i <= g; ++i) fact_.push_back(factorial(i));
    endpoint_ = std::sqrt(static_cast<long double>(4 * q));
    int need = g;
    need = std::max<int>(need, static_cast<int>(prescribed_.size()));
    for (const auto& [n, _] : filters_.allowed_traces) need = std::max(need, n);
    if (filters_.trace_predicate) need = std::max(need, filters_.predicate_horizon);
    lucas_ = lucas_table(need, q);
    p_.assign(static_cast<std::size_t>(g), Integer(0));
    trace_horizon_ = need;
    const Integer four_q(static_cast<long>(4 * q));
    for (int k = 0; k <= g; ++k) {
      Integer b = binomial(g, k);
      crude_bound_.push_back(isqrt(b * b * power(four_q, static_cast<unsigned long>(k))));
    }
    for (int k = 0; k <= g; ++k)
      q1_pow_.push_back(power(Integer(static_cast<long>(q + 1)), static_cast<unsigned long>(k)));
  }

  void run() {
    if (g_ == 0) return;
    level(1);
  }

  std::vector<RealWeilPolynomial> results;

 private:
  // Coefficients of Q_j, ascending, as exact integers.
  IntPoly derivative_poly(int j) const {
    IntPoly q(static_cast<std::size_t>(j + 1));
    for (int k = 0; k <= j; ++k) q[j - k] = c_[k] * fact_[g_ - k] / fact_[j - k];
    return q;
  }

  long double eval_ld(const std::vector<long double>& asc, long double x) const {
    long double acc = 0;
    for (auto it = asc.rbegin(); it != asc.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  void level(int j) {
    if (done_) return;
    // R_j = Q_j without its constant term (which is c_j (g-j)!).
    std::vector<long double> r(static_cast<std::size_t>(j + 1), 0.0L);
    for (int k = 0; k < j; ++k) r[j - k] = to_ld(c_[k] * fact_[g_ - k] / fact_[j - k]);
    long double lower = -std::numeric_limits<long double>::infinity();
    long double upper = std::numeric_limits<long double>::infinity();
    auto constrain = [&](long double x, int sign) {
      const long double bound = -eval_ld(r, x);
      if (sign > 0)
        lower = std::max(lower, bound);
      else
        upper = std::min(upper, bound);
    };
    constrain(endpoint_, +1);
    constrain(-endpoint_, (j % 2 == 0) ? +1 : -1);
    const auto& crit = roots_[j - 1];
    for (std::size_t i = 0; i < crit.size(); ++i) {
      const int idx = static_cast<int>(i) + 1;  // 1-based, ascending
      constrain(crit[i], ((j - idx) % 2 == 0) ? +1 : -1);
    }
    const long double scale = to_ld(fact_[g_ - j]);
    const long double slack_lo = 1e-6L * (1.0L + std::fabs(lower));
    const long double slack_hi = 1e-6L * (1.0L + std::fabs(upper));
    if (lower - slack_lo > upper + slack_hi) return;
    Integer lo(static_cast<long>(std::ceil((lower - slack_lo) / scale)));
    Integer hi(static_cast<long>(std::floor((upper + slack_hi) / scale)));
    if (lo < -crude_bound_[j]) lo = -crude_bound_[j];
    if (hi > crude_bound_[j]) hi = crude_bound_[j];
    if (lo > hi) return;

    if (fixed_[j]) {
      if (*fixed_[j] < lo || *fixed_[j] > hi) return;
      try_candidate(j, *fixed_[j]);
      return;
    }
    if (j == g_ && filters_.group_order) {
      // L(1) = h(q+1) is affine in c_g with unit slope.
      Integer rest = 0;
      for (int k = 0; k < g_; ++k) rest += c_[k] * q1_pow_[g_ - k];
      Integer value = *filters_.group_order - rest;
      if (value >= lo && value <= hi) try_candidate(j, value);
      return;
    }
    Integer step = 1;
    Integer start = lo;
    if (j == g_) {
      for (const auto& d : filters_.divisibility) {
        if (d.extension_degree != 1 || step != 1) continue;
        // h(q+1) = rest + c_g = 0 mod divisor
        Integer rest = 0;
        for (int k = 0; k < g_; ++k) rest += c_[k] * q1_pow_[g_ - k];
        Integer m = abs(d.divisor);
        Integer target = -rest;
        mpz_fdiv_r(target.get_mpz_t(), target.get_mpz_t(), m.get_mpz_t());
        Integer offset = target - lo;
        mpz_fdiv_r(offset.get_mpz_t(), offset.get_mpz_t(), m.get_mpz_t());
        start = lo + offset;
        step = m;
      }
    }
    for (Integer value = start; value <= hi && !done_; value += step) try_candidate(j, value);
  }

  void try_candidate(int j, const Integer& value) {
    c_[j] = value;
    // Newton: s_j + c_1 s_{j-1} + ... + c_{j-1} s_1 + j c_j = 0
    Integer acc = 0;
    for (int i = 1; i < j; ++i) acc -= c_[i] * s_[j - i];
    acc -= Integer(j) * value;
    s_[j] = acc;
    if (auto it = filters_.allowed_traces.find(j); it != filters_.allowed_traces.end()) {
      const Integer p = trace_from_real_sums(lucas_, s_, j);
      if (std::find(it->second.begin(), it->second.end(), p) == it->second.end()) return;
    }
    if (filters_.trace_predicate) {
      p_[j - 1] = trace_from_real_sums(lucas_, s_, j);
      if (!filters_.trace_predicate(std::span<const Integer>(p_.data(), static_cast<std::size_t>(j)))) return;
    }
    IntPoly qj = derivative_poly(j);
    if (!roots_in_weil_interval(qj, q_)) return;
    if (j == g_) {
      accept_leaf();
      return;
    }
    roots_[j] = locate_roots(qj, roots_[j - 1]);
    level(j + 1);
  }

  std::vector<long double> locate_roots(const IntPoly& exact, const std::vector<long double>& crit) const {
    std::vector<long double> asc;
    asc.reserve(exact.size());
    for (const auto& c : exact) asc.push_back(to_ld(c));
    std::vector<long double> marks;
    marks.push_back(-endpoint_);
    marks.insert(marks.end(), crit.begin(), crit.end());
    marks.push_back(endpoint_);
    std::vector<long double> roots;
    roots.reserve(marks.size() - 1);
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
      long double lo = marks[i];
      long double hi = marks[i + 1];
      long double flo = eval_ld(asc, lo);
      long double fhi = eval_ld(asc, hi);
      if (flo == 0) {
        roots.push_back(lo);
        continue;
      }
      if (fhi == 0) {
        roots.push_back(hi);
        continue;
      }
      if ((flo < 0) == (fhi < 0)) {
        roots.push_back(std::fabs(flo) < std::fabs(fhi) ? lo : hi);
        continue;
      }
      for (int it = 0; it < 200; ++it) {
        const long double mid = (lo + hi) / 2;
        if (mid <= lo || mid >= hi) break;
        const long double fm = eval_ld(asc, mid);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back((lo + hi) / 2);
    }
    return roots;
  }

  void accept_leaf() {
    std::vector<Integer> coeffs(c_.begin(), c_.end());
    if (trace_horizon_ > g_ || !filters_.allowed_traces.empty() || prescribed_.size() > static_cast<std::size_t>(g_)) {
      const auto s = real_power_sums(coeffs, trace_horizon_);
      if (filters_.trace_predicate && filters_.predicate_horizon > g_) {
        std::vector<Integer> p(static_cast<std::size_t>(trace_horizon_));
        for (int n = 1; n <= trace_horizon_; ++n) p[n - 1] = trace_from_real_sums(lucas_, s, n);
        if (!filters_.trace_predicate(p)) return;
      }
      for (std::size_t n = static_cast<std::size_t>(g_) + 1; n <= prescribed_.size(); ++n)
        if (trace_from_real_sums(lucas_, s, static_cast<int>(n)) != prescribed_[n - 1]) return;
      for (const auto& [n, values] : filters_.allowed_traces) {
        if (n <= g_) continue;
        const Integer p = trace_from_real_sums(lucas_, s, n);
        if (std::find(values.begin(), values.end(), p) == values.end()) return;
      }
    }
    auto h = RealWeilPolynomial::certified(std::move(coeffs), q_);
    if (filters_.group_order && group_order(h, 1) != *filters_.group_order) return;
    for (const auto& d : filters_.divisibility) {
      if (sgn(d.divisor) == 0) continue;
      Integer order = group_order(h, d.extension_degree);
      if (!mpz_divisible_p(order.get_mpz_t(), d.divisor.get_mpz_t())) return;
    }
    results.push_back(std::move(h));
    if (stop_at_first_) done_ = true;
  }

  int g_;
  std::int64_t q_;
  std::vector<std::optional<Integer>> fixed_;
  std::vector<Integer> prescribed_;
  const WeilFilters& filters_;
  bool stop_at_first_;
  bool done_ = false;
  std::vector<Integer> c_;
  std::vector<Integer> s_;
  std::vector<Integer> p_;
  std::vector<std::vector<long double>> roots_;
  std::vector<Integer> fact_;
  std::vector<Integer> crude_bound_;
  std::vector<Integer> q1_pow_;
  std::vector<std::vector<Integer>> lucas_;
  int trace_horizon_ = 0;
  long double endpoint_ = 0;
};

std::vector<RealWeilPolynomial> run_enumeration(int g, std::int64_t q, std::span<const Integer> prescribed,
                                                const WeilFilters& filters, bool stop_at_first,
                                                WeilVerdict* verdict) {
  if (g < 1) throw std::invalid_argument("genus must be positive");
  require_field_size(q);
  auto pres = prescribe(g, q, prescribed);
  if (pres.failure) {
    if (verdict) *verdict = *pres.failure;
    return {};
  }
  Enumerator e(g, q, std::move(pres.fixed), prescribed, filters, stop_at_first);
  e.run();
  if (verdict) *verdict = e.results.empty() ? WeilVerdict::kNoPolynomial : WeilVerdict::kFound;
  return std::move(e.results);
}

}  // namespace

std::optional<WeilVerdict> screen_prescription(int g, std::int64_t q, std::span<const Integer> prescribed) {
  require_field_size(q);
  return prescribe(g, q, prescribed).failure;
}

std::vector<RealWeilPolynomial> enumerate_real_weil(int g, std::int64_t q, std::span<const Integer> prescribed,
                                                    const WeilFilters& filters) {
  return run_enumeration(g, q, prescribed, filters, false, nullptr);
}

WeilExistence exists_real_weil(int g, std::int64_t q, std::span<const Integer> prescribed,
                               const WeilFilters& filters) {
  WeilExistence out;
  auto found = run_enumeration(g, q, prescribed, filters, true, &out.verdict);
  out.exists = !found.empty();
  if (out.exists) out.witness = std::move(found.front());
  return out;
}

}  // namespace splitsieve
