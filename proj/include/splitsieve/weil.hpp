#pragma once

// Exact arithmetic on real Weil polynomials over F_q.
//
// A real Weil polynomial of genus g is a monic integer polynomial h of degree
// g whose roots are the real numbers x = alpha + q/alpha, alpha running over
// half of the Frobenius eigenvalues; all roots lie in [-2 sqrt(q), 2 sqrt(q)].
// The full Weil polynomial is L(T) = T^g h(T + q/T).

#include "splitsieve/integer.hpp"
#include "splitsieve/root_location.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitsieve {

inline constexpr int kDefaultDepth = 7;

class InvalidWeilPolynomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InconsistentProfile : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RealWeilPolynomial {
 public:
  /// Coefficients are degree-descending with the leading 1 included.
  /// Throws InvalidWeilPolynomial unless the input is monic of positive
  /// degree over a prime-power q with every root in the Weil interval.
  RealWeilPolynomial(std::vector<Integer> coefficients, std::int64_t field_size);
  /// Same, additionally requiring exactly genus + 1 coefficients.
  RealWeilPolynomial(int genus, std::vector<Integer> coefficients, std::int64_t field_size);

  int genus() const { return static_cast<int>(coefficients_.size()) - 1; }
  std::int64_t field_size() const { return field_size_; }
  const std::vector<Integer>& coefficients() const { return coefficients_; }
  IntPoly ascending() const;
  /// "1,2,-1"
  std::string to_string() const;
  /// "T^2 + 2T - 1"
  std::string pretty() const;

  friend bool operator==(const RealWeilPolynomial& a, const RealWeilPolynomial& b) {
    return a.field_size_ == b.field_size_ && a.coefficients_ == b.coefficients_;
  }
  friend bool operator<(const RealWeilPolynomial& a, const RealWeilPolynomial& b);

  /// For the enumerator, whose output is certified before construction.
  static RealWeilPolynomial certified(std::vector<Integer> coefficients, std::int64_t field_size);

 private:
  RealWeilPolynomial() = default;
  std::vector<Integer> coefficients_;
  std::int64_t field_size_ = 0;
};

RealWeilPolynomial multiply(const RealWeilPolynomial& a, const RealWeilPolynomial& b);

struct FrobeniusData {
  /// L(T), degree-descending, degree 2g.
  std::vector<Integer> full_weil_coefficients;
  /// p_1 .. p_n, p_k = sum of k-th powers of the 2g Frobenius eigenvalues.
  std::vector<Integer> power_sums;
  std::vector<Integer> group_orders;
};

/// L(T) = T^g h(T + q/T) together with p_1..p_{n_max}.
FrobeniusData expand_real_weil(const RealWeilPolynomial& h, int n_max = kDefaultDepth);

/// Frobenius power sums p_1..p_{n_max} via the real roots (Newton on h, then
/// p_n = sum_j V_n(x_j) with V_n(alpha + q/alpha) = alpha^n + (q/alpha)^n).
std::vector<Integer> frobenius_power_sums(const RealWeilPolynomial& h, int n_max);

/// Power sums of the roots of a monic polynomial (degree-descending input).
std::vector<Integer> newton_power_sums(const std::vector<Integer>& monic_descending, int n_max);

/// Inverse of newton_power_sums. Returns nullopt if a division is inexact.
std::optional<std::vector<Integer>> coefficients_from_power_sums(
    std::span<const Integer> power_sums, int degree);

/// Coefficientwise check of T^{2g} L(q/T) = q^g L(T).
bool satisfies_functional_equation(const std::vector<Integer>& full_descending, std::int64_t q);

/// Weil bound p_n^2 <= 4 g^2 q^n.
bool within_weil_bound(const Integer& trace, int genus, std::int64_t q, int n);

struct PointCountProfile {
  std::int64_t field_size = 2;
  int genus = 0;
  /// N_1, N_2, ...; nullopt is a wildcard.
  std::vector<std::optional<Integer>> counts;

  bool complete() const;
  std::string to_string() const;  // "5,7,*"
};

/// N_n = q^n + 1 - p_n for n = 1..n_max. Throws InconsistentProfile if any N_n < 0.
PointCountProfile point_counts(const RealWeilPolynomial& h, int n_max = kDefaultDepth);

/// a_n = (1/n) sum_{m | n} mu(n/m) N_m, nullopt where a needed N_m is a
/// wildcard. Throws InconsistentProfile on a non-integral or negative a_n.
std::vector<std::optional<Integer>> place_counts(const PointCountProfile& profile);

/// N_n = sum_{m | n} m a_m.
std::vector<Integer> counts_from_places(const std::vector<Integer>& places);

/// #A(F_{q^n}) = L_n(1), L_n the Weil polynomial of the base change to F_{q^n}.
Integer group_order(const RealWeilPolynomial& h, int n = 1);

// ---------------------------------------------------------------------------
// Enumeration

struct GroupOrderDivisibility {
  int extension_degree = 1;  // constrains #A(F_{q^k})
  Integer divisor = 1;
  friend bool operator==(const GroupOrderDivisibility&, const GroupOrderDivisibility&) = default;
};

struct WeilFilters {
  /// Exact value of #A(F_q) = L(1).
  std::optional<Integer> group_order;
  std::vector<GroupOrderDivisibility> divisibility;
  /// n -> admissible values of the trace p_n.
  std::map<int, std::vector<Integer>> allowed_traces;
  /// Called with p_1..p_j once c_1..c_j are fixed, and at each leaf with
  /// p_1..p_H for H = max(g, predicate_horizon). Returning false prunes.
  /// Not part of key(); callers that memoize must not set it.
  std::function<bool(std::span<const Integer>)> trace_predicate;
  int predicate_horizon = 0;

  bool empty() const {
    return !group_order && divisibility.empty() && allowed_traces.empty() && !trace_predicate;
  }
  /// Canonical text, used as part of memoization keys.
  std::string key() const;
};

enum class WeilVerdict {
  kFound,
  kNoPolynomial,   // search exhausted
  kWeilBound,      // a prescribed trace violates |p_n| <= 2 g q^{n/2}
  kNonIntegral,    // prescribed traces force a non-integral coefficient
};

const char* to_string(WeilVerdict verdict);

struct WeilExistence {
  bool exists = false;
  WeilVerdict verdict = WeilVerdict::kNoPolynomial;
  std::optional<RealWeilPolynomial> witness;
};

/// Every real Weil polynomial of genus g over F_q whose Frobenius traces begin
/// with `prescribed` and which passes `filters`, in lexicographic order of
/// coefficient vectors.
std::vector<RealWeilPolynomial> enumerate_real_weil(int g, std::int64_t q,
                                                    std::span<const Integer> prescribed,
                                                    const WeilFilters& filters = {});

/// As enumerate_real_weil, stopping at the first witness.
WeilExistence exists_real_weil(int g, std::int64_t q, std::span<const Integer> prescribed,
                               const WeilFilters& filters = {});

/// Static screening of a prescription (Weil bound and integrality).
std::optional<WeilVerdict> screen_prescription(int g, std::int64_t q,
                                               std::span<const Integer> prescribed);

}  // namespace splitsieve
