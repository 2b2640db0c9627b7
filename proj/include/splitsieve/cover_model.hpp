#pragma once

// Group cases for degree-d covers: admissible splitting types, conversion of
// splitting types to quotient curves, and the linear relations giving the
// Frobenius traces of the isogeny factors of the Galois closure.

#include "splitsieve/integer.hpp"
#include "splitsieve/partition.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace splitsieve {

enum class ResolventKind { kNone, kGeometric, kConstant };
const char* to_string(ResolventKind kind);

struct ConversionTable {
  std::string name;
  int from_degree = 0;
  int to_degree = 0;
  std::vector<std::pair<SplittingType, SplittingType>> rows;

  const SplittingType* find(const SplittingType& t) const;
};

/// How a splitting type of the cover induces a splitting type of a quotient.
class Conversion {
 public:
  enum class Kind { kIdentity, kResolvent, kTable };

  static Conversion identity() { return Conversion(Kind::kIdentity, nullptr); }
  static Conversion resolvent() { return Conversion(Kind::kResolvent, nullptr); }
  static Conversion table(std::shared_ptr<const ConversionTable> t) { return Conversion(Kind::kTable, std::move(t)); }

  Kind kind() const { return kind_; }
  std::string name() const;
  /// Throws std::invalid_argument if a table has no row for t.
  SplittingType apply(const SplittingType& t) const;

 private:
  Conversion(Kind kind, std::shared_ptr<const ConversionTable> t) : kind_(kind), table_(std::move(t)) {}
  Kind kind_;
  std::shared_ptr<const ConversionTable> table_;
};

struct GroupSpec {
  std::string name;
  int degree = 0;
  std::vector<SplittingType> excluded;
  /// Cycle types in canonical order.
  std::vector<SplittingType> cycle_types;

  bool contains(const SplittingType& t) const;
  bool inside_alternating() const;
};

enum class StaticCheck { kJacobianEven, kJacobianF4Mod3 };
const char* to_string(StaticCheck check);

struct RelationTerm {
  enum class Kind { kBase, kCount, kFactor };
  long coefficient = 1;
  std::string symbol;
  Kind kind = Kind::kBase;
  std::optional<Conversion> conversion;  // kCount
  int factor_index = -1;                 // kFactor
};

struct FactorSpec {
  std::string name;
  int dim_multiplier = 0;  // dimension is dim_multiplier * (g - 1)
  bool weil = false;
  bool pm2 = false;
  bool mod3 = false;
  std::vector<RelationTerm> relation;

  int dimension(int genus) const { return dim_multiplier * (genus - 1); }
};

struct CrossCheckSpec {
  Conversion conversion = Conversion::identity();
  std::vector<RelationTerm> relation;
};

struct GroupCase {
  int degree = 0;
  std::string group;
  std::string group0;
  ResolventKind resolvent = ResolventKind::kNone;
  std::shared_ptr<const GroupSpec> spec;
  std::vector<StaticCheck> static_checks;
  std::vector<FactorSpec> factors;
  std::vector<CrossCheckSpec> cross_checks;

  /// "6/S6/A6"
  std::string id() const;
  /// Every quotient conversion named by a factor relation or cross-check.
  std::vector<Conversion> conversions() const;
  int factor_index(std::string_view name) const;
};

class CoverModel {
 public:
  /// Parses the documented text format; throws ParseError naming the line.
  static CoverModel parse(std::string_view text);
  /// The tables shipped in data/group_cases.txt.
  static const CoverModel& builtin();
  static std::string_view builtin_text();

  const ConversionTable& table(std::string_view name) const;
  std::shared_ptr<const ConversionTable> table_ptr(std::string_view name) const;
  const GroupSpec& group(std::string_view name) const;
  const std::vector<GroupCase>& cases() const { return cases_; }
  std::vector<const GroupCase*> cases_for_degree(int d) const;

  /// A case with every partition admissible and no factors (positive controls).
  static GroupCase unrestricted(int d);

 private:
  std::map<std::string, std::shared_ptr<const ConversionTable>, std::less<>> tables_;
  std::map<std::string, std::shared_ptr<const GroupSpec>, std::less<>> groups_;
  std::vector<GroupCase> cases_;
};

/// Types a place of the given degree may take: the cycle types of G, and for a
/// constant resolvent only odd types at odd degree and even types at even degree.
std::vector<SplittingType> admissible_types(const GroupCase& group_case, int place_degree);
std::vector<SplittingType> admissible_types(const GroupCase& group_case, Parity place_degree_parity,
                                            ResolventKind resolvent);

/// Outer automorphism of S6 on cycle types. Throws unless t is a partition of 6.
SplittingType twin_image(const SplittingType& t);
/// Images in the quotients by D5 (degree 6) and A3 (degree 20).
std::pair<SplittingType, SplittingType> a5_quotient_images(const SplittingType& t);
/// 1^2 for even types, 2 for odd ones.
SplittingType resolvent_image(const SplittingType& t);

/// N_n of the quotient curve: each place of degree m <= n contributes m * mu
/// for every part mu of its converted type with m * mu dividing n.
Integer quotient_counts(const SplittingSequence& seq, const Conversion& conversion, int n);

/// Place counts a_1..a_n of the cover implied by a sequence.
std::vector<Integer> cover_place_counts(const SplittingSequence& seq, int n);

struct DerivedTraces {
  /// Factor name -> T_1..T_n, in the order the case lists its factors.
  std::vector<std::pair<std::string, std::vector<Integer>>> traces;
  /// N_1..N_n of the cover implied by the sequence.
  std::vector<Integer> cover_counts;

  const std::vector<Integer>* find(std::string_view factor) const;
};

/// Traces of every factor of the case for degrees 1..seq.size(), computed from
/// the base counts and the sequence alone.
DerivedTraces derived_traces(const GroupCase& group_case, const SplittingSequence& seq,
                             std::span<const Integer> counts_C);

/// Checks every cross-check relation of the case on the given prefix.
bool cross_checks_hold(const GroupCase& group_case, const SplittingSequence& seq,
                       std::span<const Integer> counts_C);

/// Place-count inequality 2 a_1(F) > 2 sum_{i <= (d-1)/2} a_i(F') + a_{d/2}(F')
/// (last term only for even d).
bool place_inequality_holds(int d, const Integer& a1_base, std::span<const Integer> cover_places);
/// d = 5, a_1(F) = 5, (a_1, a_2, a_3)(F') = (0, 5, 0).
bool is_exceptional_place_pattern(int d, const Integer& a1_base, std::span<const Integer> cover_places);

}  // namespace splitsieve
