#pragma once

// Candidate rows (partial point counts of C and C'), the case-file format, and
// completion of rows into pairs of real Weil polynomials for C and the Prym.

#include "splitsieve/cover_model.hpp"
#include "splitsieve/sieve.hpp"
#include "splitsieve/weil.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace splitsieve {

inline constexpr std::string_view kCaseFileHeader = "splitsieve-cases 1";
inline constexpr std::string_view kBundledDataset = "@table2";
inline constexpr int kCompletionDepth = 7;

/// A schema violation, located by source, line, row and field.
class CaseFileError : public ParseError {
 public:
  CaseFileError(std::string source, int line, std::string row, std::string field, const std::string& message);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& row() const { return row_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string row_;
  std::string field_;
};

struct CandidateRow {
  std::string name;
  int d = 0;
  int g = 0;
  int g_prime = 0;
  /// #C(F_{2^n}) and #C'(F_{2^n}) for n = 1, 2, ...; nullopt is a wildcard.
  std::vector<std::optional<Integer>> counts_C;
  std::vector<std::optional<Integer>> counts_Cp;
  std::optional<Integer> jac2;
  std::optional<Integer> jac4;
  /// Empty for the group grid; "free" for an unrestricted control whose
  /// counts are given in full and are not completed.
  std::string group;
  int line = 0;

  bool etale() const { return g_prime == d * (g - 1) + 1; }
  bool is_control() const { return group == "free"; }
};

/// Reads a case file, or the bundled dataset for the token "@table2".
std::vector<CandidateRow> load_cases(const std::string& path);
std::vector<CandidateRow> parse_cases(std::string_view text, const std::string& source);
std::string serialize(const CandidateRow& row);
std::string serialize_cases(const std::vector<CandidateRow>& rows);
std::string_view bundled_cases_text();

struct ResolvedCandidate {
  std::string row;
  int index = 0;
  /// Absent for control rows.
  std::optional<RealWeilPolynomial> h_C;
  std::optional<RealWeilPolynomial> h_A;
  std::vector<Integer> counts_C;   // to kCompletionDepth
  std::vector<Integer> counts_Cp;  // to kCompletionDepth
  std::optional<Integer> jac2;
  std::optional<Integer> jac4;
};

/// Place inequality, or its single exception, for a resolution.
bool satisfies_place_inequality(int d, const ResolvedCandidate& resolved);

/// Every pair (h_C, h_A) with L_A(1) = 1 reproducing the row, in lexicographic
/// order of (h_C, h_A). Pairs violating the place inequality cannot come from
/// an extension with relative class number one and are dropped; their number
/// is stored in `rejected`. Throws std::invalid_argument for g' <= g.
std::vector<ResolvedCandidate> complete_candidate(const CandidateRow& row, std::size_t* rejected = nullptr);

/// One instance per group case of degree d (none for ramified rows or degrees
/// without group cases). Control rows get the unrestricted case.
std::vector<CaseInstance> expand_to_grid(const CandidateRow& row, const std::vector<ResolvedCandidate>& resolved,
                                         const CoverModel& model = CoverModel::builtin());

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string dataset_hash(const std::vector<CandidateRow>& rows);

}  // namespace splitsieve
