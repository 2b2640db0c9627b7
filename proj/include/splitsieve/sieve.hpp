#pragma once

// Depth-first search for splitting sequences compatible with a pair of point
// count profiles, a group case, and Weil-polynomial existence for the traces of
// the isogeny factors of the Galois closure.

#include "splitsieve/cover_model.hpp"
#include "splitsieve/weil.hpp"

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace splitsieve {

struct StaticFlags {
  bool jacobian_even = false;      // #J(C)(F_2) must be even
  bool jacobian_f4_mod3 = false;   // #J(C)(F_4) must be divisible by 3
  bool pm2_filter = false;         // T_{B,2} in {-2, 2}
};

struct CaseInstance {
  std::string id;
  std::string row;
  GroupCase group_case;
  int g = 0;
  int g_prime = 0;
  std::int64_t field_size = 2;
  /// N_1..N_depth of the base curve.
  std::vector<Integer> counts_C;
  /// N_1..N_depth of the cover; nullopt entries are unconstrained.
  std::vector<std::optional<Integer>> counts_Cp;
  std::optional<Integer> jacobian_F2;
  std::optional<Integer> jacobian_F4;
  StaticFlags flags;
  std::optional<RealWeilPolynomial> h_C;
  std::optional<RealWeilPolynomial> h_A;
};

/// Sets flags from the group case and the counts (static checks named by the
/// case, and the genus-2 rule for the B trace).
StaticFlags derive_flags(const GroupCase& group_case, int g, const std::vector<Integer>& counts_C);

struct SieveOptions {
  int depth = kDefaultDepth;
  bool castelnuovo_severi = false;
  /// Cap on detailed log entries per instance; the rest are only tallied.
  std::size_t log_limit = 200;
  /// Keep every surviving node with its traces (for explain).
  bool record_nodes = false;
};

enum class PruneReason {
  kStaticCheck,
  kCountMismatch,
  kInadmissibleType,
  kWeilInfeasible,
};
const char* to_string(PruneReason reason);

struct LogEntry {
  int depth = 0;
  std::string prefix;
  PruneReason reason = PruneReason::kCountMismatch;
  std::string detail;
};

struct NodeRecord {
  SplittingSequence prefix;
  DerivedTraces traces;
};

struct StaticResult {
  bool pass = true;
  std::string reason;
};

struct PruneResult {
  bool keep = true;
  std::string factor;
  std::string detail;
};

enum class Outcome { kEliminated, kSurvivor };
const char* to_string(Outcome outcome);

struct SieveReport {
  std::string case_id;
  std::string group_case;
  int depth = 0;
  Outcome outcome = Outcome::kEliminated;
  /// Largest n such that some length-n prefix survived pruning (0 if none).
  int max_depth_reached = 0;
  /// Surviving prefixes of full length.
  std::vector<SplittingSequence> surviving_prefixes;
  /// Index n-1: number of length-n prefixes kept.
  std::vector<std::size_t> survivors_per_depth;
  std::vector<LogEntry> log;
  std::size_t log_dropped = 0;
  std::map<std::string, std::size_t> reason_counts;
  StaticResult static_result;
  /// Every prefix matching the cover counts through degree d/2 has a first
  /// term containing the type d, unless the exceptional place pattern applies.
  bool cycle_diagnostic = true;
  std::vector<std::vector<NodeRecord>> nodes;  // per depth, when recorded
};

/// Memo of Weil-existence answers keyed by the exact query. Thread-safe.
class WeilCache {
 public:
  static WeilCache& global();
  WeilExistence exists(int g, std::int64_t q, const std::vector<Integer>& traces, const WeilFilters& filters);
  std::size_t size() const;
  std::size_t hits() const;
  void clear();

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, WeilExistence> table_;
  std::size_t hits_ = 0;
};

StaticResult static_checks(const CaseInstance& instance);

/// All admissible n-th terms (multisets of size a_n(F)) for a prefix of n-1
/// terms, in canonical order: multiplicities of earlier types are maximized first.
std::vector<TypeMultiset> extend(const CaseInstance& instance, const SplittingSequence& prefix, int n,
                                 const SieveOptions& options = {});

/// Filters applied to a factor's Weil query (the pm2 rule and the mod-3 rule).
WeilFilters factor_filters(const CaseInstance& instance, const FactorSpec& factor);

/// Weil-existence checks on the traces of every factor marked weil.
PruneResult prune(const CaseInstance& instance, const SplittingSequence& prefix,
                  WeilCache& cache = WeilCache::global());
/// As above, restricted to the named factors (all of them if `only` is empty).
PruneResult prune(const CaseInstance& instance, const SplittingSequence& prefix, WeilCache& cache,
                  const std::vector<std::string>& only);

SieveReport sieve(const CaseInstance& instance, const SieveOptions& options = {},
                  WeilCache& cache = WeilCache::global());

}  // namespace splitsieve
