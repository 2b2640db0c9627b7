#include "splitsieve/sieve.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace splitsieve {

namespace {

// Place counts a_1..a_depth of a profile given as concrete or wildcard counts.
std::vector<std::optional<Integer>> places_of(std::int64_t q, int genus,
                                              const std::vector<std::optional<Integer>>& counts) {
  PointCountProfile profile{q, genus, counts};
  return place_counts(profile);
}

std::vector<std::optional<Integer>> optional_counts(const std::vector<Integer>& counts) {
  return {counts.begin(), counts.end()};
}

long to_long(const Integer& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("place count too large: " + to_string(x));
  return x.get_si();
}

std::string join_integers(const std::vector<Integer>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

// A linear constraint sum_t x_t * stat[t] (<= or ==) bound on the term counts.
struct TermConstraint {
  std::vector<long> stat;
  long bound = 0;
  bool equality = false;
};

// Enumerates multiplicity vectors x over `types` with sum x = size, subject to
// constraints, visiting larger multiplicities of earlier types first.
class TermEnumerator {
 public:
  TermEnumerator(std::vector<SplittingType> types, long size, std::vector<TermConstraint> constraints,
                 long max_rich_cubic)
      : types_(std::move(types)), size_(size), constraints_(std::move(constraints)),
        max_rich_cubic_(max_rich_cubic) {
    const std::size_t t = types_.size();
    for (auto& c : constraints_) {
      std::vector<long> lo(t + 1, 0), hi(t + 1, 0);
      lo[t] = std::numeric_limits<long>::max();
      hi[t] = std::numeric_limits<long>::min();
      for (std::size_t i = t; i-- > 0;) {
        lo[i] = std::min(lo[i + 1], c.stat[i]);
        hi[i] = std::max(hi[i + 1], c.stat[i]);
      }
      suffix_min_.push_back(std::move(lo));
      suffix_max_.push_back(std::move(hi));
    }
    rich_.resize(t);
    for (std::size_t i = 0; i < t; ++i) rich_[i] = types_[i].multiplicity(1) >= 2;
  }

  void run(const std::function<void(const std::vector<int>&)>& visit) {
    x_.assign(types_.size(), 0);
    partial_.assign(constraints_.size(), 0);
    visit_ = &visit;
    if (types_.empty()) {
      if (size_ == 0 && feasible(0, 0)) visit(x_);
      return;
    }
    recurse(0, size_, 0);
  }

 private:
  // Can the remaining `left` places, drawn from types i.., still meet every constraint?
  bool feasible(std::size_t i, long left) const {
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
      const auto& con = constraints_[c];
      const long p = partial_[c];
      if (left == 0) {
        if (p > con.bound || (con.equality && p != con.bound)) return false;
        continue;
      }
      if (i >= types_.size()) return false;
      if (p + left * suffix_min_[c][i] > con.bound) return false;
      if (con.equality && p + left * suffix_max_[c][i] < con.bound) return false;
    }
    return true;
  }

  void recurse(std::size_t i, long left, long rich) {
    if (i + 1 == types_.size()) {
      set(i, left);
      if (feasible(i + 1, 0) && (!rich_[i] || rich + left <= max_rich_cubic_)) (*visit_)(x_);
      set(i, 0);
      return;
    }
    long cap = left;
    if (rich_[i]) cap = std::min(cap, max_rich_cubic_ - rich);
    for (long k = cap; k >= 0; --k) {
      set(i, k);
      if (feasible(i + 1, left - k)) recurse(i + 1, left - k, rich + (rich_[i] ? k : 0));
    }
    set(i, 0);
  }

  void set(std::size_t i, long value) {
    const long delta = value - x_[i];
    if (!delta) return;
    for (std::size_t c = 0; c < constraints_.size(); ++c) partial_[c] += delta * constraints_[c].stat[i];
    x_[i] = static_cast<int>(value);
  }

  std::vector<SplittingType> types_;
  long size_;
  std::vector<TermConstraint> constraints_;
  long max_rich_cubic_;
  std::vector<std::vector<long>> suffix_min_, suffix_max_;
  std::vector<bool> rich_;
  std::vector<int> x_;
  std::vector<long> partial_;
  const std::function<void(const std::vector<int>&)>* visit_ = nullptr;
};

bool castelnuovo_severi_applies(const CaseInstance& instance, const SieveOptions& options) {
  if (!options.castelnuovo_severi || !instance.jacobian_F2) return false;
  Integer g;
  mpz_gcd_ui(g.get_mpz_t(), instance.jacobian_F2->get_mpz_t(),
             static_cast<unsigned long>(instance.group_case.degree));
  return g == 1;
}

// Types allowed at a degree, optionally with the Castelnuovo-Severi restrictions.
std::vector<SplittingType> allowed_types(const CaseInstance& instance, int n, bool cs) {
  auto types = admissible_types(instance.group_case, n);
  if (cs && (n == 1 || n == 3)) {
    const int limit = n == 1 ? 2 : 4;
    std::erase_if(types, [&](const SplittingType& t) { return t.multiplicity(1) >= limit; });
  }
  return types;
}

struct Extension {
  std::vector<SplittingType> types;
  long size = 0;
  std::vector<TermConstraint> constraints;
  long max_rich_cubic = std::numeric_limits<long>::max();
};

Extension make_extension(const CaseInstance& instance, const SplittingSequence& prefix, int n, int depth,
                         std::vector<SplittingType> types, long max_rich_cubic) {
  if (n != static_cast<int>(prefix.size()) + 1)
    throw std::invalid_argument("extend: prefix must have n-1 terms");
  if (depth < n) throw std::invalid_argument("extend: n exceeds the depth");
  if (static_cast<int>(instance.counts_C.size()) < depth || static_cast<int>(instance.counts_Cp.size()) < depth)
    throw std::invalid_argument("case " + instance.id + " has fewer counts than the depth");

  const std::vector<Integer> base_counts(instance.counts_C.begin(), instance.counts_C.begin() + depth);
  const auto base = places_of(instance.field_size, instance.g, optional_counts(base_counts));
  const std::vector<std::optional<Integer>> cover_counts(instance.counts_Cp.begin(),
                                                         instance.counts_Cp.begin() + depth);
  const auto target = places_of(instance.field_size, instance.g_prime, cover_counts);

  Extension ext;
  ext.types = std::move(types);
  ext.size = to_long(*base[n - 1]);
  ext.max_rich_cubic = max_rich_cubic;
  // Only a_n(F') is matched: places of F' of degree n lie over places of
  // degree m | n, all of which are known once the n-th term is chosen.
  if (target[n - 1]) {
    long already = 0;
    for (int m = 1; m < n; ++m) {
      if (n % m) continue;
      for (const auto& [t, mult] : prefix[m - 1].entries()) already += static_cast<long>(mult) * t.multiplicity(n / m);
    }
    TermConstraint con;
    con.bound = to_long(*target[n - 1]) - already;
    con.equality = true;
    for (const auto& t : ext.types) con.stat.push_back(t.multiplicity(1));
    ext.constraints.push_back(std::move(con));
  }
  return ext;
}

TypeMultiset to_multiset(const std::vector<SplittingType>& types, const std::vector<int>& x) {
  std::vector<std::pair<SplittingType, int>> entries;
  for (std::size_t i = 0; i < types.size(); ++i)
    if (x[i]) entries.emplace_back(types[i], x[i]);
  return TypeMultiset(std::move(entries));
}

long rich_cubic_cap(const CaseInstance& instance, int n, bool cs) {
  return cs && n == 3 && instance.g_prime > 4 ? 1 : std::numeric_limits<long>::max();
}

void for_each_term(const CaseInstance& instance, const SplittingSequence& prefix, int n, int depth,
                   std::vector<SplittingType> types, long rich_cap,
                   const std::function<void(const std::vector<SplittingType>&, const std::vector<int>&)>& visit) {
  Extension ext = make_extension(instance, prefix, n, depth, std::move(types), rich_cap);
  TermEnumerator enumerator(ext.types, ext.size, ext.constraints, ext.max_rich_cubic);
  enumerator.run([&](const std::vector<int>& x) { visit(ext.types, x); });
}

bool any_term(const CaseInstance& instance, const SplittingSequence& prefix, int n, int depth,
              std::vector<SplittingType> types) {
  bool found = false;
  // The enumerator cannot stop early, so cap the work with an exception.
  struct Found {};
  try {
    for_each_term(instance, prefix, n, depth, std::move(types), std::numeric_limits<long>::max(),
                  [&](const auto&, const auto&) { throw Found{}; });
  } catch (const Found&) {
    found = true;
  }
  return found;
}

}  // namespace

const char* to_string(PruneReason reason) {
  switch (reason) {
    case PruneReason::kStaticCheck: return "static check failed";
    case PruneReason::kCountMismatch: return "count mismatch";
    case PruneReason::kInadmissibleType: return "inadmissible type";
    case PruneReason::kWeilInfeasible: return "Weil-infeasible";
  }
  return "?";
}

const char* to_string(Outcome outcome) {
  return outcome == Outcome::kEliminated ? "eliminated" : "survivor";
}

StaticFlags derive_flags(const GroupCase& group_case, int g, const std::vector<Integer>& counts_C) {
  StaticFlags flags;
  for (auto check : group_case.static_checks) {
    if (check == StaticCheck::kJacobianEven) flags.jacobian_even = true;
    if (check == StaticCheck::kJacobianF4Mod3) flags.jacobian_f4_mod3 = true;
  }
  if (g == 2 && counts_C.size() >= 2 && (counts_C[0] == 2 || counts_C[0] == 4) && counts_C[1] == 8)
    flags.pm2_filter = true;
  return flags;
}

WeilCache& WeilCache::global() {
  static WeilCache cache;
  return cache;
}

WeilExistence WeilCache::exists(int g, std::int64_t q, const std::vector<Integer>& traces,
                                const WeilFilters& filters) {
  std::string key = std::to_string(g) + "|" + std::to_string(q) + "|";
  for (const auto& t : traces) key += to_string(t) + ",";
  key += "|" + filters.key();
  {
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) {
      ++hits_;
      return it->second;
    }
  }
  WeilExistence answer;
  if (g == 0) {
    answer.exists = std::all_of(traces.begin(), traces.end(), [](const Integer& t) { return t == 0; });
    answer.verdict = answer.exists ? WeilVerdict::kFound : WeilVerdict::kWeilBound;
  } else {
    answer = exists_real_weil(g, q, traces, filters);
  }
  std::lock_guard lock(mutex_);
  table_[key] = answer;
  return answer;
}

std::size_t WeilCache::size() const {
  std::lock_guard lock(mutex_);
  return table_.size();
}

std::size_t WeilCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

void WeilCache::clear() {
  std::lock_guard lock(mutex_);
  table_.clear();
  hits_ = 0;
}

StaticResult static_checks(const CaseInstance& instance) {
  if (instance.flags.jacobian_even) {
    if (!instance.jacobian_F2) return {false, "#J(C)(F_2) is unknown but must be even"};
    if (mpz_odd_p(instance.jacobian_F2->get_mpz_t()))
      return {false, "#J(C)(F_2) = " + to_string(*instance.jacobian_F2) + " is odd"};
  }
  if (instance.flags.jacobian_f4_mod3) {
    if (!instance.jacobian_F4) return {false, "#J(C)(F_4) is unknown but must be divisible by 3"};
    if (!mpz_divisible_ui_p(instance.jacobian_F4->get_mpz_t(), 3))
      return {false, "#J(C)(F_4) = " + to_string(*instance.jacobian_F4) + " is not divisible by 3"};
  }
  return {};
}

std::vector<TypeMultiset> extend(const CaseInstance& instance, const SplittingSequence& prefix, int n,
                                 const SieveOptions& options) {
  const bool cs = castelnuovo_severi_applies(instance, options);
  std::vector<TypeMultiset> out;
  for_each_term(instance, prefix, n, options.depth, allowed_types(instance, n, cs), rich_cubic_cap(instance, n, cs),
                [&](const auto& types, const auto& x) { out.push_back(to_multiset(types, x)); });
  return out;
}

PruneResult prune(const CaseInstance& instance, const SplittingSequence& prefix, WeilCache& cache) {
  return prune(instance, prefix, cache, {});
}

WeilFilters factor_filters(const CaseInstance& instance, const FactorSpec& factor) {
  WeilFilters filters;
  if (factor.pm2 && instance.flags.pm2_filter) filters.allowed_traces[1] = {Integer(-2), Integer(2)};
  if (factor.mod3 && instance.jacobian_F2 && !mpz_divisible_ui_p(instance.jacobian_F2->get_mpz_t(), 3))
    filters.divisibility.push_back({1, Integer(3)});
  return filters;
}

PruneResult prune(const CaseInstance& instance, const SplittingSequence& prefix, WeilCache& cache,
                  const std::vector<std::string>& only) {
  const auto n = prefix.size();
  if (instance.counts_C.size() < n) throw std::invalid_argument("prune: prefix longer than the base counts");
  const auto traces = derived_traces(instance.group_case, prefix, std::span(instance.counts_C).first(n));
  for (std::size_t i = 0; i < instance.group_case.factors.size(); ++i) {
    const auto& factor = instance.group_case.factors[i];
    if (!factor.weil) continue;
    if (!only.empty() && std::find(only.begin(), only.end(), factor.name) == only.end()) continue;
    const auto& t = traces.traces[i].second;
    const auto filters = factor_filters(instance, factor);
    const int dim = factor.dimension(instance.g);
    const auto answer = cache.exists(dim, instance.field_size, t, filters);
    if (!answer.exists) {
      std::string detail = "T_" + factor.name + " = " + join_integers(t) + " fits no real Weil polynomial of genus " +
                           std::to_string(dim) + " (" + to_string(answer.verdict) + ")";
      if (!filters.empty()) detail += " with " + filters.key();
      return {false, factor.name, std::move(detail)};
    }
  }
  return {};
}

namespace {

class Search {
 public:
  Search(const CaseInstance& instance, const SieveOptions& options, WeilCache& cache)
      : instance_(instance), options_(options), cache_(cache), cs_(castelnuovo_severi_applies(instance, options)) {
    report_.case_id = instance.id;
    report_.group_case = instance.group_case.id();
    report_.depth = options.depth;
    report_.survivors_per_depth.assign(static_cast<std::size_t>(options.depth), 0);
    if (options.record_nodes) report_.nodes.resize(static_cast<std::size_t>(options.depth));
    diagnostic_depth_ = std::max(1, instance.group_case.degree / 2);
  }

  SieveReport run() {
    if (options_.depth < 1) throw std::invalid_argument("depth must be at least 1");
    report_.static_result = static_checks(instance_);
    if (!report_.static_result.pass) {
      log(0, {}, PruneReason::kStaticCheck, report_.static_result.reason);
      report_.outcome = Outcome::kEliminated;
      return std::move(report_);
    }
    SplittingSequence prefix;
    descend(prefix, 1);
    report_.outcome = report_.surviving_prefixes.empty() ? Outcome::kEliminated : Outcome::kSurvivor;
    return std::move(report_);
  }

 private:
  void log(int depth, const SplittingSequence& prefix, PruneReason reason, std::string detail) {
    ++report_.reason_counts[to_string(reason)];
    if (report_.log.size() >= options_.log_limit) {
      ++report_.log_dropped;
      return;
    }
    report_.log.push_back({depth, pretty(prefix), reason, std::move(detail)});
  }

  void descend(SplittingSequence& prefix, int n) {
    if (n > options_.depth) {
      report_.surviving_prefixes.push_back(prefix);
      return;
    }
    auto terms = extend(instance_, prefix, n, options_);
    if (terms.empty()) {
      explain_empty(prefix, n);
      return;
    }
    for (auto& term : terms) {
      prefix.push_back(std::move(term));
      if (n == diagnostic_depth_) check_cycle_diagnostic(prefix);
      auto verdict = prune(instance_, prefix, cache_);
      if (verdict.keep) {
        ++report_.survivors_per_depth[n - 1];
        report_.max_depth_reached = std::max(report_.max_depth_reached, n);
        if (options_.record_nodes)
          report_.nodes[n - 1].push_back(
              {prefix, derived_traces(instance_.group_case, prefix, std::span(instance_.counts_C).first(n))});
        descend(prefix, n + 1);
      } else {
        log(n, prefix, PruneReason::kWeilInfeasible, std::move(verdict.detail));
      }
      prefix.pop_back();
    }
  }

  // Once the cover counts through degree d/2 are matched, some degree-1 place
  // must be inert (type d), except for the one exceptional count pattern.
  void check_cycle_diagnostic(const SplittingSequence& prefix) {
    const int d = instance_.group_case.degree;
    if (prefix.front().contains(SplittingType({d}))) return;
    if (!exceptional_) {
      exceptional_ = false;
      std::vector<Integer> cover;
      const std::size_t k = std::min<std::size_t>(3, instance_.counts_Cp.size());
      try {
        const auto places = places_of(instance_.field_size, instance_.g_prime,
                                      {instance_.counts_Cp.begin(), instance_.counts_Cp.begin() + k});
        for (const auto& a : places)
          if (a) cover.push_back(*a);
        if (cover.size() == k)
          exceptional_ = is_exceptional_place_pattern(d, instance_.counts_C.front(), cover);
      } catch (const InconsistentProfile&) {
      }
    }
    if (!*exceptional_) report_.cycle_diagnostic = false;
  }

  void explain_empty(const SplittingSequence& prefix, int n) {
    const auto base = places_of(instance_.field_size, instance_.g,
                                optional_counts({instance_.counts_C.begin(), instance_.counts_C.begin() + n}));
    const std::string size = to_string(*base[n - 1]);
    // Distinguish a genuine count mismatch from one caused by the group.
    if (any_term(instance_, prefix, n, options_.depth, partitions(instance_.group_case.degree))) {
      std::string detail = "every " + size + "-element term matching #C'(F_{2^" + std::to_string(n) +
                           "}) uses a type excluded by " + instance_.group_case.id();
      if (instance_.group_case.resolvent == ResolventKind::kConstant) detail += " (constant resolvent parity)";
      if (cs_) detail += " or by the Castelnuovo-Severi restrictions";
      log(n, prefix, PruneReason::kInadmissibleType, std::move(detail));
    } else {
      log(n, prefix, PruneReason::kCountMismatch,
          "no " + size + "-element multiset of splitting types reproduces #C'(F_{2^" + std::to_string(n) + "})");
    }
  }

  const CaseInstance& instance_;
  const SieveOptions& options_;
  WeilCache& cache_;
  bool cs_;
  int diagnostic_depth_ = 1;
  std::optional<bool> exceptional_;
  SieveReport report_;
};

}  // namespace

SieveReport sieve(const CaseInstance& instance, const SieveOptions& options, WeilCache& cache) {
  return Search(instance, options, cache).run();
}

}  // namespace splitsieve
