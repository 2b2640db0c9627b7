// splitsieve: batch verification of the case grid, plus single-case and
// Weil-polynomial exploration.

#include "splitsieve/case_io.hpp"
#include "splitsieve/sieve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#ifndef SPLITSIEVE_VERSION
#define SPLITSIEVE_VERSION "0.0.0"
#endif

using namespace splitsieve;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitEliminated = 0;
constexpr int kExitSurvivor = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string cases = std::string(kBundledDataset);
  int depth = kDefaultDepth;
  bool castelnuovo_severi = false;
  std::string report;
  unsigned jobs = 0;
  bool timing = false;
};

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(i) for i < n on a small pool; results land in caller-owned slots,
// so the output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  const unsigned workers = worker_count(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<CandidateRow> load(const Options& opt) {
  try {
    return load_cases(opt.cases);
  } catch (const ParseError& e) {
    throw InputError(e.what());
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string tuple(const std::vector<std::string>& parts) { return "(" + join(parts) + ")"; }

std::vector<std::string> strings(const std::vector<Integer>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

std::string counts_text(const std::vector<std::optional<Integer>>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(x ? to_string(*x) : "*");
  return join(out, ",");
}

json integers(const std::vector<Integer>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

// ---------------------------------------------------------------------------
// Grid construction shared by verify and explain

struct RowPlan {
  const CandidateRow* row = nullptr;
  std::string status;  // sieved, skipped, unresolved
  std::string reason;
  std::vector<ResolvedCandidate> resolved;
  std::size_t rejected = 0;
  std::vector<CaseInstance> instances;
};

std::vector<RowPlan> plan_rows(const std::vector<CandidateRow>& rows, const Options& opt) {
  std::vector<RowPlan> plans(rows.size());
  parallel_for(rows.size(), opt.jobs, [&](std::size_t i) {
    auto& plan = plans[i];
    const auto& row = rows[i];
    plan.row = &row;
    if (!row.etale() && !row.is_control()) {
      plan.status = "skipped";
      plan.reason = "ramified cover (g' != d(g-1)+1)";
      return;
    }
    if (!row.is_control() && CoverModel::builtin().cases_for_degree(row.d).empty()) {
      plan.status = "skipped";
      plan.reason = "no group cases in degree " + std::to_string(row.d);
      return;
    }
    try {
      plan.resolved = complete_candidate(row, &plan.rejected);
    } catch (const std::invalid_argument& e) {
      plan.status = "unresolved";
      plan.reason = e.what();
      return;
    }
    if (plan.resolved.empty()) {
      plan.status = "unresolved";
      plan.reason = "no pair of Weil polynomials reproduces the row";
      return;
    }
    plan.instances = expand_to_grid(row, plan.resolved);
    plan.status = "sieved";
  });
  return plans;
}

SieveOptions sieve_options(const Options& opt) {
  SieveOptions s;
  s.depth = opt.depth;
  s.castelnuovo_severi = opt.castelnuovo_severi;
  return s;
}

// ---------------------------------------------------------------------------
// verify

json instance_record(const CaseInstance& inst, const SieveReport& rep) {
  json j;
  j["id"] = inst.id;
  j["row"] = inst.row;
  j["group_case"] = rep.group_case;
  j["resolvent"] = to_string(inst.group_case.resolvent);
  j["h_C"] = inst.h_C ? json(inst.h_C->to_string()) : json(nullptr);
  j["h_A"] = inst.h_A ? json(inst.h_A->to_string()) : json(nullptr);
  j["counts_C"] = integers(inst.counts_C);
  j["outcome"] = to_string(rep.outcome);
  j["max_depth_reached"] = rep.max_depth_reached;
  j["survivors_per_depth"] = rep.survivors_per_depth;
  j["static_check"] = {{"pass", rep.static_result.pass}, {"reason", rep.static_result.reason}};
  j["cycle_diagnostic"] = rep.cycle_diagnostic;
  j["reason_counts"] = rep.reason_counts;
  json prefixes = json::array();
  for (const auto& p : rep.surviving_prefixes) prefixes.push_back(pretty(p));
  j["surviving_prefixes"] = prefixes;
  json log = json::array();
  for (const auto& e : rep.log)
    log.push_back({{"depth", e.depth}, {"prefix", e.prefix}, {"reason", to_string(e.reason)}, {"detail", e.detail}});
  j["log"] = log;
  j["log_dropped"] = rep.log_dropped;
  return j;
}

int cmd_verify(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = load(opt);
  const auto plans = plan_rows(rows, opt);

  std::vector<const CaseInstance*> instances;
  for (const auto& p : plans)
    for (const auto& inst : p.instances) instances.push_back(&inst);
  std::vector<SieveReport> reports(instances.size());
  const auto sopt = sieve_options(opt);
  parallel_for(instances.size(), opt.jobs, [&](std::size_t i) { reports[i] = sieve(*instances[i], sopt); });

  std::size_t survivors = 0, sieved = 0, skipped = 0, unresolved = 0;
  for (const auto& r : reports) survivors += r.outcome == Outcome::kSurvivor;
  for (const auto& p : plans) {
    sieved += p.status == "sieved";
    skipped += p.status == "skipped";
    unresolved += p.status == "unresolved";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "splitsieve " << SPLITSIEVE_VERSION << ": " << opt.cases << " (" << rows.size() << " rows, hash "
            << dataset_hash(rows) << "), depth " << opt.depth
            << (opt.castelnuovo_severi ? ", Castelnuovo-Severi on" : "") << "\n";
  std::size_t k = 0;
  for (const auto& p : plans) {
    const auto& row = *p.row;
    std::ostringstream line;
    line << row.name << "  d=" << row.d << " g=" << row.g << " g'=" << row.g_prime << "  ";
    if (p.status != "sieved") {
      line << p.status << ": " << p.reason;
    } else {
      std::size_t eliminated = 0;
      for (std::size_t i = 0; i < p.instances.size(); ++i) eliminated += reports[k + i].outcome == Outcome::kEliminated;
      line << p.resolved.size() << (p.resolved.size() == 1 ? " resolution, " : " resolutions, ") << p.instances.size()
           << (p.instances.size() == 1 ? " instance, " : " instances, ") << eliminated << " eliminated";
    }
    std::cout << line.str() << "\n";
    for (std::size_t i = 0; i < p.instances.size(); ++i, ++k) {
      const auto& rep = reports[k];
      if (rep.outcome != Outcome::kSurvivor) continue;
      std::cout << "  SURVIVOR " << rep.case_id << " (" << rep.surviving_prefixes.size() << " prefixes)\n";
      for (std::size_t s = 0; s < std::min<std::size_t>(rep.surviving_prefixes.size(), 5); ++s)
        std::cout << "    " << pretty(rep.surviving_prefixes[s]) << "\n";
    }
  }
  std::cout << instances.size() << " instances: " << instances.size() - survivors << " eliminated, " << survivors
            << " survivors; rows: " << sieved << " sieved, " << skipped << " skipped, " << unresolved << " unresolved\n";
  if (opt.timing) std::cout << "elapsed " << seconds << " s\n";

  if (!opt.report.empty()) {
    json j;
    j["tool"] = "splitsieve";
    j["version"] = SPLITSIEVE_VERSION;
    j["dataset"] = {{"source", opt.cases}, {"hash", dataset_hash(rows)}, {"rows", rows.size()}};
    j["options"] = {{"depth", opt.depth}, {"castelnuovo_severi", opt.castelnuovo_severi}};
    j["summary"] = {{"rows", rows.size()},
                    {"sieved_rows", sieved},
                    {"skipped_rows", skipped},
                    {"unresolved_rows", unresolved},
                    {"instances", instances.size()},
                    {"eliminated", instances.size() - survivors},
                    {"survivors", survivors}};
    json jrows = json::array();
    for (const auto& p : plans) {
      json r;
      r["name"] = p.row->name;
      r["line"] = p.row->line;
      r["d"] = p.row->d;
      r["g"] = p.row->g;
      r["g_prime"] = p.row->g_prime;
      r["status"] = p.status;
      if (!p.reason.empty()) r["reason"] = p.reason;
      r["resolutions"] = p.resolved.size();
      r["rejected_by_place_inequality"] = p.rejected;
      r["instances"] = p.instances.size();
      jrows.push_back(std::move(r));
    }
    j["rows"] = jrows;
    json jinst = json::array();
    for (std::size_t i = 0; i < instances.size(); ++i) jinst.push_back(instance_record(*instances[i], reports[i]));
    j["instances"] = jinst;
    if (opt.timing) j["duration_seconds"] = seconds;
    std::ofstream out(opt.report);
    if (!out) throw InputError("cannot write report " + opt.report);
    out << j.dump(2) << "\n";
  }

  if (unresolved) {
    std::cerr << "error: " << unresolved << " row(s) did not resolve to any candidate\n";
    return kExitInput;
  }
  return survivors ? kExitSurvivor : kExitEliminated;
}

// ---------------------------------------------------------------------------
// explain

// "t2-41#1:6/S6/S6" exactly, "t2-41:6/S6/S6" (any resolution), or "t2-41".
const CaseInstance& select_instance(const std::vector<RowPlan>& plans, const std::string& selector) {
  std::vector<const CaseInstance*> hits;
  const auto colon = selector.find(':');
  const std::string row = selector.substr(0, std::min(selector.find('#'), colon));
  for (const auto& p : plans)
    for (const auto& inst : p.instances) {
      if (inst.id == selector) return inst;
      if (inst.row != row) continue;
      const bool has_index = selector.find('#') != std::string::npos;
      if (has_index && inst.id.rfind(selector, 0) != 0) continue;
      if (!has_index && colon != std::string::npos && inst.group_case.id() != selector.substr(colon + 1)) continue;
      hits.push_back(&inst);
    }
  if (hits.size() == 1) return *hits.front();
  if (hits.empty()) throw InputError("unknown selector " + selector);
  std::string msg = "selector " + selector + " is ambiguous:";
  for (const auto* h : hits) msg += "\n  " + h->id;
  throw InputError(msg);
}

std::vector<std::string> merge_column(const std::vector<std::vector<std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  std::vector<std::string> out(width);
  for (std::size_t i = 0; i < width; ++i) {
    std::optional<std::string> v;
    for (const auto& r : rows) {
      const std::string x = i < r.size() ? r[i] : "?";
      if (!v) v = x;
      else if (*v != x) v = "?";
    }
    out[i] = v.value_or("?");
  }
  return out;
}

std::string value_set(const std::set<Integer>& values) {
  if (values.empty()) return "none";
  std::vector<std::string> parts;
  for (const auto& v : values) parts.push_back(to_string(v));
  if (parts.size() <= 4) return join(parts, "/");
  return parts.front() + "/⋯/" + parts.back();
}

void print_traces(const DerivedTraces& t, const char* indent) {
  for (const auto& [name, values] : t.traces)
    std::cout << indent << "T_" << name << " = " << tuple(strings(values)) << "\n";
}

int cmd_explain(const Options& opt, const std::string& selector, std::size_t limit) {
  const auto rows = load(opt);
  const auto plans = plan_rows(rows, opt);
  const auto& inst = select_instance(plans, selector);
  auto sopt = sieve_options(opt);
  sopt.record_nodes = true;
  const auto rep = sieve(inst, sopt);
  const auto& gc = inst.group_case;

  std::cout << inst.id << "  d=" << gc.degree << " G=" << gc.group << " G0=" << gc.group0 << ", resolvent "
            << to_string(gc.resolvent) << "\n";
  if (inst.h_C) std::cout << "h_C = " << inst.h_C->pretty() << "\n";
  if (inst.h_A) std::cout << "h_A = " << inst.h_A->pretty() << "\n";
  std::cout << "#C  = " << tuple(strings(inst.counts_C)) << "\n";
  std::cout << "#C' = (" << counts_text(inst.counts_Cp) << ")\n";
  for (const auto& f : gc.factors)
    std::cout << "factor " << f.name << ": dimension " << f.dimension(inst.g) << (f.weil ? ", Weil-checked" : "")
              << (f.pm2 && inst.flags.pm2_filter ? ", T_" + f.name + ",2 in {-2,2}" : "") << "\n";
  if (!rep.static_result.pass) std::cout << "static check fails: " << rep.static_result.reason << "\n";

  for (std::size_t n = 0; n < rep.nodes.size(); ++n) {
    const auto& level = rep.nodes[n];
    if (level.empty()) break;
    std::cout << "depth " << n + 1 << ": " << level.size() << " surviving\n";
    for (std::size_t i = 0; i < std::min(level.size(), limit); ++i) {
      std::cout << "  " << pretty(level[i].prefix) << "\n";
      print_traces(level[i].traces, "      ");
    }
    if (level.size() > limit) std::cout << "  ... " << level.size() - limit << " more\n";
  }

  // The merged view covers the deepest survivors and, below them, the
  // candidates that were cut; '?' marks disagreement.
  const int m = rep.max_depth_reached;
  std::vector<SplittingSequence> view;
  if (m > 0) {
    for (const auto& node : rep.nodes[static_cast<std::size_t>(m - 1)]) view.push_back(node.prefix);
  }
  std::vector<SplittingSequence> frontier;
  if (m < opt.depth && rep.static_result.pass) {
    const std::vector<SplittingSequence> parents = m > 0 ? view : std::vector<SplittingSequence>{{}};
    for (const auto& parent : parents)
      for (auto& term : extend(inst, parent, m + 1, sopt)) {
        auto seq = parent;
        seq.push_back(std::move(term));
        frontier.push_back(std::move(seq));
      }
  }
  const auto& merged = frontier.empty() ? view : frontier;
  if (!merged.empty()) {
    std::vector<std::vector<std::string>> terms;
    std::map<std::string, std::vector<std::vector<std::string>>> traces;
    std::vector<std::vector<std::string>> excess;
    std::vector<std::string> order;
    for (const auto& seq : merged) {
      std::vector<std::string> t;
      for (const auto& s : seq) t.push_back(s.pretty());
      terms.push_back(std::move(t));
      const auto d = derived_traces(gc, seq, std::span(inst.counts_C).first(seq.size()));
      for (const auto& [name, values] : d.traces) {
        if (!traces.count(name)) order.push_back(name);
        traces[name].push_back(strings(values));
      }
      std::vector<Integer> diff;
      for (std::size_t i = 0; i < d.cover_counts.size(); ++i) diff.push_back(d.cover_counts[i] - gc.degree * inst.counts_C[i]);
      excess.push_back(strings(diff));
    }
    std::cout << "merged (" << merged.size() << (frontier.empty() ? " survivors" : " candidates at depth " + std::to_string(m + 1))
              << "):\n  " << join(merge_column(terms)) << "\n";
    for (const auto& name : order) std::cout << "  T_" << name << " = " << tuple(merge_column(traces[name])) << "\n";
    std::cout << "  N(C') - d N(C) = " << tuple(merge_column(excess)) << "\n";
  }

  // One step of Weil continuation past the common trace prefix of the survivors.
  if (m > 0) {
    const auto& level = rep.nodes[static_cast<std::size_t>(m - 1)];
    for (std::size_t f = 0; f < gc.factors.size(); ++f) {
      const auto& factor = gc.factors[f];
      const int dim = factor.dimension(inst.g);
      if (!factor.weil || dim <= 0) continue;
      std::vector<Integer> common = level.front().traces.traces[f].second;
      for (const auto& node : level) {
        const auto& t = node.traces.traces[f].second;
        std::size_t k = 0;
        while (k < common.size() && k < t.size() && common[k] == t[k]) ++k;
        common.resize(k);
      }
      if (common.empty()) continue;
      std::set<Integer> next;
      const int n = static_cast<int>(common.size()) + 1;
      for (const auto& h : enumerate_real_weil(dim, inst.field_size, common, factor_filters(inst, factor)))
        next.insert(frobenius_power_sums(h, n).back());
      auto shown = strings(common);
      shown.push_back(value_set(next));
      std::cout << "T_" << factor.name << " with Weil continuation = " << tuple(shown) << "\n";
    }
  }

  std::cout << "outcome: " << to_string(rep.outcome);
  if (rep.outcome == Outcome::kEliminated) std::cout << ", deepest surviving prefix has length " << m;
  std::cout << "\n";
  for (const auto& [reason, count] : rep.reason_counts) std::cout << "  " << reason << ": " << count << "\n";
  std::cout << "log:\n";
  for (std::size_t i = 0; i < std::min(rep.log.size(), limit); ++i) {
    const auto& e = rep.log[i];
    std::cout << "  [" << e.depth << "] " << e.prefix << "\n      " << to_string(e.reason) << ": " << e.detail << "\n";
  }
  if (rep.log.size() > limit) std::cout << "  ... " << rep.log.size() - limit << " more\n";
  return rep.outcome == Outcome::kSurvivor ? kExitSurvivor : kExitEliminated;
}

// ---------------------------------------------------------------------------
// weil

std::vector<Integer> parse_integers(const std::string& text, const char* what) {
  std::vector<Integer> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    Integer v;
    if (v.set_str(item, 10) != 0) throw InputError(std::string("bad integer in ") + what + ": " + item);
    out.push_back(v);
  }
  return out;
}

std::pair<int, std::string> split_at_colon(const std::string& spec, const char* what) {
  const auto c = spec.find(':');
  if (c == std::string::npos) throw InputError(std::string(what) + " expects K:VALUE, got " + spec);
  try {
    return {std::stoi(spec.substr(0, c)), spec.substr(c + 1)};
  } catch (const std::exception&) {
    throw InputError(std::string(what) + " expects K:VALUE, got " + spec);
  }
}

struct WeilArgs {
  int genus = 1;
  std::int64_t q = 2;
  std::string sums;
  std::string group_order;
  std::vector<std::string> divisible;
  std::vector<std::string> allowed;
  int depth = kDefaultDepth;
};

int cmd_weil(const WeilArgs& a) {
  if (a.genus < 1) throw InputError("genus must be positive");
  const auto sums = parse_integers(a.sums, "--sums");
  WeilFilters filters;
  if (!a.group_order.empty()) {
    const auto v = parse_integers(a.group_order, "--group-order");
    if (v.size() != 1) throw InputError("--group-order takes one integer");
    filters.group_order = v.front();
  }
  for (const auto& spec : a.divisible) {
    const auto [k, rest] = split_at_colon(spec, "--divisible");
    const auto v = parse_integers(rest, "--divisible");
    if (k < 1 || v.size() != 1 || v.front() == 0) throw InputError("--divisible expects K:M with K >= 1, M != 0");
    filters.divisibility.push_back({k, v.front()});
  }
  for (const auto& spec : a.allowed) {
    const auto [n, rest] = split_at_colon(spec, "--allowed");
    if (n < 1) throw InputError("--allowed expects N >= 1");
    filters.allowed_traces[n] = parse_integers(rest, "--allowed");
  }

  std::vector<RealWeilPolynomial> found;
  try {
    found = enumerate_real_weil(a.genus, a.q, sums, filters);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::cout << "# genus " << a.genus << " over F_" << a.q << ", traces " << tuple(strings(sums));
  if (!filters.empty()) std::cout << ", filters " << filters.key();
  std::cout << ": " << found.size() << (found.size() == 1 ? " polynomial" : " polynomials");
  if (found.empty()) {
    if (const auto why = screen_prescription(a.genus, a.q, sums)) std::cout << " (" << to_string(*why) << ")";
  }
  std::cout << "\n";
  for (const auto& h : found) {
    std::vector<std::string> counts;
    try {
      for (const auto& c : point_counts(h, a.depth).counts) counts.push_back(to_string(*c));
    } catch (const InconsistentProfile&) {
      counts = {"negative"};
    }
    std::cout << h.to_string() << "  " << h.pretty() << "  traces " << tuple(strings(frobenius_power_sums(h, a.depth)))
              << "  N " << tuple(counts) << "  #A(F_q) " << to_string(group_order(h)) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// complete

int cmd_complete(const Options& opt, const std::string& name) {
  const auto rows = load(opt);
  const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.name == name; });
  if (it == rows.end()) throw InputError("unknown row " + name);
  std::size_t rejected = 0;
  std::vector<ResolvedCandidate> resolved;
  try {
    resolved = complete_candidate(*it, &rejected);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::cout << serialize(*it) << "\n";
  std::cout << resolved.size() << (resolved.size() == 1 ? " resolution" : " resolutions") << ", " << rejected
            << " rejected by the place inequality\n";
  for (const auto& r : resolved) {
    std::cout << "#" << r.index + 1;
    if (r.h_C) std::cout << "  h_C = " << r.h_C->pretty();
    if (r.h_A) std::cout << "  h_A = " << r.h_A->pretty();
    std::cout << "\n    C  " << tuple(strings(r.counts_C)) << "\n    C' " << tuple(strings(r.counts_Cp));
    if (r.jac2) std::cout << "\n    #J(C)(F_2) = " << to_string(*r.jac2);
    if (r.jac4) std::cout << ", #J(C)(F_4) = " << to_string(*r.jac4);
    std::cout << "\n";
  }
  if (resolved.empty()) {
    std::cerr << "error: row " << name << " resolves to no candidate\n";
    return kExitSurvivor;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sieve for splitting sequences of noncyclic covers of curves over F_2"};
  app.set_version_flag("--version", SPLITSIEVE_VERSION);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cases", opt.cases, "case file, or @table2 for the bundled dataset")->capture_default_str();
    sub->add_option("--depth", opt.depth, "search depth")->check(CLI::Range(1, kCompletionDepth))->capture_default_str();
    sub->add_flag("--castelnuovo-severi", opt.castelnuovo_severi, "add the genus-bound cut");
    sub->add_option("--jobs,-j", opt.jobs, "worker threads (0: one per core)");
  };

  auto* verify = app.add_subcommand("verify", "sieve every instance of the grid");
  add_common(verify);
  verify->add_option("--report", opt.report, "write a JSON report");
  verify->add_flag("--timing", opt.timing, "print and record wall-clock time");

  std::string selector;
  std::size_t limit = 20;
  auto* explain = app.add_subcommand("explain", "trace one instance depth by depth");
  add_common(explain);
  explain->add_option("selector", selector, "ROW, ROW:CASE or ROW#K:CASE")->required();
  explain->add_option("--limit", limit, "entries shown per depth and from the log")->capture_default_str();

  WeilArgs weil_args;
  auto* weil = app.add_subcommand("weil", "list real Weil polynomials");
  weil->add_option("genus", weil_args.genus, "genus")->required();
  weil->add_option("--q", weil_args.q, "field size")->capture_default_str();
  weil->add_option("--sums", weil_args.sums, "prescribed traces p_1,p_2,...");
  weil->add_option("--group-order", weil_args.group_order, "exact #A(F_q)");
  weil->add_option("--divisible", weil_args.divisible, "K:M, M divides #A(F_{q^K})");
  weil->add_option("--allowed", weil_args.allowed, "N:V1,V2,..., allowed values of p_N");
  weil->add_option("--depth", weil_args.depth, "point counts shown")->check(CLI::Range(1, 20))->capture_default_str();

  std::string row_name;
  auto* complete = app.add_subcommand("complete", "resolve one row into Weil polynomial pairs");
  complete->add_option("--cases", opt.cases, "case file, or @table2")->capture_default_str();
  complete->add_option("row", row_name, "row name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*verify) return cmd_verify(opt);
    if (*explain) return cmd_explain(opt, selector, limit);
    if (*weil) return cmd_weil(weil_args);
    if (*complete) return cmd_complete(opt, row_name);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
