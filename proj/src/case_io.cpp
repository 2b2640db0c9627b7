#include "splitsieve/case_io.hpp"

#include "splitsieve/embedded_data.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace splitsieve {

namespace {

constexpr std::int64_t kFieldSize = 2;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  while (true) {
    s = trim(s);
    if (s.empty()) break;
    std::size_t end = 0;
    while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
    words.push_back(s.substr(0, end));
    s.remove_prefix(end);
  }
  return words;
}

std::string location(const std::string& source, int line, const std::string& row, const std::string& field) {
  std::string out = source + ":" + std::to_string(line);
  if (!row.empty()) out += ": row " + row;
  if (!field.empty()) out += ", field " + field;
  return out;
}

struct RowParser {
  const std::string& source;
  int line;
  std::string row;

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw CaseFileError(source, line, row, field, message);
  }

  Integer integer(const std::string& field, std::string_view text) const {
    text = trim(text);
    bool ok = !text.empty();
    for (std::size_t i = 0; i < text.size() && ok; ++i)
      ok = std::isdigit(static_cast<unsigned char>(text[i])) || (i == 0 && text[i] == '-' && text.size() > 1);
    if (!ok) fail(field, "expected an integer, got '" + std::string(text) + "'");
    return Integer(std::string(text));
  }

  int small(const std::string& field, std::string_view text) const {
    const Integer v = integer(field, text);
    if (!v.fits_sint_p() || v < 0 || v > 1000) fail(field, "value " + to_string(v) + " is out of range");
    return static_cast<int>(v.get_si());
  }

  std::vector<std::optional<Integer>> counts(const std::string& field, std::string_view text) const {
    std::vector<std::optional<Integer>> out;
    if (trim(text).empty()) fail(field, "empty count list");
    while (true) {
      const auto comma = text.find(',');
      const std::string_view item = trim(text.substr(0, comma));
      if (item == "*") {
        out.emplace_back(std::nullopt);
      } else {
        Integer v = integer(field, item);
        if (v < 0) fail(field, "point counts must be nonnegative, got " + to_string(v));
        out.emplace_back(std::move(v));
      }
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    if (out.size() > static_cast<std::size_t>(kCompletionDepth))
      fail(field, "at most " + std::to_string(kCompletionDepth) + " counts are allowed");
    return out;
  }
};

std::string counts_text(const std::vector<std::optional<Integer>>& counts) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += ",";
    out += counts[i] ? to_string(*counts[i]) : "*";
  }
  return out;
}

void validate(const CandidateRow& row, const RowParser& p) {
  if (row.d < 2) p.fail("d", "the degree must be at least 2");
  if (row.g < 1) p.fail("g", "the base genus must be at least 1");
  if (row.g_prime < row.g) p.fail("g'", "the cover genus is smaller than the base genus");
  if (row.is_control()) {
    if (row.counts_C.size() != static_cast<std::size_t>(kCompletionDepth) ||
        row.counts_Cp.size() != static_cast<std::size_t>(kCompletionDepth))
      p.fail("group", "a control row needs " + std::to_string(kCompletionDepth) + " counts for C and C'");
    for (const auto& c : row.counts_C)
      if (!c) p.fail("C", "a control row cannot have wildcards");
    for (const auto& c : row.counts_Cp)
      if (!c) p.fail("C'", "a control row cannot have wildcards");
  }
  try {
    (void)place_counts(PointCountProfile{kFieldSize, row.g, row.counts_C});
  } catch (const InconsistentProfile& e) {
    p.fail("C", e.what());
  }
  try {
    (void)place_counts(PointCountProfile{kFieldSize, row.g_prime, row.counts_Cp});
  } catch (const InconsistentProfile& e) {
    p.fail("C'", e.what());
  }
}

// Checks that counts N_1..N_j derived from traces are nonnegative with
// nonnegative integral place counts, and match the given concrete entries.
bool counts_plausible(std::span<const Integer> traces, const std::vector<std::optional<Integer>>& expected) {
  std::vector<std::optional<Integer>> counts;
  counts.reserve(traces.size());
  Integer qn = 1;
  for (std::size_t n = 0; n < traces.size(); ++n) {
    qn *= kFieldSize;
    Integer c = qn + 1 - traces[n];
    if (sgn(c) < 0) return false;
    if (n < expected.size() && expected[n] && *expected[n] != c) return false;
    counts.emplace_back(std::move(c));
  }
  try {
    (void)place_counts(PointCountProfile{kFieldSize, 0, counts});
  } catch (const InconsistentProfile&) {
    return false;
  }
  return true;
}

std::vector<Integer> prescribed_prefix(const std::vector<std::optional<Integer>>& counts,
                                       const std::vector<Integer>& subtract) {
  std::vector<Integer> out;
  Integer qn = 1;
  for (std::size_t n = 0; n < counts.size() && counts[n]; ++n) {
    qn *= kFieldSize;
    Integer p = qn + 1 - *counts[n];
    if (n < subtract.size()) p -= subtract[n];
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Integer> concrete(const PointCountProfile& profile) {
  std::vector<Integer> out;
  for (const auto& c : profile.counts) out.push_back(*c);
  return out;
}

}  // namespace

CaseFileError::CaseFileError(std::string source, int line, std::string row, std::string field,
                             const std::string& message)
    : ParseError(location(source, line, row, field) + ": " + message),
      source_(std::move(source)),
      line_(line),
      row_(std::move(row)),
      field_(std::move(field)) {}

std::string_view bundled_cases_text() { return embedded::kTable2Cases; }

std::vector<CandidateRow> parse_cases(std::string_view text, const std::string& source) {
  std::vector<CandidateRow> rows;
  std::set<std::string> names;
  bool header = false;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    RowParser p{source, line_no, ""};
    if (!header) {
      if (line != kCaseFileHeader)
        p.fail("", "expected the header '" + std::string(kCaseFileHeader) + "', got '" + std::string(line) + "'");
      header = true;
      continue;
    }
    const auto words = split_words(line);
    if (words[0] != "row") p.fail("", "expected 'row', got '" + std::string(words[0]) + "'");
    if (words.size() < 2) p.fail("", "missing row name");
    CandidateRow row;
    row.name = std::string(words[1]);
    row.line = line_no;
    p.row = row.name;
    if (row.name.find('=') != std::string::npos) p.fail("", "missing row name");
    if (!names.insert(row.name).second) p.fail("", "duplicate row name");
    std::set<std::string> seen;
    for (std::size_t i = 2; i < words.size(); ++i) {
      const auto eq = words[i].find('=');
      if (eq == std::string_view::npos) p.fail(std::string(words[i]), "expected key=value");
      const std::string key(words[i].substr(0, eq));
      const std::string_view value = words[i].substr(eq + 1);
      if (!seen.insert(key).second) p.fail(key, "given twice");
      if (key == "d") row.d = p.small(key, value);
      else if (key == "g") row.g = p.small(key, value);
      else if (key == "g'") row.g_prime = p.small(key, value);
      else if (key == "jac2") row.jac2 = p.integer(key, value);
      else if (key == "jac4") row.jac4 = p.integer(key, value);
      else if (key == "C") row.counts_C = p.counts(key, value);
      else if (key == "C'") row.counts_Cp = p.counts(key, value);
      else if (key == "group") {
        if (value != "free") p.fail(key, "only 'free' is supported, got '" + std::string(value) + "'");
        row.group = std::string(value);
      } else {
        p.fail(key, "unknown field");
      }
    }
    for (const char* required : {"d", "g", "g'"})
      if (!seen.count(required)) p.fail(required, "missing");
    validate(row, p);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CandidateRow> load_cases(const std::string& path) {
  if (path == kBundledDataset) return parse_cases(bundled_cases_text(), std::string(kBundledDataset));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaseFileError(path, 0, "", "", "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_cases(buffer.str(), path);
}

std::string serialize(const CandidateRow& row) {
  std::string out = "row " + row.name + " d=" + std::to_string(row.d) + " g=" + std::to_string(row.g) +
                    " g'=" + std::to_string(row.g_prime);
  if (row.jac2) out += " jac2=" + to_string(*row.jac2);
  if (row.jac4) out += " jac4=" + to_string(*row.jac4);
  if (!row.counts_C.empty()) out += " C=" + counts_text(row.counts_C);
  if (!row.counts_Cp.empty()) out += " C'=" + counts_text(row.counts_Cp);
  if (!row.group.empty()) out += " group=" + row.group;
  return out;
}

std::string serialize_cases(const std::vector<CandidateRow>& rows) {
  std::string out(kCaseFileHeader);
  out += "\n";
  for (const auto& row : rows) out += serialize(row) + "\n";
  return out;
}

std::string dataset_hash(const std::vector<CandidateRow>& rows) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_cases(rows)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<ResolvedCandidate> complete_candidate(const CandidateRow& row, std::size_t* rejected) {
  if (rejected) *rejected = 0;
  if (row.is_control()) {
    ResolvedCandidate r;
    r.row = row.name;
    for (const auto& c : row.counts_C) r.counts_C.push_back(*c);
    for (const auto& c : row.counts_Cp) r.counts_Cp.push_back(*c);
    r.jac2 = row.jac2;
    r.jac4 = row.jac4;
    return {r};
  }
  if (row.g_prime <= row.g)
    throw std::invalid_argument("row " + row.name + ": the Prym would have genus " +
                                std::to_string(row.g_prime - row.g));

  WeilFilters base_filters;
  base_filters.group_order = row.jac2;
  base_filters.predicate_horizon = kCompletionDepth;
  base_filters.trace_predicate = [&](std::span<const Integer> p) { return counts_plausible(p, row.counts_C); };
  const auto prefix_C = prescribed_prefix(row.counts_C, {});
  auto bases = enumerate_real_weil(row.g, kFieldSize, prefix_C, base_filters);

  std::vector<ResolvedCandidate> out;
  for (const auto& h_C : bases) {
    if (row.jac4 && group_order(h_C, 2) != *row.jac4) continue;
    const auto traces_C = frobenius_power_sums(h_C, kCompletionDepth);
    WeilFilters prym_filters;
    prym_filters.group_order = Integer(1);
    prym_filters.predicate_horizon = kCompletionDepth;
    prym_filters.trace_predicate = [&](std::span<const Integer> p) {
      std::vector<Integer> combined(p.begin(), p.end());
      for (std::size_t n = 0; n < combined.size(); ++n) combined[n] += traces_C[n];
      return counts_plausible(combined, row.counts_Cp);
    };
    const auto prefix_A = prescribed_prefix(row.counts_Cp, traces_C);
    for (const auto& h_A : enumerate_real_weil(row.g_prime - row.g, kFieldSize, prefix_A, prym_filters)) {
      ResolvedCandidate r;
      r.row = row.name;
      r.index = static_cast<int>(out.size());
      r.counts_C = concrete(point_counts(h_C, kCompletionDepth));
      r.counts_Cp = concrete(point_counts(multiply(h_C, h_A), kCompletionDepth));
      r.jac2 = group_order(h_C, 1);
      r.jac4 = group_order(h_C, 2);
      r.h_C = h_C;
      r.h_A = h_A;
      if (!satisfies_place_inequality(row.d, r)) {
        if (rejected) ++*rejected;
        continue;
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

bool satisfies_place_inequality(int d, const ResolvedCandidate& resolved) {
  const auto base = place_counts(PointCountProfile{kFieldSize, 0, {resolved.counts_C.begin(), resolved.counts_C.end()}});
  const auto cover =
      place_counts(PointCountProfile{kFieldSize, 0, {resolved.counts_Cp.begin(), resolved.counts_Cp.end()}});
  std::vector<Integer> places;
  for (const auto& a : cover) places.push_back(*a);
  return place_inequality_holds(d, *base[0], places) || is_exceptional_place_pattern(d, *base[0], places);
}

std::vector<CaseInstance> expand_to_grid(const CandidateRow& row, const std::vector<ResolvedCandidate>& resolved,
                                         const CoverModel& model) {
  std::vector<CaseInstance> out;
  std::vector<GroupCase> cases;
  if (row.is_control()) {
    cases.push_back(CoverModel::unrestricted(row.d));
  } else if (row.etale()) {
    for (const auto* c : model.cases_for_degree(row.d)) cases.push_back(*c);
  }
  for (const auto& r : resolved) {
    for (const auto& gc : cases) {
      CaseInstance inst;
      inst.id = r.row + "#" + std::to_string(r.index + 1) + ":" + gc.id();
      inst.row = r.row;
      inst.group_case = gc;
      inst.g = row.g;
      inst.g_prime = row.g_prime;
      inst.field_size = kFieldSize;
      inst.counts_C = r.counts_C;
      inst.counts_Cp.assign(r.counts_Cp.begin(), r.counts_Cp.end());
      inst.jacobian_F2 = r.jac2;
      inst.jacobian_F4 = r.jac4;
      inst.flags = derive_flags(gc, row.g, r.counts_C);
      inst.h_C = r.h_C;
      inst.h_A = r.h_A;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace splitsieve
