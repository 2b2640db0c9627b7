#include "splitsieve/cover_model.hpp"

#include "splitsieve/embedded_data.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace splitsieve {

const char* to_string(ResolventKind kind) {
  switch (kind) {
    case ResolventKind::kNone: return "none";
    case ResolventKind::kGeometric: return "geometric";
    case ResolventKind::kConstant: return "constant";
  }
  return "?";
}

const char* to_string(StaticCheck check) {
  switch (check) {
    case StaticCheck::kJacobianEven: return "jac-even";
    case StaticCheck::kJacobianF4Mod3: return "jac4-mod3";
  }
  return "?";
}

const SplittingType* ConversionTable::find(const SplittingType& t) const {
  for (const auto& [from, to] : rows)
    if (from == t) return &to;
  return nullptr;
}

std::string Conversion::name() const {
  switch (kind_) {
    case Kind::kIdentity: return "cover";
    case Kind::kResolvent: return "resolvent";
    case Kind::kTable: return table_->name;
  }
  return "?";
}

SplittingType Conversion::apply(const SplittingType& t) const {
  switch (kind_) {
    case Kind::kIdentity: return t;
    case Kind::kResolvent: return resolvent_image(t);
    case Kind::kTable: {
      if (const auto* image = table_->find(t)) return *image;
      throw std::invalid_argument("table " + table_->name + " has no row for " + t.ascii());
    }
  }
  return t;
}

bool GroupSpec::contains(const SplittingType& t) const {
  return std::find(cycle_types.begin(), cycle_types.end(), t) != cycle_types.end();
}

bool GroupSpec::inside_alternating() const {
  return std::all_of(cycle_types.begin(), cycle_types.end(), [](const auto& t) { return t.is_even(); });
}

std::string GroupCase::id() const { return std::to_string(degree) + "/" + group + "/" + group0; }

std::vector<Conversion> GroupCase::conversions() const {
  std::vector<Conversion> out;
  std::set<std::string> seen;
  auto add = [&](const Conversion& c) {
    if (seen.insert(c.name()).second) out.push_back(c);
  };
  for (const auto& f : factors)
    for (const auto& term : f.relation)
      if (term.conversion) add(*term.conversion);
  for (const auto& x : cross_checks) {
    add(x.conversion);
    for (const auto& term : x.relation)
      if (term.conversion) add(*term.conversion);
  }
  return out;
}

int GroupCase::factor_index(std::string_view name) const {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].name == name) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ParseError("group cases line " + std::to_string(line) + ": " + message);
}

int parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) fail(line, "expected an integer, got '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "expected an integer, got '" + s + "'");
  }
}

SplittingType parse_type(const std::string& s, int line) {
  try {
    return SplittingType::parse(s);
  } catch (const std::invalid_argument& e) {
    fail(line, e.what());
  }
}

}  // namespace

CoverModel CoverModel::parse(std::string_view text) {
  CoverModel model;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  std::shared_ptr<ConversionTable> table;
  GroupCase* current = nullptr;

  auto finish_table = [&](int line) {
    if (!table) return;
    // Every partition of the source degree that the table covers must map to a
    // partition of the target degree; tables may omit inadmissible types.
    for (const auto& [from, to] : table->rows) {
      if (from.degree() != table->from_degree || to.degree() != table->to_degree)
        fail(line, "table " + table->name + ": row " + from.ascii() + " -> " + to.ascii() + " has the wrong degree");
    }
    model.tables_[table->name] = table;
    table.reset();
  };

  auto resolve_relation = [&](const std::vector<std::string>& words, std::size_t start, const GroupCase& gc,
                              int line) {
    std::vector<RelationTerm> terms;
    long sign = 1;
    long coefficient = 1;
    bool have_coefficient = false;
    bool expect_term = true;
    for (std::size_t i = start; i < words.size(); ++i) {
      const std::string& w = words[i];
      if (w == "+" || w == "-") {
        if (!expect_term && !terms.empty()) expect_term = true;
        sign = (w == "-") ? -sign : sign;
        continue;
      }
      if (!expect_term) fail(line, "missing operator before '" + w + "'");
      if (std::isdigit(static_cast<unsigned char>(w.front()))) {
        if (have_coefficient) fail(line, "two coefficients in a row");
        coefficient = parse_int(w, line);
        have_coefficient = true;
        continue;
      }
      RelationTerm term;
      term.coefficient = sign * coefficient;
      term.symbol = w;
      if (w == "C") {
        term.kind = RelationTerm::Kind::kBase;
      } else if (w == "cover") {
        term.kind = RelationTerm::Kind::kCount;
        term.conversion = Conversion::identity();
      } else if (w == "resolvent") {
        term.kind = RelationTerm::Kind::kCount;
        term.conversion = Conversion::resolvent();
      } else if (auto it = model.tables_.find(w); it != model.tables_.end()) {
        if (it->second->from_degree != gc.degree) fail(line, "table " + w + " does not start at degree " + std::to_string(gc.degree));
        term.kind = RelationTerm::Kind::kCount;
        term.conversion = Conversion::table(it->second);
      } else if (int idx = gc.factor_index(w); idx >= 0) {
        term.kind = RelationTerm::Kind::kFactor;
        term.factor_index = idx;
      } else {
        fail(line, "unknown symbol '" + w + "'");
      }
      terms.push_back(std::move(term));
      sign = 1;
      coefficient = 1;
      have_coefficient = false;
      expect_term = false;
    }
    if (terms.empty() || expect_term) fail(line, "incomplete relation");
    return terms;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    const bool indented = std::isspace(static_cast<unsigned char>(line.front()));
    const std::string& head = words[0];

    if (!indented) {
      finish_table(line_no);
      current = nullptr;
      if (head == "table") {
        if (words.size() != 4) fail(line_no, "usage: table <name> <from-degree> <to-degree>");
        if (model.tables_.count(words[1])) fail(line_no, "duplicate table " + words[1]);
        table = std::make_shared<ConversionTable>();
        table->name = words[1];
        table->from_degree = parse_int(words[2], line_no);
        table->to_degree = parse_int(words[3], line_no);
      } else if (head == "group") {
        if (words.size() < 3) fail(line_no, "usage: group <name> <degree> [exclude <type> ...]");
        auto spec = std::make_shared<GroupSpec>();
        spec->name = words[1];
        spec->degree = parse_int(words[2], line_no);
        if (spec->degree < 2 || spec->degree > 7) fail(line_no, "group degree must lie in 2..7");
        std::size_t i = 3;
        if (i < words.size()) {
          if (words[i] != "exclude") fail(line_no, "expected 'exclude'");
          for (++i; i < words.size(); ++i) {
            auto t = parse_type(words[i], line_no);
            if (t.degree() != spec->degree) fail(line_no, "excluded type " + words[i] + " is not a partition of the degree");
            spec->excluded.push_back(t);
          }
        }
        for (const auto& t : partitions(spec->degree))
          if (std::find(spec->excluded.begin(), spec->excluded.end(), t) == spec->excluded.end())
            spec->cycle_types.push_back(t);
        if (model.groups_.count(spec->name)) fail(line_no, "duplicate group " + spec->name);
        model.groups_[spec->name] = spec;
      } else if (head == "case") {
        if (words.size() != 5) fail(line_no, "usage: case <d> <G> <G0> <none|geometric|constant>");
        GroupCase gc;
        gc.degree = parse_int(words[1], line_no);
        gc.group = words[2];
        gc.group0 = words[3];
        auto it = model.groups_.find(gc.group);
        if (it == model.groups_.end()) fail(line_no, "unknown group " + gc.group);
        gc.spec = it->second;
        if (gc.spec->degree != gc.degree) fail(line_no, "group " + gc.group + " has the wrong degree");
        if (words[4] == "none")
          gc.resolvent = ResolventKind::kNone;
        else if (words[4] == "geometric")
          gc.resolvent = ResolventKind::kGeometric;
        else if (words[4] == "constant")
          gc.resolvent = ResolventKind::kConstant;
        else
          fail(line_no, "unknown resolvent kind " + words[4]);
        // none iff G lies in A_d; constant iff G0 is the index-2 subgroup.
        const bool inside = gc.spec->inside_alternating();
        const bool same = gc.group == gc.group0;
        if (inside && (gc.resolvent != ResolventKind::kNone || !same))
          fail(line_no, gc.group + " lies in A_d, so the resolvent kind must be none with G0 = G");
        if (!inside && same && gc.resolvent != ResolventKind::kGeometric)
          fail(line_no, "G0 = G outside A_d needs a geometric resolvent");
        if (!inside && !same && gc.resolvent != ResolventKind::kConstant)
          fail(line_no, "G0 != G needs a constant resolvent");
        if (!same && gc.degree % 2 != 0) fail(line_no, "odd degree forces G0 = G");
        model.cases_.push_back(std::move(gc));
        current = &model.cases_.back();
      } else {
        fail(line_no, "unknown directive '" + head + "'");
      }
      continue;
    }

    if (table) {
      if (words.size() != 3 || words[1] != "->") fail(line_no, "usage: <type> -> <type>");
      auto from = parse_type(words[0], line_no);
      auto to = parse_type(words[2], line_no);
      if (table->find(from)) fail(line_no, "duplicate row for " + words[0]);
      table->rows.emplace_back(from, to);
      continue;
    }
    if (!current) fail(line_no, "indented line outside a table or case");
    if (head == "static") {
      if (words.size() != 2) fail(line_no, "usage: static <check>");
      if (words[1] == "jac-even")
        current->static_checks.push_back(StaticCheck::kJacobianEven);
      else if (words[1] == "jac4-mod3")
        current->static_checks.push_back(StaticCheck::kJacobianF4Mod3);
      else
        fail(line_no, "unknown static check " + words[1]);
    } else if (head == "factor") {
      auto eq = std::find(words.begin(), words.end(), "=");
      if (words.size() < 6 || eq == words.end() || words[2] != "dim")
        fail(line_no, "usage: factor <name> dim <k> [weil] [pm2] [mod3] = <relation>");
      FactorSpec f;
      f.name = words[1];
      if (current->factor_index(f.name) >= 0) fail(line_no, "duplicate factor " + f.name);
      f.dim_multiplier = parse_int(words[3], line_no);
      for (auto w = words.begin() + 4; w != eq; ++w) {
        if (*w == "weil")
          f.weil = true;
        else if (*w == "pm2")
          f.pm2 = true;
        else if (*w == "mod3")
          f.mod3 = true;
        else
          fail(line_no, "unknown factor flag " + *w);
      }
      f.relation = resolve_relation(words, static_cast<std::size_t>(eq - words.begin()) + 1, *current, line_no);
      current->factors.push_back(std::move(f));
    } else if (head == "crosscheck") {
      if (words.size() < 4 || words[2] != "=") fail(line_no, "usage: crosscheck <table> = <relation>");
      auto it = model.tables_.find(words[1]);
      if (it == model.tables_.end()) fail(line_no, "unknown table " + words[1]);
      CrossCheckSpec x;
      x.conversion = Conversion::table(it->second);
      x.relation = resolve_relation(words, 3, *current, line_no);
      current->cross_checks.push_back(std::move(x));
    } else {
      fail(line_no, "unknown case directive '" + head + "'");
    }
  }
  finish_table(line_no);

  // Conversion tables must cover every admissible type of every case using them.
  for (const auto& gc : model.cases_) {
    for (const auto& conv : gc.conversions()) {
      if (conv.kind() != Conversion::Kind::kTable) continue;
      for (const auto& t : gc.spec->cycle_types) {
        try {
          (void)conv.apply(t);
        } catch (const std::invalid_argument&) {
          throw ParseError("group cases: table " + conv.name() + " lacks a row for " + t.ascii() + " needed by " + gc.id());
        }
      }
    }
  }
  return model;
}

const CoverModel& CoverModel::builtin() {
  static const CoverModel model = parse(builtin_text());
  return model;
}

std::string_view CoverModel::builtin_text() { return embedded::kGroupCases; }

std::shared_ptr<const ConversionTable> CoverModel::table_ptr(std::string_view name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw std::out_of_range("unknown conversion table " + std::string(name));
  return it->second;
}

const ConversionTable& CoverModel::table(std::string_view name) const { return *table_ptr(name); }

const GroupSpec& CoverModel::group(std::string_view name) const {
  auto it = groups_.find(name);
  if (it == groups_.end()) throw std::out_of_range("unknown group " + std::string(name));
  return *it->second;
}

std::vector<const GroupCase*> CoverModel::cases_for_degree(int d) const {
  std::vector<const GroupCase*> out;
  for (const auto& gc : cases_)
    if (gc.degree == d) out.push_back(&gc);
  return out;
}

GroupCase CoverModel::unrestricted(int d) {
  auto spec = std::make_shared<GroupSpec>();
  spec->name = "free";
  spec->degree = d;
  spec->cycle_types = partitions(d);
  GroupCase gc;
  gc.degree = d;
  gc.group = "free";
  gc.group0 = "free";
  gc.resolvent = ResolventKind::kNone;
  gc.spec = std::move(spec);
  FactorSpec a;
  a.name = "A";
  a.dim_multiplier = d - 1;
  a.relation = {RelationTerm{1, "C", RelationTerm::Kind::kBase, std::nullopt, -1},
                RelationTerm{-1, "cover", RelationTerm::Kind::kCount, Conversion::identity(), -1}};
  gc.factors.push_back(std::move(a));
  return gc;
}

// ---------------------------------------------------------------------------
// Operations

std::vector<SplittingType> admissible_types(const GroupCase& group_case, Parity place_degree_parity,
                                            ResolventKind resolvent) {
  std::vector<SplittingType> out;
  for (const auto& t : group_case.spec->cycle_types) {
    if (resolvent == ResolventKind::kConstant && t.parity() != place_degree_parity) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<SplittingType> admissible_types(const GroupCase& group_case, int place_degree) {
  return admissible_types(group_case, place_degree % 2 == 0 ? Parity::kEven : Parity::kOdd,
                          group_case.resolvent);
}

SplittingType twin_image(const SplittingType& t) {
  if (t.degree() != 6) throw std::invalid_argument("the sextic twin needs a partition of 6");
  return *CoverModel::builtin().table("twin").find(t);
}

std::pair<SplittingType, SplittingType> a5_quotient_images(const SplittingType& t) {
  const auto& model = CoverModel::builtin();
  const auto* d5 = model.table("d5_quotient").find(t);
  const auto* a3 = model.table("a3_quotient").find(t);
  if (!d5 || !a3) throw std::invalid_argument("splitting type " + t.ascii() + " does not occur in A5");
  return {*d5, *a3};
}

SplittingType resolvent_image(const SplittingType& t) {
  return t.is_even() ? SplittingType({1, 1}) : SplittingType({2});
}

Integer quotient_counts(const SplittingSequence& seq, const Conversion& conversion, int n) {
  if (n < 1) throw std::invalid_argument("quotient_counts needs n >= 1");
  if (static_cast<int>(seq.size()) < n)
    throw std::invalid_argument("quotient_counts needs the first " + std::to_string(n) + " terms");
  long total = 0;
  for (int m = 1; m <= n; ++m) {
    if (n % m != 0) continue;
    for (const auto& [t, mult] : seq[m - 1].entries()) {
      const SplittingType image = conversion.apply(t);
      for (int mu : image.parts())
        if (n % (m * mu) == 0) total += static_cast<long>(mult) * m * mu;
    }
  }
  return Integer(total);
}

std::vector<Integer> cover_place_counts(const SplittingSequence& seq, int n) {
  if (static_cast<int>(seq.size()) < n) throw std::invalid_argument("cover_place_counts needs more terms");
  std::vector<Integer> a(static_cast<std::size_t>(n));
  for (int big = 1; big <= n; ++big)
    for (int m = 1; m <= big; ++m)
      if (big % m == 0)
        for (const auto& [t, mult] : seq[m - 1].entries()) a[big - 1] += mult * t.multiplicity(big / m);
  return a;
}

const std::vector<Integer>* DerivedTraces::find(std::string_view factor) const {
  for (const auto& [name, values] : traces)
    if (name == factor) return &values;
  return nullptr;
}

namespace {

Integer evaluate_relation(const std::vector<RelationTerm>& relation, const SplittingSequence& seq,
                          std::span<const Integer> counts_C, const DerivedTraces& earlier, int n) {
  Integer value = 0;
  for (const auto& term : relation) {
    switch (term.kind) {
      case RelationTerm::Kind::kBase:
        value += term.coefficient * counts_C[n - 1];
        break;
      case RelationTerm::Kind::kCount:
        value += term.coefficient * quotient_counts(seq, *term.conversion, n);
        break;
      case RelationTerm::Kind::kFactor:
        value += term.coefficient * earlier.traces[term.factor_index].second[n - 1];
        break;
    }
  }
  return value;
}

}  // namespace

DerivedTraces derived_traces(const GroupCase& group_case, const SplittingSequence& seq,
                             std::span<const Integer> counts_C) {
  const int len = static_cast<int>(seq.size());
  if (static_cast<int>(counts_C.size()) < len) throw std::invalid_argument("derived_traces needs base counts for every term");
  DerivedTraces out;
  for (int n = 1; n <= len; ++n) out.cover_counts.push_back(quotient_counts(seq, Conversion::identity(), n));
  for (const auto& f : group_case.factors) {
    std::vector<Integer> values;
    for (int n = 1; n <= len; ++n) values.push_back(evaluate_relation(f.relation, seq, counts_C, out, n));
    out.traces.emplace_back(f.name, std::move(values));
  }
  return out;
}

bool cross_checks_hold(const GroupCase& group_case, const SplittingSequence& seq,
                       std::span<const Integer> counts_C) {
  const auto traces = derived_traces(group_case, seq, counts_C);
  for (const auto& x : group_case.cross_checks)
    for (int n = 1; n <= static_cast<int>(seq.size()); ++n)
      if (quotient_counts(seq, x.conversion, n) != evaluate_relation(x.relation, seq, counts_C, traces, n)) return false;
  return true;
}

bool place_inequality_holds(int d, const Integer& a1_base, std::span<const Integer> cover_places) {
  auto place = [&](int i) -> Integer {
    if (i < 1 || i > static_cast<int>(cover_places.size()))
      throw std::invalid_argument("place inequality needs a_" + std::to_string(i) + " of the cover");
    return cover_places[i - 1];
  };
  Integer rhs = 0;
  for (int i = 1; i <= (d - 1) / 2; ++i) rhs += 2 * place(i);
  if (d % 2 == 0) rhs += place(d / 2);
  return 2 * a1_base > rhs;
}

bool is_exceptional_place_pattern(int d, const Integer& a1_base, std::span<const Integer> cover_places) {
  return d == 5 && a1_base == 5 && cover_places.size() >= 3 && cover_places[0] == 0 && cover_places[1] == 5 &&
         cover_places[2] == 0;
}

}  // namespace splitsieve
