#include "splitsieve/partition.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>

namespace splitsieve {

namespace {

constexpr std::array<std::string_view, 10> kSuperscripts = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Reads a run of ASCII digits, or of superscript digits when `super` is set.
bool read_number(std::string_view& s, bool super, int& out) {
  int value = 0;
  int digits = 0;
  while (!s.empty()) {
    int digit = -1;
    if (!super) {
      if (std::isdigit(static_cast<unsigned char>(s.front()))) {
        digit = s.front() - '0';
        s.remove_prefix(1);
      }
    } else {
      for (int k = 0; k < 10; ++k) {
        if (s.substr(0, kSuperscripts[k].size()) == kSuperscripts[k]) {
          digit = k;
          s.remove_prefix(kSuperscripts[k].size());
          break;
        }
      }
    }
    if (digit < 0) break;
    value = value * 10 + digit;
    if (++digits > 6) return false;
  }
  out = value;
  return digits > 0;
}

}  // namespace

std::string superscript(int n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (char c : digits) out += kSuperscripts[c - '0'];
  return out;
}

SplittingType::SplittingType(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("a splitting type needs at least one part");
  for (int p : parts_)
    if (p <= 0) throw std::invalid_argument("splitting type parts must be positive");
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
  degree_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

SplittingType SplittingType::parse(std::string_view text) {
  std::string_view s = trim(text);
  std::vector<int> parts;
  const std::string original(text);
  while (true) {
    s = trim(s);
    int base = 0;
    if (!read_number(s, false, base) || base <= 0) throw ParseError("bad splitting type '" + original + "'");
    int exponent = 1;
    if (!s.empty() && s.front() == '^') {
      s.remove_prefix(1);
      if (!read_number(s, false, exponent)) throw ParseError("bad exponent in '" + original + "'");
    } else {
      int e = 0;
      if (read_number(s, true, e)) exponent = e;
    }
    if (exponent <= 0 || exponent > 64) throw ParseError("bad exponent in '" + original + "'");
    parts.insert(parts.end(), static_cast<std::size_t>(exponent), base);
    s = trim(s);
    if (s.empty()) break;
    if (s.front() != '+') throw ParseError("unexpected text in splitting type '" + original + "'");
    s.remove_prefix(1);
  }
  return SplittingType(std::move(parts));
}

int SplittingType::multiplicity(int k) const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), k));
}

namespace {

template <typename Exponent>
std::string render(const std::vector<int>& parts, Exponent exponent) {
  std::string out;
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    if (!out.empty()) out += "+";
    out += std::to_string(parts[i]);
    if (j - i > 1) out += exponent(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string SplittingType::ascii() const {
  return render(parts_, [](int e) { return "^" + std::to_string(e); });
}

std::string SplittingType::pretty() const { return render(parts_, superscript); }

std::vector<SplittingType> partitions(int d) {
  if (d < 1) throw std::invalid_argument("partitions needs d >= 1");
  std::vector<SplittingType> out;
  std::vector<int> current;
  // Parts are chosen weakly decreasing and largest first, which yields the
  // canonical (reverse lexicographic) order directly.
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      current.push_back(p);
      rec(remaining - p, p);
      current.pop_back();
    }
  };
  rec(d, d);
  return out;
}

TypeMultiset::TypeMultiset(std::vector<std::pair<SplittingType, int>> entries) {
  std::map<SplittingType, int, CanonicalOrder> merged;
  for (auto& [t, n] : entries) {
    if (n < 0) throw std::invalid_argument("negative multiplicity");
    if (n > 0) merged[t] += n;
  }
  entries_.assign(merged.begin(), merged.end());
}

TypeMultiset TypeMultiset::from_types(const std::vector<SplittingType>& types) {
  std::vector<std::pair<SplittingType, int>> entries;
  for (const auto& t : types) entries.emplace_back(t, 1);
  return TypeMultiset(std::move(entries));
}

TypeMultiset TypeMultiset::parse(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(text);
  if (s == "∅" || s == "{}") return {};
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("a multiset must be written in braces: '" + original + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::pair<SplittingType, int>> entries;
  while (!trim(s).empty()) {
    const auto comma = s.find(',');
    std::string_view item = trim(s.substr(0, comma));
    s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    int count = 1;
    if (const auto paren = item.find('('); paren != std::string_view::npos) {
      std::string_view mult = trim(item.substr(paren + 1));
      item = trim(item.substr(0, paren));
      if (mult.substr(0, 2) == "×")
        mult.remove_prefix(2);
      else if (!mult.empty() && (mult.front() == 'x' || mult.front() == '*'))
        mult.remove_prefix(1);
      else
        throw ParseError("bad multiplicity in '" + original + "'");
      if (!read_number(mult, false, count) || trim(mult) != ")" || count <= 0)
        throw ParseError("bad multiplicity in '" + original + "'");
    }
    entries.emplace_back(SplittingType::parse(item), count);
  }
  return TypeMultiset(std::move(entries));
}

int TypeMultiset::size() const {
  int n = 0;
  for (const auto& [_, m] : entries_) n += m;
  return n;
}

int TypeMultiset::count(const SplittingType& t) const {
  for (const auto& [u, m] : entries_)
    if (u == t) return m;
  return 0;
}

std::string TypeMultiset::pretty() const {
  if (entries_.empty()) return "∅";
  std::string out = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += entries_[i].first.pretty();
    if (entries_[i].second > 1) out += " (×" + std::to_string(entries_[i].second) + ")";
  }
  return out + "}";
}

std::string TypeMultiset::ascii() const {
  if (entries_.empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += entries_[i].first.ascii();
    if (entries_[i].second > 1) out += " (x" + std::to_string(entries_[i].second) + ")";
  }
  return out + "}";
}

std::string pretty(const SplittingSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ", ";
    out += seq[i].pretty();
  }
  return out;
}

std::string ascii(const SplittingSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ", ";
    out += seq[i].ascii();
  }
  return out;
}

}  // namespace splitsieve
