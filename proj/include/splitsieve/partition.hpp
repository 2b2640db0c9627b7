#pragma once

// Splitting types (partitions of d) and multisets of them.

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace splitsieve {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Parity { kEven, kOdd };

class SplittingType {
 public:
  SplittingType() = default;
  /// Any order; stored weakly decreasing. Parts must be positive.
  explicit SplittingType(std::vector<int> parts);

  /// Accepts "3+1^2", "3+1²", "2^2+1", "1^6", "6".
  static SplittingType parse(std::string_view text);

  int degree() const { return degree_; }
  const std::vector<int>& parts() const { return parts_; }
  int part_count() const { return static_cast<int>(parts_.size()); }
  /// Number of parts equal to k.
  int multiplicity(int k) const;
  /// Even iff d and the number of parts have the same parity.
  Parity parity() const { return (degree_ - part_count()) % 2 == 0 ? Parity::kEven : Parity::kOdd; }
  bool is_even() const { return parity() == Parity::kEven; }

  std::string ascii() const;   // 3+1^2
  std::string pretty() const;  // 3+1²

  /// Lexicographic on the decreasing part list; 1^d is smallest and d largest.
  friend auto operator<=>(const SplittingType&, const SplittingType&) = default;
  friend bool operator==(const SplittingType&, const SplittingType&) = default;

 private:
  std::vector<int> parts_;
  int degree_ = 0;
};

/// Canonical order used for listings: d first, 1^d last.
struct CanonicalOrder {
  bool operator()(const SplittingType& a, const SplittingType& b) const { return b < a; }
};

/// All partitions of d in canonical order.
std::vector<SplittingType> partitions(int d);

/// A multiset of splitting types, kept as (type, multiplicity) in canonical order.
class TypeMultiset {
 public:
  TypeMultiset() = default;
  explicit TypeMultiset(std::vector<std::pair<SplittingType, int>> entries);
  static TypeMultiset from_types(const std::vector<SplittingType>& types);
  /// "{6 (×3), 3²}", "∅", or the ASCII forms "{6 (x3), 3^2}" and "{}".
  static TypeMultiset parse(std::string_view text);

  const std::vector<std::pair<SplittingType, int>>& entries() const { return entries_; }
  int size() const;
  bool empty() const { return entries_.empty(); }
  int count(const SplittingType& t) const;
  bool contains(const SplittingType& t) const { return count(t) > 0; }

  std::string pretty() const;
  std::string ascii() const;

  friend bool operator==(const TypeMultiset&, const TypeMultiset&) = default;
  friend auto operator<=>(const TypeMultiset&, const TypeMultiset&) = default;

 private:
  std::vector<std::pair<SplittingType, int>> entries_;
};

/// s_1, s_2, ...: s_n is the multiset of types of the degree-n places.
using SplittingSequence = std::vector<TypeMultiset>;

std::string pretty(const SplittingSequence& seq);
std::string ascii(const SplittingSequence& seq);

/// Unicode superscript digits for an exponent.
std::string superscript(int n);

}  // namespace splitsieve
