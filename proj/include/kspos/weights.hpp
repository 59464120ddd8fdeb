#pragma once

// Integer weights of GL(r), flag types 0 = s_0 < ... < s_m = r, and the
// canonical-weight / dimension formulas for flag manifolds.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace kspos {

/// Integer sequence of length r >= 1. Dominance (weakly decreasing) is a
/// derived predicate; Bott's algorithm consumes arbitrary weights.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<int> entries);
  Weight(std::initializer_list<int> entries) : Weight(std::vector<int>(entries)) {}

  static Weight zero(int rank);

  int rank() const noexcept { return static_cast<int>(entries_.size()); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<int>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool is_dominant() const noexcept;
  long long sum() const noexcept;

  Weight& operator+=(const Weight& other);
  Weight& operator-=(const Weight& other);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator-(Weight a);

  friend bool operator==(const Weight&, const Weight&) = default;
  friend auto operator<=>(const Weight&, const Weight&) = default;

 private:
  std::vector<int> entries_;
};

std::string to_string(const Weight& w);

/// Cuts 0 = s_0 < s_1 < ... < s_m = r with m >= 1.
class FlagType {
 public:
  explicit FlagType(std::vector<int> cuts);

  static FlagType complete(int rank);
  static FlagType projective(int rank);           // (0, 1, r)
  static FlagType grassmannian(int rank, int d);  // (0, d, r)

  int rank() const noexcept { return cuts_.back(); }
  int blocks() const noexcept { return static_cast<int>(cuts_.size()) - 1; }
  int cut(int j) const { return cuts_.at(static_cast<std::size_t>(j)); }
  int block_size(int j) const { return cut(j) - cut(j - 1); }
  const std::vector<int>& cuts() const noexcept { return cuts_; }

  /// 1-based block index of the 0-based position i.
  int block_of(int i) const;
  bool is_complete() const noexcept { return blocks() == rank(); }

  friend bool operator==(const FlagType&, const FlagType&) = default;

 private:
  std::vector<int> cuts_;
};

std::string to_string(const FlagType& s);

/// Every flag type of the given rank, in lexicographic order of cuts.
std::vector<FlagType> all_flag_types(int rank);

/// One integer per block of a flag type.
class BlockWeight {
 public:
  BlockWeight(std::vector<int> entries, FlagType flag);

  const std::vector<int>& entries() const noexcept { return entries_; }
  const FlagType& flag() const noexcept { return flag_; }
  int operator[](std::size_t j) const { return entries_[j]; }

  friend bool operator==(const BlockWeight&, const BlockWeight&) = default;

 private:
  std::vector<int> entries_;
  FlagType flag_;
};

/// 2(a - c_w/2) = 2a_i - (2i - r - 1), exact over the integers.
struct ShiftedSequence {
  std::vector<int> doubled_entries;
};

ShiftedSequence shift_by_half_canonical(const Weight& a);

/// (1-r, 3-r, ..., r-1).
Weight canonical_weight_complete(int rank);

/// Block j entry s_{j-1} + s_j - r.
BlockWeight canonical_weight_flag(const FlagType& s);

Weight expand_block_weight(const BlockWeight& a_s);

/// N_s = sum_{j<k} (s_j - s_{j-1})(s_k - s_{k-1}).
int flag_dimension(const FlagType& s);

struct SortResult {
  std::vector<int> sorted;  // weakly decreasing
  int inversions = 0;       // pairs i<j with x_i < x_j
  bool has_ties = false;
};

SortResult sort_desc_count_inversions(std::span<const int> x);

}  // namespace kspos
