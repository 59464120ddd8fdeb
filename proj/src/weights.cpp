#include "kspos/weights.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "kspos/error.hpp"

namespace kspos {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_rank: return "invalid-rank";
    case Errc::invalid_input: return "invalid-input";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::degenerate_tuple: return "degenerate-tuple";
    case Errc::generator_failure: return "generator-failure";
    case Errc::precondition: return "precondition";
    case Errc::malformed_expression: return "malformed-expression";
  }
  return "unknown";
}

Weight::Weight(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(Errc::invalid_rank, "weight must have length >= 1");
}

Weight Weight::zero(int rank) {
  if (rank < 1) throw Error(Errc::invalid_rank, "rank must be >= 1");
  return Weight(std::vector<int>(static_cast<std::size_t>(rank), 0));
}

bool Weight::is_dominant() const noexcept {
  return std::is_sorted(entries_.begin(), entries_.end(), std::greater<>{});
}

long long Weight::sum() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), 0LL);
}

Weight& Weight::operator+=(const Weight& other) {
  if (other.rank() != rank()) throw Error(Errc::dimension_mismatch, "weight length mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Weight& Weight::operator-=(const Weight& other) {
  if (other.rank() != rank()) throw Error(Errc::dimension_mismatch, "weight length mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Weight operator-(Weight a) {
  for (auto& x : a.entries_) x = -x;
  return a;
}

namespace {

std::string join(const std::vector<int>& xs) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << ')';
  return os.str();
}

}  // namespace

std::string to_string(const Weight& w) { return join(w.entries()); }
std::string to_string(const FlagType& s) { return join(s.cuts()); }

FlagType::FlagType(std::vector<int> cuts) : cuts_(std::move(cuts)) {
  if (cuts_.size() < 2) throw Error(Errc::invalid_input, "flag type needs at least s_0 and s_m");
  if (cuts_.front() != 0) throw Error(Errc::invalid_input, "flag type must start at 0");
  for (std::size_t j = 1; j < cuts_.size(); ++j)
    if (cuts_[j] <= cuts_[j - 1])
      throw Error(Errc::invalid_input, "flag type must be strictly increasing: " + join(cuts_));
}

FlagType FlagType::complete(int rank) {
  if (rank < 1) throw Error(Errc::invalid_rank, "rank must be >= 1");
  std::vector<int> cuts(static_cast<std::size_t>(rank) + 1);
  std::iota(cuts.begin(), cuts.end(), 0);
  return FlagType(std::move(cuts));
}

FlagType FlagType::projective(int rank) { return grassmannian(rank, 1); }

FlagType FlagType::grassmannian(int rank, int d) {
  if (d < 1 || d >= rank) throw Error(Errc::invalid_input, "need 1 <= d < r");
  return FlagType({0, d, rank});
}

int FlagType::block_of(int i) const {
  if (i < 0 || i >= rank()) throw Error(Errc::invalid_input, "position out of range");
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), i);
  return static_cast<int>(it - cuts_.begin());
}

std::vector<FlagType> all_flag_types(int rank) {
  if (rank < 1) throw Error(Errc::invalid_rank, "rank must be >= 1");
  std::vector<FlagType> out;
  // Each of the r-1 interior cut points is either present or absent.
  const unsigned count = 1u << (rank - 1);
  std::vector<std::vector<int>> all;
  for (unsigned mask = 0; mask < count; ++mask) {
    std::vector<int> cuts{0};
    for (int c = 1; c < rank; ++c)
      if (mask & (1u << (c - 1))) cuts.push_back(c);
    cuts.push_back(rank);
    all.push_back(std::move(cuts));
  }
  std::sort(all.begin(), all.end());
  for (auto& c : all) out.emplace_back(std::move(c));
  return out;
}

BlockWeight::BlockWeight(std::vector<int> entries, FlagType flag)
    : entries_(std::move(entries)), flag_(std::move(flag)) {
  if (static_cast<int>(entries_.size()) != flag_.blocks())
    throw Error(Errc::dimension_mismatch, "block weight length must equal the number of blocks");
}

ShiftedSequence shift_by_half_canonical(const Weight& a) {
  const int r = a.rank();
  ShiftedSequence out;
  out.doubled_entries.resize(static_cast<std::size_t>(r));
  for (int i = 1; i <= r; ++i) out.doubled_entries[i - 1] = 2 * a[i - 1] - (2 * i - r - 1);
  return out;
}

Weight canonical_weight_complete(int rank) {
  if (rank < 1) throw Error(Errc::invalid_rank, "rank must be >= 1");
  std::vector<int> c(static_cast<std::size_t>(rank));
  for (int i = 1; i <= rank; ++i) c[i - 1] = 2 * i - rank - 1;
  return Weight(std::move(c));
}

BlockWeight canonical_weight_flag(const FlagType& s) {
  std::vector<int> c(static_cast<std::size_t>(s.blocks()));
  for (int j = 1; j <= s.blocks(); ++j) c[j - 1] = s.cut(j - 1) + s.cut(j) - s.rank();
  return BlockWeight(std::move(c), s);
}

Weight expand_block_weight(const BlockWeight& a_s) {
  const FlagType& s = a_s.flag();
  std::vector<int> a;
  a.reserve(static_cast<std::size_t>(s.rank()));
  for (int j = 1; j <= s.blocks(); ++j) a.insert(a.end(), s.block_size(j), a_s[j - 1]);
  return Weight(std::move(a));
}

int flag_dimension(const FlagType& s) {
  int n = 0;
  for (int j = 1; j <= s.blocks(); ++j)
    for (int k = j + 1; k <= s.blocks(); ++k) n += s.block_size(j) * s.block_size(k);
  return n;
}

SortResult sort_desc_count_inversions(std::span<const int> x) {
  if (x.empty()) throw Error(Errc::invalid_input, "empty sequence");
  SortResult out;
  // r is small (<= ~10 in practice); the quadratic count is the definition.
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[i] < x[j]) ++out.inversions;
      if (x[i] == x[j]) out.has_ties = true;
    }
  out.sorted.assign(x.begin(), x.end());
  std::sort(out.sorted.begin(), out.sorted.end(), std::greater<>{});
  return out;
}

}  // namespace kspos
