#pragma once

// Exact counts s_{k,n} of size-n objects whose smallest component has size k,
// and the exact distribution, moments and variance of that smallest size.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "buchstab/numeric.hpp"

namespace buchstab {

// A labelled class built from components; weight(k) is the number of
// distinct components on k labelled atoms (c_k).
class ComponentClass {
 public:
  ComponentClass(std::string name, std::function<Natural(unsigned)> weight);

  // c_k = (k-1)!; the only class with probability semantics.
  static ComponentClass permutations();
  // c_1 = 0, c_k = (k-1)! for k >= 2.
  static ComponentClass derangements();

  const std::string& name() const { return name_; }
  Natural weight(unsigned k) const { return weight_(k); }
  bool is_permutations() const { return permutations_; }

 private:
  std::string name_;
  std::function<Natural(unsigned)> weight_;
  bool permutations_ = false;
};

// Default cap on the estimated table footprint (bytes).
inline constexpr std::uint64_t kDefaultTableMemoryCap = 2ull << 30;

// Estimated bytes held by a table of maximum size N (cells plus suffix sums).
std::uint64_t estimate_table_bytes(unsigned max_size);

class CountTable {
 public:
  const ComponentClass& component_class() const { return class_; }
  unsigned max_size() const { return max_size_; }

  // s_{k,n} for 1 <= k <= n <= N; RangeError otherwise.
  const Natural& count(unsigned n, unsigned k) const;
  // Sum_{j >= k} s_{j,n} for 1 <= k <= n <= N; RangeError otherwise.
  const Natural& suffix(unsigned n, unsigned k) const;
  // Row n as s_{1,n} ... s_{n,n}.
  std::vector<Natural> row(unsigned n) const;

  // Rebuilds a table from stored rows (row n has n cells) and recomputes
  // the suffix sums.
  static CountTable from_rows(ComponentClass cls, std::vector<std::vector<Natural>> rows);

 private:
  friend CountTable build_table(const ComponentClass&, unsigned, std::uint64_t);
  CountTable(ComponentClass cls, unsigned max_size);
  void fill_suffix(unsigned n);

  ComponentClass class_;
  unsigned max_size_;
  // cells_[n][k] and suffix_[n][k] for 1 <= k <= n; index 0 is padding.
  // suffix_[n] carries one extra zero at k = n + 1.
  std::vector<std::vector<Natural>> cells_;
  std::vector<std::vector<Natural>> suffix_;
};

// Triangular table for sizes 1..max_size. Throws std::invalid_argument for
// max_size == 0 and ResourceError when estimate_table_bytes exceeds the cap.
CountTable build_table(const ComponentClass& cls, unsigned max_size,
                       std::uint64_t memory_cap = kDefaultTableMemoryCap);

struct SmallestDistribution {
  unsigned n = 0;
  std::vector<Rational> probs;  // probs[k-1] = P{X_n = k}
};

struct MomentReport {
  unsigned n = 0;
  Rational mean;
  Rational second_moment;
  Rational variance;
  Real variance_over_n;
};

SmallestDistribution distribution(const CountTable& table, unsigned n);
Rational tail_probability(const CountTable& table, unsigned n, unsigned k);
Rational moment(const CountTable& table, unsigned n, unsigned order);
MomentReport variance(const CountTable& table, unsigned n,
                      int digits = PrecisionConfig{}.digits);
std::vector<std::pair<unsigned, Real>> variance_series(const CountTable& table,
                                                       int digits = PrecisionConfig{}.digits);

// Tallies the smallest cycle length over all n! permutations (n <= 8).
std::vector<Natural> brute_force_counts(unsigned n);

}  // namespace buchstab
