#include "buchstab/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace buchstab {

ComponentClass::ComponentClass(std::string name, std::function<Natural(unsigned)> weight)
    : name_(std::move(name)), weight_(std::move(weight)) {}

ComponentClass ComponentClass::permutations() {
  ComponentClass cls("permutations", [](unsigned k) { return factorial(k - 1); });
  cls.permutations_ = true;
  return cls;
}

ComponentClass ComponentClass::derangements() {
  return ComponentClass("derangements",
                        [](unsigned k) { return k == 1 ? Natural(0) : factorial(k - 1); });
}

std::uint64_t estimate_table_bytes(unsigned max_size) {
  constexpr double kCellOverhead = 2.0 * sizeof(mpz_t);
  double total = 0.0;
  for (unsigned n = 1; n <= max_size; ++n) {
    const double value_bytes = std::lgamma(n + 1.0) / std::log(2.0) / 8.0 + 8.0;
    const double nonzero = n / 2 + 1;
    total += 2.0 * nonzero * value_bytes + (n + 2) * kCellOverhead;
    if (total > 1.8e19) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(total);
}

CountTable::CountTable(ComponentClass cls, unsigned max_size)
    : class_(std::move(cls)),
      max_size_(max_size),
      cells_(max_size + 1),
      suffix_(max_size + 1) {
  for (unsigned n = 1; n <= max_size; ++n) {
    cells_[n].resize(n + 1);
    suffix_[n].resize(n + 2);
  }
}

void CountTable::fill_suffix(unsigned n) {
  auto& suf = suffix_[n];
  const auto& row = cells_[n];
  suf[n + 1] = 0;
  for (unsigned k = n; k >= 1; --k) suf[k] = suf[k + 1] + row[k];
}

const Natural& CountTable::count(unsigned n, unsigned k) const {
  if (n < 1 || n > max_size_ || k < 1 || k > n) {
    throw RangeError("s_{k,n} requested outside 1 <= k <= n <= " + std::to_string(max_size_));
  }
  return cells_[n][k];
}

const Natural& CountTable::suffix(unsigned n, unsigned k) const {
  if (n < 1 || n > max_size_ || k < 1 || k > n) {
    throw RangeError("suffix sum requested outside 1 <= k <= n <= " +
                     std::to_string(max_size_));
  }
  return suffix_[n][k];
}

std::vector<Natural> CountTable::row(unsigned n) const {
  if (n < 1 || n > max_size_) throw RangeError("row " + std::to_string(n) + " not in table");
  return {cells_[n].begin() + 1, cells_[n].end()};
}

CountTable CountTable::from_rows(ComponentClass cls, std::vector<std::vector<Natural>> rows) {
  const auto size = static_cast<unsigned>(rows.size());
  CountTable table(std::move(cls), size);
  for (unsigned n = 1; n <= size; ++n) {
    auto& row = rows[n - 1];
    if (row.size() != n) {
      throw std::invalid_argument("row " + std::to_string(n) + " has " +
                                  std::to_string(row.size()) + " cells");
    }
    std::move(row.begin(), row.end(), table.cells_[n].begin() + 1);
    table.fill_suffix(n);
  }
  return table;
}

namespace {

// Multiplies acc by lo * (lo+1) * ... * hi, batching factors into machine words.
void multiply_range(Natural& acc, unsigned long lo, unsigned long hi) {
  unsigned long batch = 1;
  for (unsigned long f = lo; f <= hi; ++f) {
    unsigned long next = 0;
    if (__builtin_mul_overflow(batch, f, &next)) {
      mpz_mul_ui(acc.get_mpz_t(), acc.get_mpz_t(), batch);
      batch = f;
    } else {
      batch = next;
    }
  }
  mpz_mul_ui(acc.get_mpz_t(), acc.get_mpz_t(), batch);
}

}  // namespace

CountTable build_table(const ComponentClass& cls, unsigned max_size, std::uint64_t memory_cap) {
  if (max_size < 1) throw std::invalid_argument("table size must be at least 1");
  const std::uint64_t estimate = estimate_table_bytes(max_size);
  if (estimate > memory_cap) {
    throw ResourceError("count table for N=" + std::to_string(max_size) + " needs about " +
                        std::to_string(estimate >> 20) + " MiB, cap is " +
                        std::to_string(memory_cap >> 20) + " MiB");
  }

  CountTable table(cls, max_size);
  std::vector<Natural> weights(max_size + 1);
  for (unsigned k = 1; k <= max_size; ++k) weights[k] = cls.weight(k);

  Natural coef;
  Natural term;
  Natural binom;
  for (unsigned n = 1; n <= max_size; ++n) {
    auto& row = table.cells_[n];
    for (unsigned k = 1; k <= n / 2; ++k) {
      // coef walks n!/(i! (k!)^i (n-ki)!) * c_k^i over i; for permutations
      // c_k/k! = 1/k and this is n!/(k^i i! (n-ki)!).
      Natural cell = 0;
      coef = 1;
      for (unsigned i = 1; i * k <= n; ++i) {
        const unsigned rest = n - i * k;
        if (cls.is_permutations()) {
          multiply_range(coef, rest + 1, rest + k);
          mpz_divexact_ui(coef.get_mpz_t(), coef.get_mpz_t(), static_cast<unsigned long>(k) * i);
        } else {
          mpz_bin_uiui(binom.get_mpz_t(), rest + k, k);
          coef *= binom;
          coef *= weights[k];
          mpz_divexact_ui(coef.get_mpz_t(), coef.get_mpz_t(), i);
        }
        if (rest == 0) {
          cell += coef;
        } else if (k + 1 <= rest) {
          mpz_mul(term.get_mpz_t(), coef.get_mpz_t(), table.suffix_[rest][k + 1].get_mpz_t());
          cell += term;
        }
      }
      row[k] = std::move(cell);
    }
    row[n] = weights[n];
    table.fill_suffix(n);
  }
  return table;
}

namespace {

void require_probability_row(const CountTable& table, unsigned n) {
  if (!table.component_class().is_permutations()) {
    throw DomainError("probability queries are defined only for permutations, not '" +
                      table.component_class().name() + "'");
  }
  if (n < 1 || n > table.max_size()) {
    throw RangeError("n=" + std::to_string(n) + " outside table range 1.." +
                     std::to_string(table.max_size()));
  }
}

}  // namespace

SmallestDistribution distribution(const CountTable& table, unsigned n) {
  require_probability_row(table, n);
  const Natural total = factorial(n);
  SmallestDistribution dist;
  dist.n = n;
  dist.probs.reserve(n);
  for (unsigned k = 1; k <= n; ++k) {
    Rational p(table.count(n, k), total);
    p.canonicalize();
    dist.probs.push_back(std::move(p));
  }
  return dist;
}

Rational tail_probability(const CountTable& table, unsigned n, unsigned k) {
  require_probability_row(table, n);
  if (k < 1 || k > n) {
    throw RangeError("k=" + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  Rational p(table.suffix(n, k), factorial(n));
  p.canonicalize();
  return p;
}

Rational moment(const CountTable& table, unsigned n, unsigned order) {
  require_probability_row(table, n);
  if (order < 1) throw RangeError("moment order must be positive");
  Natural sum = 0;
  Natural power;
  for (unsigned k = 1; k <= n; ++k) {
    const Natural& cell = table.count(n, k);
    if (cell == 0) continue;
    mpz_ui_pow_ui(power.get_mpz_t(), k, order);
    sum += power * cell;
  }
  Rational m(sum, factorial(n));
  m.canonicalize();
  return m;
}

MomentReport variance(const CountTable& table, unsigned n, int digits) {
  require_probability_row(table, n);
  const Natural total = factorial(n);
  Natural first = 0;
  Natural second = 0;
  for (unsigned k = 1; k <= n; ++k) {
    const Natural& cell = table.count(n, k);
    if (cell == 0) continue;
    first += cell * k;
    second += cell * (static_cast<unsigned long>(k) * k);
  }

  MomentReport report;
  report.n = n;
  report.mean = Rational(first, total);
  report.mean.canonicalize();
  report.second_moment = Rational(second, total);
  report.second_moment.canonicalize();
  report.variance = Rational(total * second - first * first, total * total);
  report.variance.canonicalize();
  report.variance_over_n = rational_to_real(report.variance / n, digits);
  return report;
}

std::vector<std::pair<unsigned, Real>> variance_series(const CountTable& table, int digits) {
  std::vector<std::pair<unsigned, Real>> series;
  series.reserve(table.max_size());
  for (unsigned n = 1; n <= table.max_size(); ++n) {
    series.emplace_back(n, variance(table, n, digits).variance_over_n);
  }
  return series;
}

std::vector<Natural> brute_force_counts(unsigned n) {
  if (n < 1 || n > 8) {
    throw RangeError("brute force enumeration supports 1 <= n <= 8, got " + std::to_string(n));
  }
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<unsigned long> tally(n + 1, 0);
  do {
    unsigned visited = 0;
    unsigned shortest = n;
    for (unsigned start = 0; start < n; ++start) {
      if (visited & (1u << start)) continue;
      unsigned length = 0;
      for (unsigned at = start; !(visited & (1u << at)); at = perm[at]) {
        visited |= 1u << at;
        ++length;
      }
      shortest = std::min(shortest, length);
    }
    ++tally[shortest];
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Natural> row;
  row.reserve(n);
  for (unsigned k = 1; k <= n; ++k) row.emplace_back(tally[k]);
  return row;
}

}  // namespace buchstab
