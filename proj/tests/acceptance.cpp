// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <sys/resource.h>

#include "buchstab/enumeration.hpp"
#include "buchstab/omega.hpp"
#include "buchstab/omega_k.hpp"
#include "buchstab/store.hpp"
#include "support.hpp"

using namespace buchstab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c);
  return buffer;
}

double peak_rss_mb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss / 1024.0;
}

Real at(double x, int digits = 30) {
  Real out(digits);
  mpfr_set_d(out.get(), x, MPFR_RNDN);
  return out;
}

const OmegaLedger& omega_ledger() {
  static const OmegaLedger ledger = OmegaLedger::build(QuadratureConfig{});
  return ledger;
}

const OmegaKLedger& omega_k_ledger(bool half) {
  static const OmegaKLedger one = OmegaKLedger::build("1", 8192);
  static const OmegaKLedger halved = OmegaKLedger::build("0.5", 8192);
  return half ? halved : one;
}

const CountTable& big_table() {
  static const CountTable table = build_table(ComponentClass::permutations(), 1000);
  return table;
}

Outcome table_one() {
  const CountTable table = build_table(ComponentClass::permutations(), 10);
  int matched = 0;
  for (unsigned n = 1; n <= 10; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      matched += table.count(n, k) == testing::table_one()[n - 1][k - 1];
    }
  }
  return {matched == 55, std::to_string(matched) + "/55 cells equal"};
}

Outcome brute_force() {
  const CountTable table = build_table(ComponentClass::permutations(), 8);
  bool ok = true;
  for (unsigned n = 1; n <= 8; ++n) ok = ok && table.row(n) == brute_force_counts(n);
  return {ok, "rows 1..8 vs enumeration of all permutations"};
}

Outcome structure() {
  const CountTable table = build_table(ComponentClass::permutations(), 300);
  int bad = 0;
  for (unsigned n = 1; n <= 300; ++n) {
    Natural total = 0;
    for (unsigned k = 1; k <= n; ++k) total += table.count(n, k);
    bad += total != factorial(n);
    bad += table.count(n, n) != factorial(n - 1);
    for (unsigned k = n / 2 + 1; k + 1 <= n; ++k) bad += table.count(n, k) != 0;
  }
  return {bad == 0, std::to_string(bad) + " violations for n <= 300"};
}

Outcome variance_point() {
  const double budget_mb = 2048;
  const CountTable& table = big_table();
  const MomentReport report = variance(table, 1000);
  const double value = report.variance_over_n.to_double();
  const double rss = peak_rss_mb();
  const bool ok = std::fabs(value - 1.3004) <= 1e-4 && rss <= budget_mb;
  return {ok, fmt("Var(X_1000)/1000 = %.10f (target 1.3004 +- 1e-4), peak RSS %.0f MB", value,
                  rss)};
}

Outcome variance_constant() {
  const MomentConstant c = moment_constant(omega_ledger(), 2);
  const double value = c.value.to_double();
  const bool ok = std::fabs(value - 1.3070) <= 1e-3 && c.first_block == Rational(3, 4);
  return {ok, fmt("C = %.9f, budget %.1e, ", value, c.error_budget.to_double()) +
                  "first block " + rational_to_string(c.first_block)};
}

Outcome closed_forms() {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> pick(1.0, 3.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Real x = at(pick(rng));
    const Real want = x < Real(2, 30) ? Real(1, 30) / x : (ln_real(x - 1L) + 1L) / x;
    worst = std::max(worst, testing::gap(eval_omega(omega_ledger(), x), want));
  }
  double band = 0;
  for (int x = 5; x <= 20; ++x) {
    band = std::max(band, std::fabs(eval_omega(omega_ledger(), Real(x, 30)).to_double() -
                                          0.56145948356688517));
  }
  return {worst < 1e-12 && band < 1e-4,
          fmt("closed-form gap %.1e, max |omega - e^-gamma| on 5..20 = %.1e", worst, band)};
}

Outcome delay_residuals() {
  const Real h = Real::parse("1e-6", 30);
  double worst = 0;
  for (const char* point : {"2.25", "3.5", "5.1", "10.7"}) {
    const Real x = Real::parse(point, 30);
    auto g = [&](const Real& t) { return t * eval_omega(omega_ledger(), t); };
    const Real slope = (g(x + h) - g(x - h)) / (h * 2L);
    worst = std::max(worst, testing::gap(slope, eval_omega(omega_ledger(), x - 1L)));
  }
  for (bool half : {false, true}) {
    const auto& ledger = omega_k_ledger(half);
    for (const char* point : {"3.5", "5.25", "9.1"}) {
      const Real x = Real::parse(point, 30);
      const Real slope = (eval_omega_k(ledger, x + h) - eval_omega_k(ledger, x - h)) / (h * 2L);
      const Real law = ledger.k() * eval_omega_k(ledger, x - 1L) / (x - 1L);
      worst = std::max(worst, testing::gap(slope, law));
    }
  }
  return {worst < 1e-6, fmt("max residual %.1e", worst)};
}

Outcome table_two() {
  int matched = 0;
  std::string misses;
  for (const auto& row : testing::table_two()) {
    for (bool half : {false, true}) {
      const double want = half ? row.k_half : row.k_one;
      const double got = eval_omega_k(omega_k_ledger(half), Real(row.x, 30)).to_double();
      const double rel = testing::rel_gap(got, want);
      if (rel < 2e-3) {
        ++matched;
      } else {
        misses += fmt("; K=%g x=%g: %.4f", half ? 0.5 : 1.0, row.x, got);
        misses += fmt(" vs reference %.4f (rel %.1e)", want, rel);
      }
    }
  }
  double oracle_gap = 0;
  for (bool half : {false, true}) {
    for (double x : {2.5, 3.0, 4.5, 7.0, 10.0, 20.0}) {
      const double got = eval_omega_k(omega_k_ledger(half), at(x)).to_double();
      const double oracle = oracle_quadrature(half ? 0.5 : 1.0, x, 1e-11);
      oracle_gap = std::max(oracle_gap, std::fabs(got - oracle));
    }
  }
  const bool ok = matched == 40 && oracle_gap < 1e-8;
  return {ok, std::to_string(matched) + "/40 reference values within 2e-3, oracle gap " +
                  fmt("%.1e", oracle_gap) + misses};
}

Outcome proportions() {
  const double one = proportion_large_smallest(omega_k_ledger(false), Real(8192, 30)).to_double();
  const double half = proportion_large_smallest(omega_k_ledger(true), Real(8192, 30)).to_double();
  const bool ok = testing::rel_gap(one, 0.000218) <= 0.05 && testing::rel_gap(half, 0.0131) <= 0.05;
  return {ok, fmt("1/Omega_1(8192) = %.6g, 1/Omega_1/2(8192) = %.6g", one, half)};
}

Outcome tail_diagnostic() {
  const CountTable& table = big_table();
  double worst = 0;
  std::string detail;
  for (unsigned k : {10u, 20u, 40u}) {
    const double p = rational_to_real(tail_probability(table, 1000, k), 30).to_double();
    const double approx =
        eval_omega(omega_ledger(), Real(Rational(1000, k), 30)).to_double() / k;
    const double rel = std::fabs(p - approx) / p;
    worst = std::max(worst, rel);
    detail += fmt("k=%g rel %.3f; ", k, rel);
  }
  return {worst <= 0.10, detail + fmt("worst %.3f <= 0.10", worst)};
}

Outcome determinism() {
  const fs::path dir = testing::scratch_dir("acceptance");
  const std::string cli = BUCHSTAB_CLI;
  const std::string cache = " --cache-dir " + dir.string() + " ";
  const std::vector<std::string> commands = {
      "counts --n 15", "dist --n 12", "tail --n 30 --at-least 4", "variance-series --n 25",
      "omega --x 12.5", "--max-interval 40 constant", "--k 0.5 omega-k --x 300",
      "--k 1 omega-k-table", "cache list"};
  int stable = 0;
  for (const auto& command : commands) {
    const auto first = testing::run(cli + cache + command);
    const auto second = testing::run(cli + cache + command);
    const auto fresh = testing::run(cli + " " + command);
    stable += first.exit_code == 0 && first.out == second.out &&
              (command == "cache list" || first.out == fresh.out);
  }

  bool round_trips = true;
  {
    const StoredArtifact table = make_artifact(build_table(ComponentClass::permutations(), 40));
    save_artifact(table, dir / "t.bsa");
    const StoredArtifact back = load_artifact(dir / "t.bsa");
    round_trips = round_trips && serialize(back) == serialize(table);
    for (unsigned n = 1; n <= 40; ++n) {
      round_trips = round_trips && std::get<CountTable>(back.payload).row(n) ==
                                       std::get<CountTable>(table.payload).row(n);
    }
  }
  {
    save_artifact(make_artifact(omega_ledger()), dir / "o.bsa");
    const StoredArtifact back = load_artifact(dir / "o.bsa");
    const auto& loaded = std::get<OmegaLedger>(back.payload);
    round_trips = round_trips && serialize(back) == serialize(make_artifact(omega_ledger()));
    for (double x : {1.1, 2.5, 3.0, 17.77, 150.25}) {
      const Real before = eval_omega(omega_ledger(), at(x));
      round_trips = round_trips && before.identical(eval_omega(loaded, at(x))) &&
                    before.to_string(30) == eval_omega(loaded, at(x)).to_string(30);
    }
  }
  {
    const OmegaKLedger ledger = OmegaKLedger::build("0.5", 300);
    save_artifact(make_artifact(ledger), dir / "k.bsa");
    const StoredArtifact back = load_artifact(dir / "k.bsa");
    const auto& loaded = std::get<OmegaKLedger>(back.payload);
    round_trips = round_trips && serialize(back) == serialize(make_artifact(ledger));
    for (double x : {1.5, 2.5, 42.0, 299.9}) {
      round_trips =
          round_trips && eval_omega_k(ledger, at(x)).identical(eval_omega_k(loaded, at(x)));
    }
  }
  fs::remove_all(dir);
  const bool ok = stable == static_cast<int>(commands.size()) && round_trips;
  return {ok, std::to_string(stable) + "/" + std::to_string(commands.size()) +
                  " commands byte-stable; round trips " + (round_trips ? "bit-exact" : "DIFFER")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Counts for sizes 1..10", 1, table_one},
      {2, "Oracle equivalence (n <= 8)", 30, brute_force},
      {3, "Structural invariants (n <= 300)", 60, structure},
      {4, "Variance point n = 1000", 1800, variance_point},
      {5, "Constant C", 60, variance_constant},
      {6, "omega closed forms and e^-gamma band", 60, closed_forms},
      {7, "Delay-equation residuals", 60, delay_residuals},
      {8, "Omega_K table and oracle", 120, table_two},
      {9, "Proportions at x = 8192", 60, proportions},
      {10, "Asymptotic tail diagnostic", 60, tail_diagnostic},
      {11, "Determinism and persistence", 300, determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.limit_seconds) {
      outcome.pass = false;
      outcome.detail += fmt(" (over the %.0f s limit)", criterion.limit_seconds);
    }
    failures += !outcome.pass;
    std::printf("%s %2d %-38s %7.2f s  %s\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                criterion.name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
