// buchstab: smallest-component statistics from the command line.
//
// Exit codes: 0 success, 2 usage or range error, 3 resource cap,
// 4 persistence error, 1 anything else.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "buchstab/enumeration.hpp"
#include "buchstab/omega.hpp"
#include "buchstab/omega_k.hpp"
#include "buchstab/store.hpp"

namespace {

using namespace buchstab;

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitPersistence = 4;

struct GlobalOptions {
  int precision = 30;
  unsigned taylor_degree = 40;
  int grid_log2 = 12;
  unsigned max_interval = 200;
  std::string k_text = "1";
  std::string format = "csv";
  std::string out;
  std::string cache_dir;
  int digits = 6;
  unsigned long memory_cap_mb = kDefaultTableMemoryCap >> 20;
};

ComponentClass class_named(const std::string& name) {
  if (name == "permutations") return ComponentClass::permutations();
  if (name == "derangements") return ComponentClass::derangements();
  throw std::invalid_argument("unknown class '" + name + "'");
}

class Session {
 public:
  explicit Session(const GlobalOptions& opts) : opts_(opts) {
    if (!opts_.cache_dir.empty()) cache_.emplace(opts_.cache_dir);
  }

  CountTable table(const std::string& class_name, unsigned size) {
    const ComponentClass cls = class_named(class_name);
    const std::uint64_t cap = static_cast<std::uint64_t>(opts_.memory_cap_mb) << 20;
    if (cache_) return cache_->count_table(cls, size, cap);
    return build_table(cls, size, cap);
  }

  QuadratureConfig quadrature() const {
    QuadratureConfig cfg;
    cfg.grid_log2 = opts_.grid_log2;
    cfg.max_interval = opts_.max_interval;
    cfg.taylor_degree = opts_.taylor_degree;
    cfg.precision = opts_.precision;
    cfg.validate();
    return cfg;
  }

  OmegaLedger omega_ledger() {
    const QuadratureConfig cfg = quadrature();
    if (cache_) return cache_->omega_ledger(cfg);
    return OmegaLedger::build(cfg);
  }

  OmegaKLedger omega_k_ledger(const Real& x_max) {
    if (cache_) {
      Real whole(opts_.precision);
      mpfr_floor(whole.get(), x_max.get());
      const unsigned top = std::max(2ul, mpfr_get_ui(whole.get(), MPFR_RNDN));
      return cache_->omega_k_ledger(opts_.k_text, top, opts_.taylor_degree, opts_.precision);
    }
    return OmegaKLedger::covering(opts_.k_text, x_max, opts_.taylor_degree, opts_.precision);
  }

  Real parse_x(const std::string& text) const { return Real::parse(text, opts_.precision); }

  std::string fmt(const Real& v) const { return v.to_string(opts_.digits); }

  void emit(const OutputTable& table) const {
    const std::string text = table.render(opts_.format);
    if (opts_.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(opts_.out, std::ios::binary | std::ios::trunc);
    if (!out) throw PersistenceError("cannot write " + opts_.out);
    out << text;
    if (!out) throw PersistenceError("short write to " + opts_.out);
  }

  ArtifactCache& cache() {
    if (!cache_) throw std::invalid_argument("--cache-dir is required for the cache command");
    return *cache_;
  }

 private:
  const GlobalOptions& opts_;
  std::optional<ArtifactCache> cache_;
};

int run(int argc, char** argv) {
  CLI::App app{"Smallest-component statistics: exact counts, Buchstab omega, Omega_K"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--precision", g.precision, "working precision in decimal digits")
      ->check(CLI::Range(10, 1000));
  app.add_option("--taylor-degree", g.taylor_degree, "Taylor degree J per block")
      ->check(CLI::Range(8u, 1000u));
  app.add_option("--grid-log2", g.grid_log2, "trapezoid step 2^-grid")->check(CLI::Range(1, 30));
  app.add_option("--max-interval", g.max_interval, "omega ledger covers [1, n*+1)")
      ->check(CLI::Range(5u, 1000000u));
  app.add_option("--k", g.k_text, "Omega_K parameter K (decimal)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "write output to this file instead of stdout");
  app.add_option("--cache-dir", g.cache_dir, "reuse artifacts stored in this directory");
  app.add_option("--digits", g.digits, "significant digits for real values")
      ->check(CLI::Range(1, 1000));
  app.add_option("--memory-cap-mb", g.memory_cap_mb, "count table memory cap (MiB)");

  unsigned size = 0;
  unsigned k_index = 0;
  unsigned order = 2;
  std::string class_name = "permutations";
  std::string x_text;
  std::vector<std::string> x_list;

  auto* counts = app.add_subcommand("counts", "triangular table of s_{k,n}");
  counts->add_option("-n,--n", size, "largest object size N")->required()->check(CLI::PositiveNumber);
  counts->add_option("--class", class_name, "permutations or derangements");

  auto* dist = app.add_subcommand("dist", "exact distribution of the smallest cycle");
  dist->add_option("-n,--n", size, "object size")->required()->check(CLI::PositiveNumber);

  auto* tail = app.add_subcommand("tail", "P{X_n >= k}");
  tail->add_option("-n,--n", size, "object size")->required()->check(CLI::PositiveNumber);
  tail->add_option("--at-least", k_index, "threshold k")->required()->check(CLI::PositiveNumber);

  auto* var = app.add_subcommand("variance-series", "Var(X_n) and Var(X_n)/n for n = 1..N");
  var->add_option("-n,--n", size, "largest object size N")->required()->check(CLI::PositiveNumber);

  auto* omega = app.add_subcommand("omega", "Buchstab omega(x)");
  omega->add_option("--x", x_text, "argument x >= 1")->required();

  auto* constant = app.add_subcommand("constant", "moment constant l * int omega(t)/t^l dt");
  constant->add_option("--moment", order, "moment order l (2 gives C)")->check(CLI::Range(2u, 64u));

  auto* omega_k = app.add_subcommand("omega-k", "Omega_K(x) and 1/Omega_K(x)");
  omega_k->add_option("--x", x_text, "argument x >= 1")->required();

  auto* omega_k_table_cmd = app.add_subcommand("omega-k-table", "Omega_K over a list of x");
  omega_k_table_cmd->add_option("--x", x_list, "x values (default: 1..10, 16, 32, ..., 8192)")
      ->delimiter(',');

  auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the artifact cache");
  cache_cmd->require_subcommand(1);
  auto* cache_list = cache_cmd->add_subcommand("list", "list cached artifacts");
  auto* cache_clear = cache_cmd->add_subcommand("clear", "remove cached artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Session s(g);

  if (*counts) {
    const CountTable table = s.table(class_name, size);
    OutputTable out;
    out.columns.push_back("n");
    for (unsigned k = 1; k <= size; ++k) out.columns.push_back("k" + std::to_string(k));
    for (unsigned n = 1; n <= size; ++n) {
      std::vector<std::string> row{std::to_string(n)};
      for (const auto& cell : table.row(n)) row.push_back(cell.get_str());
      out.rows.push_back(std::move(row));
    }
    s.emit(out);
  } else if (*dist) {
    const SmallestDistribution d = distribution(s.table("permutations", size), size);
    OutputTable out{{"k", "probability", "decimal"}, {}};
    for (unsigned k = 1; k <= size; ++k) {
      const Rational& p = d.probs[k - 1];
      out.rows.push_back({std::to_string(k), rational_to_string(p),
                          s.fmt(rational_to_real(p, g.precision))});
    }
    s.emit(out);
  } else if (*tail) {
    const Rational p = tail_probability(s.table("permutations", size), size, k_index);
    s.emit(OutputTable{{"n", "k", "probability", "decimal"},
                       {{std::to_string(size), std::to_string(k_index), rational_to_string(p),
                         s.fmt(rational_to_real(p, g.precision))}}});
  } else if (*var) {
    const CountTable table = s.table("permutations", size);
    OutputTable out{{"n", "variance", "variance_over_n"}, {}};
    for (unsigned n = 1; n <= size; ++n) {
      const MomentReport r = variance(table, n, g.precision);
      out.rows.push_back({std::to_string(n), rational_to_string(r.variance), s.fmt(r.variance_over_n)});
    }
    s.emit(out);
  } else if (*omega) {
    const Real x = s.parse_x(x_text);
    const OmegaLedger ledger = s.omega_ledger();
    s.emit(OutputTable{{"x", "omega"}, {{x_text, s.fmt(eval_omega(ledger, x))}}});
  } else if (*constant) {
    const OmegaLedger ledger = s.omega_ledger();
    const MomentConstant c = moment_constant(ledger, order);
    s.emit(OutputTable{{"moment", "value", "error_budget", "first_block"},
                       {{std::to_string(order), s.fmt(c.value), c.error_budget.to_string(2),
                         rational_to_string(c.first_block)}}});
  } else if (*omega_k) {
    const Real x = s.parse_x(x_text);
    const OmegaKLedger ledger = s.omega_k_ledger(x);
    const Real value = eval_omega_k(ledger, x);
    const Real proportion = Real(1, g.precision) / value;
    s.emit(OutputTable{{"K", "x", "omega_k", "proportion"},
                       {{g.k_text, x_text, s.fmt(value), s.fmt(proportion)}}});
  } else if (*omega_k_table_cmd) {
    if (x_list.empty()) {
      for (long x : reference_grid()) x_list.push_back(std::to_string(x));
    }
    std::vector<Real> xs;
    Real x_max(1, g.precision);
    for (const auto& text : x_list) {
      xs.push_back(s.parse_x(text));
      if (xs.back() > x_max) x_max = xs.back();
    }
    const OmegaKLedger ledger = s.omega_k_ledger(x_max);
    OutputTable out{{"x", "omega_k", "proportion"}, {}};
    const auto rows = omega_k_table(ledger, xs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.rows.push_back({x_list[i], s.fmt(rows[i].second),
                          s.fmt(Real(1, g.precision) / rows[i].second)});
    }
    s.emit(out);
  } else if (*cache_list) {
    OutputTable out{{"file", "kind", "params"}, {}};
    for (const auto& entry : s.cache().list()) {
      std::string params;
      for (const auto& [key, value] : entry.header.params) {
        if (!params.empty()) params += ';';
        params += key + "=" + value;
      }
      out.rows.push_back({entry.path.filename().string(), to_string(entry.header.kind), params});
    }
    s.emit(out);
  } else if (*cache_clear) {
    const std::size_t removed = s.cache().clear();
    s.emit(OutputTable{{"removed"}, {{std::to_string(removed)}}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const buchstab::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const buchstab::PersistenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPersistence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {  // RangeError, DomainError
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const buchstab::PrecisionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
