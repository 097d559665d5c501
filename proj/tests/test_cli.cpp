#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using testing::CliResult;

namespace {

CliResult cli(const std::string& args) { return testing::run(std::string(BUCHSTAB_CLI) + " " + args); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string last_cell(const std::string& csv, std::size_t column) {
  return parse_csv(csv).back().at(column);
}

}  // namespace

TEST_CASE("counts") {
  const CliResult ten = cli("counts --n 10");
  REQUIRE(ten.exit_code == 0);
  const auto rows = parse_csv(ten.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0].front() == "n");
  CHECK(rows[0].back() == "k10");
  const auto& table = testing::table_one();
  for (unsigned n = 1; n <= 10; ++n) {
    REQUIRE(rows[n].size() == n + 1);
    CHECK(rows[n][0] == std::to_string(n));
    for (unsigned k = 1; k <= n; ++k) CHECK(rows[n][k] == std::to_string(table[n - 1][k - 1]));
  }
  CHECK(cli("counts --n 1").out == "n,k1\n1,1\n");
  CHECK(cli("counts --n 1000000").exit_code == 3);
  CHECK(cli("--memory-cap-mb 1 counts --n 400").exit_code == 3);
  CHECK(cli("counts --n 0").exit_code == 2);
  CHECK(cli("counts --n 6 --class derangements").exit_code == 0);
}

TEST_CASE("distribution, tail and variance series") {
  CHECK(cli("dist --n 4").out ==
        "k,probability,decimal\n1,5/8,0.625000\n2,1/8,0.125000\n3,0,0.00000\n4,1/4,0.250000\n");
  CHECK(last_cell(cli("tail --n 3 --at-least 2").out, 2) == "1/3");
  CHECK(last_cell(cli("tail --n 4 --at-least 3").out, 2) == "1/4");
  CHECK(cli("tail --n 4 --at-least 5").exit_code == 2);
  const auto two = parse_csv(cli("variance-series --n 2").out).back();
  CHECK(two == std::vector<std::string>{"2", "1/4", "0.125000"});
  const auto three = parse_csv(cli("variance-series --n 3").out).back();
  CHECK(three == std::vector<std::string>{"3", "8/9", "0.296296"});
  CHECK(cli("dist --n 5 --class derangements").exit_code == 2);
}

TEST_CASE("omega and omega-k") {
  CHECK(cli("omega --x 1.5").out == "x,omega\n1.5,0.666667\n");
  CHECK(cli("omega --x 999").exit_code == 2);
  CHECK(cli("omega --x 0.5").exit_code == 2);
  CHECK(cli("omega --x abc").exit_code == 2);

  const double half = std::stod(last_cell(cli("--k 0.5 omega-k --x 16").out, 2));
  CHECK(testing::rel_gap(half, 3.3302) < 2e-3);
  // The K = 1, x = 8192 value equals 8192 omega(8192) (about 4599.48).
  const double big = std::stod(last_cell(cli("--k 1 omega-k --x 8192").out, 2));
  CHECK(std::fabs(big - 4599.48) < 0.01);
  CHECK(cli("--k 0 omega-k --x 3").exit_code == 2);
  CHECK(cli("--k -1 omega-k --x 3").exit_code == 2);
  CHECK(cli("omega-k --x 0.5").exit_code == 2);

  const auto table = parse_csv(cli("--k 1 omega-k-table --x 2,16,32").out);
  REQUIRE(table.size() == 4);
  CHECK(table[1][1] == "1.00000");
  CHECK(testing::rel_gap(std::stod(table[2][1]), 8.9874) < 2e-3);
  CHECK(testing::rel_gap(std::stod(table[3][1]), 17.9749) < 2e-3);
  // Without --x the reference grid is used.
  CHECK(parse_csv(cli("--k 0.5 omega-k-table").out).size() == 21);
}

TEST_CASE("constant") {
  const auto defaults = parse_csv(cli("constant").out);
  REQUIRE(defaults.size() == 2);
  CHECK(defaults[0] == std::vector<std::string>{"moment", "value", "error_budget", "first_block"});
  CHECK(std::fabs(std::stod(defaults[1][1]) - 1.3070) < 1e-3);
  CHECK(std::stod(defaults[1][2]) > 0);
  CHECK(defaults[1][3] == "3/4");

  const auto short_ledger = parse_csv(cli("--max-interval 50 constant").out);
  CHECK(std::fabs(std::stod(short_ledger[1][1]) - 1.3070) < 2e-3);

  const auto third = parse_csv(cli("constant --moment 3").out);
  CHECK(third[1][3] == "7/8");

  // Grid refinement: successive differences shrink like a second-order rule.
  std::vector<double> values;
  for (int grid : {6, 8, 10}) {
    const auto rows =
        parse_csv(cli("--digits 20 --max-interval 50 --grid-log2 " + std::to_string(grid) +
                      " constant").out);
    values.push_back(std::stod(rows[1][1]));
  }
  CHECK(std::fabs(values[1] - values[2]) <= std::fabs(values[0] - values[1]) / 3);
  CHECK(cli("--grid-log2 0 constant").exit_code == 2);
  CHECK(cli("--max-interval 4 constant").exit_code == 2);
  CHECK(cli("constant --moment 1").exit_code == 2);
}

TEST_CASE("usage errors") {
  CHECK(cli("").exit_code == 2);
  CHECK(cli("no-such-command").exit_code == 2);
  CHECK(cli("--format xml counts --n 3").exit_code == 2);
  CHECK(cli("counts").exit_code == 2);
}

TEST_CASE("csv and json agree") {
  for (const std::string command :
       {"counts --n 6", "dist --n 7", "variance-series --n 5", "omega --x 3.7",
        "--k 0.5 omega-k --x 20.5", "--k 1 omega-k-table --x 3,4,5", "tail --n 9 --at-least 2"}) {
    const auto csv = parse_csv(cli("--format csv " + command).out);
    const auto doc = nlohmann::json::parse(cli("--format json " + command).out);
    REQUIRE(doc.at("rows").size() + 1 == csv.size());
    CHECK(doc.at("columns").get<std::vector<std::string>>() == csv[0]);
    for (std::size_t i = 0; i < doc.at("rows").size(); ++i) {
      CHECK(doc.at("rows")[i].get<std::vector<std::string>>() == csv[i + 1]);
    }
  }
}

TEST_CASE("repeated runs are byte-identical, with and without the cache") {
  const fs::path dir = testing::scratch_dir("cli");
  const std::string cache = "--cache-dir " + dir.string() + " ";
  for (const std::string command :
       {"counts --n 12", "variance-series --n 20", "omega --x 7.25", "--k 0.5 omega-k --x 100",
        "--max-interval 30 constant", "--k 1 omega-k-table --x 5,6"}) {
    const CliResult plain = cli(command);
    const CliResult cold = cli(cache + command);
    const CliResult warm = cli(cache + command);
    CHECK(plain.exit_code == 0);
    CHECK(plain.out == cli(command).out);
    CHECK(cold.out == plain.out);
    CHECK(warm.out == plain.out);
  }

  const CliResult listing = cli(cache + "cache list");
  CHECK(listing.exit_code == 0);
  CHECK(listing.out.find("count-table") != std::string::npos);
  CHECK(listing.out.find("omega-k-ledger") != std::string::npos);

  // --out writes the same bytes to a file.
  const fs::path out = dir / "out.csv";
  CHECK(cli(cache + "--out " + out.string() + " counts --n 12").out.empty());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == cli("counts --n 12").out);

  // A corrupted artifact is a persistence error.
  for (const auto& item : fs::directory_iterator(dir)) {
    if (item.path().string().find("count-table_N-12") != std::string::npos) {
      std::ofstream(item.path(), std::ios::app) << "garbage\n";
    }
  }
  CHECK(cli(cache + "counts --n 12").exit_code == 4);
  CHECK(cli(cache + "cache clear").exit_code == 0);
  CHECK(cli(cache + "counts --n 12").exit_code == 0);

  // A cache directory that cannot be created.
  CHECK(cli("--cache-dir /dev/null/sub counts --n 3").exit_code == 4);
  fs::remove_all(dir);
}
