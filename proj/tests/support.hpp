#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>
#include <sys/wait.h>

#include "buchstab/numeric.hpp"

namespace testing {

// |a - b| computed in MPFR, returned as a double.
inline double gap(const buchstab::Real& a, const buchstab::Real& b) {
  return std::fabs((a - b).to_double());
}

inline double gap(const buchstab::Real& a, const std::string& literal) {
  return gap(a, buchstab::Real::parse(literal, a.digits() + 10));
}

inline double rel_gap(double value, double expected) {
  return std::fabs(value - expected) / std::fabs(expected);
}

// Reference smallest-cycle counts, row n has n entries.
inline const std::array<std::vector<long>, 10>& table_one() {
  static const std::array<std::vector<long>, 10> rows = {{
      {1},
      {1, 1},
      {4, 0, 2},
      {15, 3, 0, 6},
      {76, 20, 0, 0, 24},
      {455, 105, 40, 0, 0, 120},
      {3186, 714, 420, 0, 0, 0, 720},
      {25487, 5845, 2688, 1260, 0, 0, 0, 5040},
      {229384, 52632, 22400, 18144, 0, 0, 0, 0, 40320},
      {2293839, 525105, 223200, 151200, 72576, 0, 0, 0, 0, 362880},
  }};
  return rows;
}

struct TableTwoEntry {
  long x;
  double k_one;
  double k_half;
};

// Reference Omega_K values for K = 1 and K = 1/2.
inline const std::vector<TableTwoEntry>& table_two() {
  static const std::vector<TableTwoEntry> rows = {
      {1, 1, 1},
      {2, 1, 1},
      {3, 1.6941, 1.3470},
      {4, 2.2468, 1.5866},
      {5, 2.8085, 1.7971},
      {6, 3.3703, 1.9856},
      {7, 3.9320, 2.1579},
      {8, 4.4937, 2.3175},
      {9, 5.0554, 2.4669},
      {10, 5.6171, 2.6077},
      {16, 8.9874, 3.3302},
      {32, 17.9749, 4.7470},
      {64, 35.9498, 6.7397},
      {128, 71.8997, 9.5501},
      {256, 143.7995, 13.5191},
      {512, 287.5991, 19.1282},
      {1024, 575.1983, 27.0580},
      {2048, 1150.3966, 38.2705},
      {4096, 2300.7932, 54.1260},
      {8192, 4567.8834, 76.5480},
  };
  return rows;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs a shell command line, capturing stdout; stderr is discarded.
inline CliResult run(const std::string& command) {
  CliResult result;
  FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.out.append(buffer.data(), got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("buchstab-" + tag + "-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
