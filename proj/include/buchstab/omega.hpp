#pragma once

// The Buchstab function omega on [1, n*+1) as a chain of Taylor blocks, the
// trapezoid integration of omega(t)/t^l over each block, and the moment
// constants l * int_1^inf omega(t)/t^l dt (l = 2 gives the variance constant C).

#include <vector>

#include "buchstab/numeric.hpp"
#include "buchstab/taylor_block.hpp"

namespace buchstab {

using OmegaBlock = TaylorBlock;

struct QuadratureConfig {
  int grid_log2 = 12;             // trapezoid step 2^-grid_log2
  unsigned max_interval = 200;    // n*: blocks 1..n*
  unsigned taylor_degree = 40;    // J
  int precision = 30;             // decimal digits

  // std::invalid_argument unless grid_log2 >= 1, n* >= 5, J >= 8, p >= 10.
  void validate() const;
};

// Block 1: c_{1,i} = (2/3)(-1/3)^i, the expansion of 1/x about x = 1.5.
OmegaBlock seed_omega(unsigned degree, int digits);

// Block n+1 from block n by integrating (x omega(x))' = omega(x-1):
//   c_{n+1,0} = sum_i c_{n,i} (2(n+1) + (-1)^i/(i+1)) / (2n+3)
//   c_{n+1,i} = (c_{n,i-1}/i - c_{n+1,i-1}) / (2n+3)
OmegaBlock advance_omega(const OmegaBlock& block);

class OmegaLedger {
 public:
  static OmegaLedger build(const QuadratureConfig& config);
  // Adopts stored blocks (blocks[i].n == i + 1); std::invalid_argument if
  // they do not cover 1..config.max_interval.
  static OmegaLedger from_blocks(const QuadratureConfig& config, std::vector<OmegaBlock> blocks);

  const QuadratureConfig& config() const { return config_; }
  unsigned max_interval() const { return config_.max_interval; }
  const OmegaBlock& block(unsigned n) const;
  const std::vector<OmegaBlock>& blocks() const { return blocks_; }

  // Blocks whose last coefficient is too large for `target_digits` output.
  std::vector<unsigned> unconverged_blocks(int target_digits) const;

 private:
  OmegaLedger(QuadratureConfig config, std::vector<OmegaBlock> blocks)
      : config_(config), blocks_(std::move(blocks)) {}

  QuadratureConfig config_;
  std::vector<OmegaBlock> blocks_;
};

// omega(x) for 1 <= x < n*+1; an integer x = m is served by block m at z = -1.
Real eval_omega(const OmegaLedger& ledger, const Real& x);

// Trapezoid approximation of int_n^{n+1} omega(t)/t^order dt with step
// 2^-grid_log2, evaluating block n's polynomial at both ends of every panel.
Real integrate_block(const OmegaLedger& ledger, unsigned n, int grid_log2, unsigned order);

struct MomentConstant {
  unsigned order = 2;
  Real value;
  Real error_budget;
  // order * int_1^2 x^{-order-1} dx = 1 - 2^-order, exactly.
  Rational first_block;
};

// order * int_1^inf omega(t)/t^order dt: exact first block, trapezoid on
// blocks 2..n*-1 at the ledger's grid, and the tail e^{-gamma} n*^{1-order}/(order-1).
MomentConstant moment_constant(const OmegaLedger& ledger, unsigned order);

}  // namespace buchstab
