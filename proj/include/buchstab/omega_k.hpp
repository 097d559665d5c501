#pragma once

// Generalized Buchstab function
//   Omega_K(x) = 1                                    for 1 <= x < 2,
//   Omega_K(x) = 1 + K int_2^x Omega_K(u-1)/(u-1) du   for x >= 2,
// as a chain of Taylor blocks, plus the proportion 1/Omega_K(x) of objects
// whose smallest component is large.

#include <string>
#include <utility>
#include <vector>

#include "buchstab/numeric.hpp"
#include "buchstab/taylor_block.hpp"

namespace buchstab {

using OmegaKBlock = TaylorBlock;
using AlphaVector = std::vector<Real>;

// Block 1: identically 1.
OmegaKBlock seed_block1(unsigned degree, int digits);

// Block 2 from the closed form 1 + K ln(x-1) on [2,3):
//   c_{2,0} = 1 + K ln(3/2),  c_{2,i} = K (-1)^{i-1} / (i 3^i).
OmegaKBlock seed_block2(const Real& k, unsigned degree, int digits);

// alpha_i = sum_{j<=i} (-1)^{i-j} (2n-1)^{-(i-j)} c_{n-1,j}, i = 0..J, with
// c_{n-1,.} taken from prev. Requires n >= 2 (the recurrence proper starts at n = 3).
AlphaVector alpha(const OmegaKBlock& prev, unsigned n);

// Block prev.n + 1 (>= 3):
//   c_{n,i} = K alpha_{i-1} / ((2n-1) i)
//   c_{n,0} = sum_i c_{n-1,i} - K/(2n-1) sum_i (-1)^{i+1} alpha_i/(i+1)
OmegaKBlock advance(const OmegaKBlock& prev, const Real& k);

namespace detail {
// The advance step without the n >= 3 restriction; applied to block 1 it
// must reproduce seed_block2.
OmegaKBlock advance_unchecked(const OmegaKBlock& prev, const Real& k);
}  // namespace detail

class OmegaKLedger {
 public:
  // `k_text` is a decimal literal parsed at `digits` precision; K > 0.
  // Builds blocks 1..max_interval (max_interval >= 2).
  static OmegaKLedger build(const std::string& k_text, unsigned max_interval,
                            unsigned degree = 40, int digits = 30);
  // Smallest ledger that covers x (blocks 1..max(2, floor(x))).
  static OmegaKLedger covering(const std::string& k_text, const Real& x, unsigned degree = 40,
                               int digits = 30);
  static OmegaKLedger from_blocks(const std::string& k_text, unsigned degree, int digits,
                                  std::vector<OmegaKBlock> blocks);

  const std::string& k_text() const { return k_text_; }
  const Real& k() const { return k_; }
  unsigned degree() const { return degree_; }
  int digits() const { return digits_; }
  unsigned max_interval() const { return static_cast<unsigned>(blocks_.size()); }
  const OmegaKBlock& block(unsigned n) const;
  const std::vector<OmegaKBlock>& blocks() const { return blocks_; }

 private:
  OmegaKLedger(std::string k_text, Real k, unsigned degree, int digits,
               std::vector<OmegaKBlock> blocks);

  std::string k_text_;
  Real k_;
  unsigned degree_;
  int digits_;
  std::vector<OmegaKBlock> blocks_;
};

// Omega_K(x) for 1 <= x < max_interval + 1.
Real eval_omega_k(const OmegaKLedger& ledger, const Real& x);

// 1 / Omega_K(x) for 1 < x < max_interval + 1.
Real proportion_large_smallest(const OmegaKLedger& ledger, const Real& x);

// (x, Omega_K(x)) for each x, in input order.
std::vector<std::pair<Real, Real>> omega_k_table(const OmegaKLedger& ledger,
                                                 const std::vector<Real>& xs);

// The reference x grid: 1..10 and 16, 32, ..., 8192.
std::vector<long> reference_grid();

// Independent check of Omega_K that never touches Taylor blocks: the delay
// integral equation is integrated unit interval by unit interval on a
// dyadic grid (composite Simpson with 3/8 and three-point closures for
// cumulative values), knot values are memoized, and the grid is refined
// until two successive resolutions agree within tol.
// Requires 1 <= x <= 30, K > 0 and tol >= 1e-12; ResourceError when the
// refinement budget runs out.
double oracle_quadrature(double k, double x, double tol);

}  // namespace buchstab
