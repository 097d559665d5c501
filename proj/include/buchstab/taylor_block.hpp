#pragma once

#include <vector>

#include "buchstab/numeric.hpp"

namespace buchstab {

// Degree-J expansion of a function on [n, n+1) in the centred variable
// z = 2(x - n) - 1, so z = -1 at x = n and z -> 1 as x -> n+1.
struct TaylorBlock {
  unsigned n = 0;
  std::vector<Real> coeffs;  // c_{n,0} ... c_{n,J}

  unsigned degree() const { return static_cast<unsigned>(coeffs.size()) - 1; }
  int digits() const { return coeffs.front().digits(); }

  Real evaluate(const Real& z) const;
  // d/dz of the polynomial.
  Real derivative(const Real& z) const;
  // Value at z = -1, i.e. at x = n.
  Real left_value() const;
  // Limit z -> 1, i.e. the value at x = n + 1 seen from this block.
  Real right_limit() const;

  // False when |c_{n,J}| >= 10^-(target_digits + 2): the degree is too low
  // for the requested output precision.
  bool converged(int target_digits) const;
};

}  // namespace buchstab
