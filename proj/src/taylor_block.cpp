#include "buchstab/taylor_block.hpp"

namespace buchstab {

Real TaylorBlock::evaluate(const Real& z) const {
  Real acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
    acc *= z;
    acc += *it;
  }
  return acc;
}

Real TaylorBlock::derivative(const Real& z) const {
  Real acc(digits());
  for (unsigned i = degree(); i >= 1; --i) {
    acc *= z;
    acc += coeffs[i] * static_cast<long>(i);
  }
  return acc;
}

Real TaylorBlock::left_value() const {
  Real acc(digits());
  for (unsigned i = 0; i <= degree(); ++i) {
    if (i % 2 == 0) {
      acc += coeffs[i];
    } else {
      acc -= coeffs[i];
    }
  }
  return acc;
}

Real TaylorBlock::right_limit() const {
  Real acc(digits());
  for (const auto& c : coeffs) acc += c;
  return acc;
}

bool TaylorBlock::converged(int target_digits) const {
  const Real threshold = pow(Real(10, digits()), -(target_digits + 2));
  return abs(coeffs.back()) < threshold;
}

}  // namespace buchstab
