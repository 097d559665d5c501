#pragma once

#include <string>
#include <utility>

#include "buchstab/errors.hpp"
#include "buchstab/numeric.hpp"

namespace buchstab::detail {

// Maps x in [1, max_interval + 1) to (floor(x), 2(x - floor(x)) - 1).
inline std::pair<unsigned, Real> locate(const Real& x, unsigned max_interval, int digits) {
  const Real low(1, digits);
  const Real high(static_cast<long>(max_interval) + 1, digits);
  if (!(x >= low) || !(x < high)) {
    throw RangeError("x = " + x.to_string(12) + " outside ledger range [1, " +
                     std::to_string(max_interval + 1) + ")");
  }
  Real whole(std::max(digits, x.digits()));
  mpfr_floor(whole.get(), x.get());
  const auto n = static_cast<unsigned>(mpfr_get_ui(whole.get(), MPFR_RNDN));
  Real z = (x - whole) * 2L;
  z -= 1L;
  return {n, std::move(z)};
}

}  // namespace buchstab::detail
