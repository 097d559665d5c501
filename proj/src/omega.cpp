#include "buchstab/omega.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

#include "locate.hpp"

namespace buchstab {

void QuadratureConfig::validate() const {
  if (grid_log2 < 1) throw std::invalid_argument("grid exponent must be >= 1");
  if (grid_log2 > 30) throw std::invalid_argument("grid exponent must be <= 30");
  if (max_interval < 5) throw std::invalid_argument("max interval n* must be >= 5");
  if (taylor_degree < 8) throw std::invalid_argument("Taylor degree J must be >= 8");
  PrecisionConfig{precision}.validate();
}

OmegaBlock seed_omega(unsigned degree, int digits) {
  OmegaBlock block;
  block.n = 1;
  block.coeffs.reserve(degree + 1);
  Real c = Real(Rational(2, 3), digits);
  for (unsigned i = 0; i <= degree; ++i) {
    block.coeffs.push_back(c);
    c /= -3;
  }
  return block;
}

OmegaBlock advance_omega(const OmegaBlock& block) {
  const unsigned n = block.n;
  const unsigned degree = block.degree();
  const int digits = block.digits();
  const long denom = 2L * n + 3;

  OmegaBlock next;
  next.n = n + 1;
  next.coeffs.reserve(degree + 1);

  Real c0(digits);
  for (unsigned i = 0; i <= degree; ++i) {
    Real weight = Real(Rational(i % 2 == 0 ? 1 : -1, i + 1), digits);
    weight += 2L * (n + 1);
    c0 += block.coeffs[i] * weight;
  }
  c0 /= denom;
  next.coeffs.push_back(std::move(c0));

  for (unsigned i = 1; i <= degree; ++i) {
    Real c = block.coeffs[i - 1] / static_cast<long>(i);
    c -= next.coeffs[i - 1];
    c /= denom;
    next.coeffs.push_back(std::move(c));
  }
  return next;
}

OmegaLedger OmegaLedger::build(const QuadratureConfig& config) {
  config.validate();
  std::vector<OmegaBlock> blocks;
  blocks.reserve(config.max_interval);
  blocks.push_back(seed_omega(config.taylor_degree, config.precision));
  while (blocks.size() < config.max_interval) blocks.push_back(advance_omega(blocks.back()));
  return OmegaLedger(config, std::move(blocks));
}

OmegaLedger OmegaLedger::from_blocks(const QuadratureConfig& config,
                                     std::vector<OmegaBlock> blocks) {
  config.validate();
  if (blocks.size() != config.max_interval) {
    throw std::invalid_argument("ledger needs " + std::to_string(config.max_interval) +
                                " blocks, got " + std::to_string(blocks.size()));
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].n != i + 1 || blocks[i].coeffs.size() != config.taylor_degree + 1) {
      throw std::invalid_argument("block " + std::to_string(i + 1) + " is malformed");
    }
  }
  return OmegaLedger(config, std::move(blocks));
}

const OmegaBlock& OmegaLedger::block(unsigned n) const {
  if (n < 1 || n > blocks_.size()) {
    throw RangeError("block " + std::to_string(n) + " outside ledger 1.." +
                     std::to_string(blocks_.size()));
  }
  return blocks_[n - 1];
}

std::vector<unsigned> OmegaLedger::unconverged_blocks(int target_digits) const {
  std::vector<unsigned> out;
  for (const auto& b : blocks_) {
    if (!b.converged(target_digits)) out.push_back(b.n);
  }
  return out;
}

Real eval_omega(const OmegaLedger& ledger, const Real& x) {
  const auto [n, z] = detail::locate(x, ledger.max_interval(), ledger.config().precision);
  return ledger.block(n).evaluate(z);
}

Real integrate_block(const OmegaLedger& ledger, unsigned n, int grid_log2, unsigned order) {
  if (grid_log2 < 1 || grid_log2 > 30) throw std::invalid_argument("grid exponent out of range");
  const OmegaBlock& block = ledger.block(n);
  const mpfr_prec_t prec = bits_for_digits(ledger.config().precision);
  const unsigned long panels = 1ul << grid_log2;

  mpfr_t t0, t1, w0, w1, y0, y1, z0, z1, x, term, sum;
  for (auto* v : {&t0, &t1, &w0, &w1, &y0, &y1, &z0, &z1, &x, &term, &sum}) mpfr_init2(*v, prec);
  mpfr_set_zero(sum, 1);

  for (unsigned long i = 0; i < panels; ++i) {
    mpfr_set_ui(t0, i, MPFR_RNDN);
    mpfr_mul_2si(t0, t0, -grid_log2, MPFR_RNDN);
    mpfr_set_ui(t1, i + 1, MPFR_RNDN);
    mpfr_mul_2si(t1, t1, -grid_log2, MPFR_RNDN);
    mpfr_mul_2ui(w0, t0, 1, MPFR_RNDN);
    mpfr_sub_ui(w0, w0, 1, MPFR_RNDN);
    mpfr_mul_2ui(w1, t1, 1, MPFR_RNDN);
    mpfr_sub_ui(w1, w1, 1, MPFR_RNDN);

    mpfr_set_zero(y0, 1);
    mpfr_set_zero(y1, 1);
    mpfr_set_ui(z0, 1, MPFR_RNDN);
    mpfr_set_ui(z1, 1, MPFR_RNDN);
    for (const Real& c : block.coeffs) {
      mpfr_fma(y0, c.get(), z0, y0, MPFR_RNDN);
      mpfr_fma(y1, c.get(), z1, y1, MPFR_RNDN);
      mpfr_mul(z0, z0, w0, MPFR_RNDN);
      mpfr_mul(z1, z1, w1, MPFR_RNDN);
    }

    mpfr_add_ui(x, t0, n, MPFR_RNDN);
    mpfr_pow_ui(x, x, order, MPFR_RNDN);
    mpfr_div(term, y0, x, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    mpfr_add_ui(x, t1, n, MPFR_RNDN);
    mpfr_pow_ui(x, x, order, MPFR_RNDN);
    mpfr_div(term, y1, x, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
  }
  // delta / 2 applied once.
  mpfr_mul_2si(sum, sum, -(grid_log2 + 1), MPFR_RNDN);

  Real result(ledger.config().precision);
  mpfr_set(result.get(), sum, MPFR_RNDN);
  for (auto* v : {&t0, &t1, &w0, &w1, &y0, &y1, &z0, &z1, &x, &term, &sum}) mpfr_clear(*v);
  return result;
}

namespace {

// f'(x) for f = omega/x^order inside block n at centred coordinate z.
Real weighted_slope(const OmegaBlock& block, const Real& z, unsigned order) {
  Real x = (z + 1) / 2;
  x += static_cast<long>(block.n);
  const Real omega = block.evaluate(z);
  const Real slope = block.derivative(z) * 2L;
  return slope / pow(x, order) - omega * static_cast<long>(order) / pow(x, order + 1);
}

}  // namespace

MomentConstant moment_constant(const OmegaLedger& ledger, unsigned order) {
  if (order < 2) throw std::invalid_argument("moment order must be >= 2");
  const QuadratureConfig& cfg = ledger.config();
  const int digits = cfg.precision;
  const unsigned last = cfg.max_interval;  // trapezoid covers [2, n*]

  // Blocks are independent; each worker fills its own slots and the sum runs
  // in index order so the result does not depend on the thread count.
  std::vector<Real> pieces(last + 1, Real(digits));
  const unsigned workers = std::clamp(std::thread::hardware_concurrency(), 1u, 16u);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (unsigned n = 2 + w; n < last; n += workers) {
          pieces[n] = integrate_block(ledger, n, cfg.grid_log2, order);
        }
      });
    }
  }

  MomentConstant result;
  result.order = order;
  result.first_block = Rational(Natural(1) << order, 1) - 1;
  result.first_block /= Rational(Natural(1) << order, 1);

  Real body(digits);
  for (unsigned n = 2; n < last; ++n) body += pieces[n];

  const Real tail_scale = pow(Real(static_cast<long>(last), digits), 1 - static_cast<long>(order)) /
                          static_cast<long>(order - 1);
  const Real tail = exp_neg_gamma(digits) * tail_scale;

  result.value = rational_to_real(result.first_block, digits);
  result.value += (body + tail) * static_cast<long>(order);

  // Leading Euler-Maclaurin term of the trapezoid error per block (doubled),
  // polynomial truncation, and the |omega - e^{-gamma}| < 1e-4 tail bound.
  const Real delta = pow(Real(2, digits), -cfg.grid_log2);
  const Real minus_one(-1, digits);
  const Real plus_one(1, digits);
  Real slope_jumps(digits);
  Real truncation(digits);
  for (unsigned n = 2; n < last; ++n) {
    const OmegaBlock& b = ledger.block(n);
    slope_jumps += abs(weighted_slope(b, plus_one, order) - weighted_slope(b, minus_one, order));
    truncation += abs(b.coeffs.back()) * 2L / pow(Real(static_cast<long>(n), digits), order);
  }
  Real trapezoid = delta * delta * slope_jumps / 6L;
  Real tail_bound = Real::parse("1e-4", digits) * tail_scale;
  result.error_budget = (trapezoid + truncation + tail_bound) * static_cast<long>(order);
  return result;
}

}  // namespace buchstab
