#include "buchstab/omega_k.hpp"

#include <cmath>
#include <stdexcept>

#include "locate.hpp"

namespace buchstab {

OmegaKBlock seed_block1(unsigned degree, int digits) {
  OmegaKBlock block;
  block.n = 1;
  block.coeffs.assign(degree + 1, Real(digits));
  block.coeffs[0] = Real(1, digits);
  return block;
}

OmegaKBlock seed_block2(const Real& k, unsigned degree, int digits) {
  OmegaKBlock block;
  block.n = 2;
  block.coeffs.reserve(degree + 1);
  Real c0 = ln_real(Real(Rational(3, 2), digits)) * k;
  c0 += 1L;
  block.coeffs.push_back(std::move(c0));
  Real third_power(1, digits);
  for (unsigned i = 1; i <= degree; ++i) {
    third_power *= 3L;
    Real c = k / third_power;
    c /= static_cast<long>(i);
    block.coeffs.push_back(i % 2 == 1 ? std::move(c) : -c);
  }
  return block;
}

AlphaVector alpha(const OmegaKBlock& prev, unsigned n) {
  if (n < 2) throw std::invalid_argument("alpha needs n >= 2");
  const unsigned degree = prev.degree();
  const int digits = prev.digits();
  // ratio_powers[d] = (-1/(2n-1))^d
  std::vector<Real> ratio_powers;
  ratio_powers.reserve(degree + 1);
  ratio_powers.emplace_back(1, digits);
  for (unsigned d = 1; d <= degree; ++d) {
    ratio_powers.push_back(ratio_powers.back() / -(2L * n - 1));
  }

  AlphaVector out;
  out.reserve(degree + 1);
  for (unsigned i = 0; i <= degree; ++i) {
    Real acc(digits);
    for (unsigned j = 0; j <= i; ++j) acc += ratio_powers[i - j] * prev.coeffs[j];
    out.push_back(std::move(acc));
  }
  return out;
}

namespace detail {

OmegaKBlock advance_unchecked(const OmegaKBlock& prev, const Real& k) {
  const unsigned n = prev.n + 1;
  const unsigned degree = prev.degree();
  const int digits = prev.digits();
  const AlphaVector a = alpha(prev, n);
  const Real scale = k / (2L * n - 1);

  OmegaKBlock block;
  block.n = n;
  block.coeffs.reserve(degree + 1);

  // Sum_i (-1)^{i+1} alpha_i / (i+1)
  Real lower_end(digits);
  for (unsigned i = 0; i <= degree; ++i) {
    Real term = a[i] / static_cast<long>(i + 1);
    if (i % 2 == 0) {
      lower_end -= term;
    } else {
      lower_end += term;
    }
  }
  Real c0 = prev.right_limit();
  c0 -= scale * lower_end;
  block.coeffs.push_back(std::move(c0));

  for (unsigned i = 1; i <= degree; ++i) {
    Real c = scale * a[i - 1];
    c /= static_cast<long>(i);
    block.coeffs.push_back(std::move(c));
  }
  return block;
}

}  // namespace detail

OmegaKBlock advance(const OmegaKBlock& prev, const Real& k) {
  if (prev.n < 2) throw std::invalid_argument("advance starts from block 2 (builds n >= 3)");
  return detail::advance_unchecked(prev, k);
}

OmegaKLedger::OmegaKLedger(std::string k_text, Real k, unsigned degree, int digits,
                           std::vector<OmegaKBlock> blocks)
    : k_text_(std::move(k_text)),
      k_(std::move(k)),
      degree_(degree),
      digits_(digits),
      blocks_(std::move(blocks)) {}

namespace {

Real parse_k(const std::string& k_text, int digits) {
  Real k = Real::parse(k_text, digits);
  if (k.sign() <= 0) throw DomainError("K must be positive, got " + k_text);
  return k;
}

void check_shape(unsigned degree, int digits) {
  if (degree < 8) throw std::invalid_argument("Taylor degree J must be >= 8");
  PrecisionConfig{digits}.validate();
}

}  // namespace

OmegaKLedger OmegaKLedger::build(const std::string& k_text, unsigned max_interval,
                                 unsigned degree, int digits) {
  check_shape(degree, digits);
  if (max_interval < 2) throw std::invalid_argument("Omega_K ledger needs at least 2 blocks");
  Real k = parse_k(k_text, digits);
  std::vector<OmegaKBlock> blocks;
  blocks.reserve(max_interval);
  blocks.push_back(seed_block1(degree, digits));
  blocks.push_back(seed_block2(k, degree, digits));
  while (blocks.size() < max_interval) blocks.push_back(advance(blocks.back(), k));
  return OmegaKLedger(k_text, std::move(k), degree, digits, std::move(blocks));
}

OmegaKLedger OmegaKLedger::covering(const std::string& k_text, const Real& x, unsigned degree,
                                    int digits) {
  if (!(x >= Real(1, digits))) throw RangeError("x must be >= 1");
  Real whole(std::max(digits, x.digits()));
  mpfr_floor(whole.get(), x.get());
  if (whole > Real(1L << 24, digits)) throw ResourceError("x too large for an Omega_K ledger");
  const auto top = static_cast<unsigned>(mpfr_get_ui(whole.get(), MPFR_RNDN));
  return build(k_text, std::max(2u, top), degree, digits);
}

OmegaKLedger OmegaKLedger::from_blocks(const std::string& k_text, unsigned degree, int digits,
                                       std::vector<OmegaKBlock> blocks) {
  check_shape(degree, digits);
  if (blocks.size() < 2) throw std::invalid_argument("Omega_K ledger needs at least 2 blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].n != i + 1 || blocks[i].coeffs.size() != degree + 1) {
      throw std::invalid_argument("block " + std::to_string(i + 1) + " is malformed");
    }
  }
  Real k = parse_k(k_text, digits);
  return OmegaKLedger(k_text, std::move(k), degree, digits, std::move(blocks));
}

const OmegaKBlock& OmegaKLedger::block(unsigned n) const {
  if (n < 1 || n > blocks_.size()) {
    throw RangeError("block " + std::to_string(n) + " outside ledger 1.." +
                     std::to_string(blocks_.size()));
  }
  return blocks_[n - 1];
}

Real eval_omega_k(const OmegaKLedger& ledger, const Real& x) {
  const auto [n, z] = detail::locate(x, ledger.max_interval(), ledger.digits());
  return ledger.block(n).evaluate(z);
}

Real proportion_large_smallest(const OmegaKLedger& ledger, const Real& x) {
  if (!(x > Real(1, ledger.digits()))) throw RangeError("proportion needs x > 1");
  return Real(1, ledger.digits()) / eval_omega_k(ledger, x);
}

std::vector<std::pair<Real, Real>> omega_k_table(const OmegaKLedger& ledger,
                                                 const std::vector<Real>& xs) {
  std::vector<std::pair<Real, Real>> rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) rows.emplace_back(x, eval_omega_k(ledger, x));
  return rows;
}

std::vector<long> reference_grid() {
  std::vector<long> grid;
  for (long x = 1; x <= 10; ++x) grid.push_back(x);
  for (long x = 16; x <= 8192; x *= 2) grid.push_back(x);
  return grid;
}

namespace {

// F[j] = int_0^{j h} f, fourth order at every node.
std::vector<long double> cumulative_integral(const std::vector<long double>& f, long double h) {
  const std::size_t size = f.size();
  std::vector<long double> out(size, 0.0L);
  if (size > 2) out[1] = h * (5 * f[0] + 8 * f[1] - f[2]) / 12;
  for (std::size_t j = 2; j < size; ++j) {
    if (j % 2 == 0) {
      out[j] = out[j - 2] + h * (f[j - 2] + 4 * f[j - 1] + f[j]) / 3;
    } else {
      out[j] = out[j - 3] + 3 * h * (f[j - 3] + 3 * f[j - 2] + 3 * f[j - 1] + f[j]) / 8;
    }
  }
  return out;
}

// One level-by-level sweep with 2^resolution panels per unit interval.
long double sweep(long double k, unsigned whole, long double frac, unsigned resolution) {
  const std::size_t panels = std::size_t{1} << resolution;
  const long double step = 1.0L / panels;
  const long double frac_step = frac / panels;

  // Omega_K on level 1 (x in [1, 2]) is 1 on both grids.
  std::vector<long double> full(panels + 1, 1.0L);
  std::vector<long double> part(panels + 1, 1.0L);
  std::vector<long double> integrand(panels + 1);

  for (unsigned level = 2; level <= whole; ++level) {
    const long double knot = full[panels];  // Omega_K(level)
    const long double base = level - 1;     // u - 1 ranges over [level-1, level)

    for (std::size_t j = 0; j <= panels; ++j) integrand[j] = part[j] / (base + j * frac_step);
    auto part_int = cumulative_integral(integrand, frac_step);
    for (std::size_t j = 0; j <= panels; ++j) part[j] = knot + k * part_int[j];

    if (level < whole) {
      for (std::size_t j = 0; j <= panels; ++j) integrand[j] = full[j] / (base + j * step);
      auto full_int = cumulative_integral(integrand, step);
      for (std::size_t j = 0; j <= panels; ++j) full[j] = knot + k * full_int[j];
    }
  }
  return part[panels];
}

}  // namespace

double oracle_quadrature(double k, double x, double tol) {
  if (!(x >= 1.0 && x <= 30.0)) throw RangeError("oracle supports 1 <= x <= 30");
  if (!(k > 0.0)) throw DomainError("K must be positive");
  if (!(tol >= 1e-12)) throw std::invalid_argument("oracle tolerance must be >= 1e-12");
  if (x < 2.0) return 1.0;

  const auto whole = static_cast<unsigned>(std::floor(x));
  const long double frac = static_cast<long double>(x) - whole;
  constexpr unsigned kFirstResolution = 3;
  constexpr unsigned kMaxResolution = 18;

  long double previous = sweep(k, whole, frac, kFirstResolution);
  for (unsigned resolution = kFirstResolution + 1; resolution <= kMaxResolution; ++resolution) {
    const long double current = sweep(k, whole, frac, resolution);
    if (std::fabs(static_cast<double>(current - previous)) <= tol) {
      return static_cast<double>(current);
    }
    previous = current;
  }
  throw ResourceError("oracle did not reach tolerance within 2^18 panels per interval");
}

}  // namespace buchstab
