#include "otfs/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "otfs/channel.hpp"
#include "otfs/fft.hpp"
#include "otfs/kernels.hpp"

namespace otfs {

Complex discrete_sinc(double x, double y) {
  if (!(x >= 1.0)) throw std::invalid_argument("discrete_sinc: size must be >= 1");
  const double den = std::sin(kPi * y / x);
  if (std::abs(den) < 1e-12) return {std::sqrt(x), 0.0};
  const double mag = std::sin(kPi * y) / den / std::sqrt(x);
  return std::polar(mag, kPi * y * (x - 1.0) / x);
}

CMatrix rd_map(const CMatrix& Xt) {
  CMatrix a = Xt;
  kernels::dft_rows(a, fft::Direction::inverse);
  kernels::dft_cols(a, fft::Direction::forward);
  return a.transposed();
}

Bin peak_pick(const CMatrix& map) {
  if (map.empty()) throw std::invalid_argument("peak_pick: empty map");
  Bin best;
  double best_v = -1.0;
  for (std::size_t l = 0; l < map.rows(); ++l) {
    for (std::size_t n = 0; n < map.cols(); ++n) {
      const double v = std::norm(map(l, n));
      if (v > best_v) {
        best_v = v;
        best = {l, n};
      }
    }
  }
  return best;
}

double ratio_function(double x, double xi) {
  const double a = std::norm(discrete_sinc(x, xi - 0.25));
  const double b = std::norm(discrete_sinc(x, xi + 0.25));
  return (a - b) / (a + b);
}

namespace {

// Solves a small dense system in place (partial pivoting).
template <std::size_t K>
std::array<double, K> solve(std::array<std::array<double, K>, K> A, std::array<double, K> b) {
  for (std::size_t c = 0; c < K; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < K; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < K; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t j = c; j < K; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::array<double, K> x{};
  for (std::size_t i = K; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < K; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

}  // namespace

TaylorCoefficients taylor_c135(std::size_t x) {
  if (x < 2) throw std::invalid_argument("taylor_c135: size must be >= 2");
  // f is odd, so f(t)/t is a series in t^2. Sampling it at t = h, 2h, ...
  // and fitting in v = (t/h)^2 is Richardson extrapolation to t -> 0 that
  // keeps the higher coefficients as well.
  constexpr std::size_t K = 5;
  constexpr double h = 1e-2;
  std::array<std::array<double, K>, K> A{};
  std::array<double, K> g{};
  for (std::size_t j = 0; j < K; ++j) {
    const double t = h * static_cast<double>(j + 1);
    const double v = static_cast<double>((j + 1) * (j + 1));
    double p = 1.0;
    for (std::size_t i = 0; i < K; ++i) {
      A[j][i] = p;
      p *= v;
    }
    g[j] = ratio_function(static_cast<double>(x), t) / t;
  }
  const auto a = solve(A, g);
  return {a[0], a[1] / (h * h), a[2] / (h * h * h * h)};
}

double cubic_update(double rho, const TaylorCoefficients& c) {
  if (rho == 0.0) return 0.0;
  if (c.c3 == 0.0) return rho / c.c1;
  const double b2 = c.c5 / c.c3;
  const double a1 = c.c1;
  const double a3 = c.c3 - c.c1 * c.c5 / c.c3;
  if (std::abs(a3) < 1e-300) return rho / c.c1;

  // rho (1 - b2 xi^2) = a1 xi + a3 xi^3, written as a monic cubic
  const double k2 = rho * b2 / a3;
  const double k1 = a1 / a3;
  const double k0 = -rho / a3;

  const double Qc = (3.0 * k1 - k2 * k2) / 9.0;
  const double R = (9.0 * k2 * k1 - 27.0 * k0 - 2.0 * k2 * k2 * k2) / 54.0;
  const Complex sd = std::sqrt(Complex(Qc * Qc * Qc + R * R, 0.0));
  Complex u = Complex(R, 0.0) + sd;
  Complex w = Complex(R, 0.0) - sd;
  if (std::abs(w) > std::abs(u)) std::swap(u, w);
  const Complex S = std::pow(u, 1.0 / 3.0);
  const Complex T = std::abs(S) > 0.0 ? -Qc / S : std::pow(w, 1.0 / 3.0);

  const Complex shift(-k2 / 3.0, 0.0);
  const Complex j(0.0, 1.0);
  const std::array<Complex, 3> roots = {
      shift + S + T,
      shift - (S + T) / 2.0 + j * (std::sqrt(3.0) / 2.0) * (S - T),
      shift - (S + T) / 2.0 - j * (std::sqrt(3.0) / 2.0) * (S - T),
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (std::abs(roots[i]) < std::abs(roots[best])) best = i;
  return roots[best].real();
}

OffGridMap::OffGridMap(const CMatrix& Xt) : grid_(Xt) {
  if (Xt.empty()) throw std::invalid_argument("OffGridMap: empty grid");
  l_spectrum_ = Xt;
  kernels::dft_rows(l_spectrum_, fft::Direction::inverse);
  n_spectrum_ = Xt;
  kernels::dft_cols(n_spectrum_, fft::Direction::forward);
  CMatrix both = l_spectrum_;
  kernels::dft_cols(both, fft::Direction::forward);
  map_ = both.transposed();
}

Complex OffGridMap::at(double lt, double nt) const { return kernels::offgrid_coefficient(grid_, lt, nt); }

Complex OffGridMap::range_cut(double lt, std::size_t n) const {
  const std::size_t Mb = grid_.cols();
  const auto row = n_spectrum_.row(n % grid_.rows());
  const double w = 2.0 * kPi * lt / static_cast<double>(Mb);
  Complex acc = 0.0;
  for (std::size_t l = 0; l < Mb; ++l) acc += row[l] * std::polar(1.0, w * static_cast<double>(l));
  return acc / std::sqrt(static_cast<double>(Mb));
}

Complex OffGridMap::doppler_cut(std::size_t l, double nt) const {
  const std::size_t Nt = grid_.rows();
  const std::size_t col = l % grid_.cols();
  const double w = -2.0 * kPi * nt / static_cast<double>(Nt);
  Complex acc = 0.0;
  for (std::size_t n = 0; n < Nt; ++n)
    acc += l_spectrum_(n, col) * std::polar(1.0, w * static_cast<double>(n));
  return acc / std::sqrt(static_cast<double>(Nt));
}

Complex OffGridMap::along(Axis axis, const Bin& anchor, double offset) const {
  if (axis == Axis::range) return range_cut(static_cast<double>(anchor.l) + offset, anchor.n);
  return doppler_cut(anchor.l, static_cast<double>(anchor.n) + offset);
}

Refinement refine_axis(const OffGridMap& access, Axis axis, const Bin& anchor, std::size_t n_iter,
                       const TaylorCoefficients& coeffs) {
  if (n_iter == 0) throw std::invalid_argument("refine_axis: N_iter must be >= 1");
  Refinement out;
  const std::size_t size = axis == Axis::range ? access.Mbar() : access.Ntilde();
  if (size < 2) {
    // a single bin carries no information along this axis
    out.history.push_back(0.0);
    return out;
  }

  const CMatrix& map = access.map();
  const double centre = std::norm(map(anchor.l, anchor.n));
  double up, down;
  if (axis == Axis::range) {
    up = std::norm(map((anchor.l + 1) % size, anchor.n));
    down = std::norm(map((anchor.l + size - 1) % size, anchor.n));
  } else {
    up = std::norm(map(anchor.l, (anchor.n + 1) % size));
    down = std::norm(map(anchor.l, (anchor.n + size - 1) % size));
  }
  // start a quarter bin towards the larger neighbour
  double delta = 0.0;
  const double diff = up - down;
  if (std::abs(diff) > 1e-12 * centre) delta = diff > 0.0 ? 0.25 : -0.25;
  out.history.push_back(delta);

  for (std::size_t i = 0; i < n_iter; ++i) {
    const double p = std::norm(access.along(axis, anchor, delta + 0.25));
    const double m = std::norm(access.along(axis, anchor, delta - 0.25));
    if (p + m == 0.0) throw std::domain_error("refine_axis: zero neighbourhood");
    delta += cubic_update((p - m) / (p + m), coeffs);
    if (delta > 0.5 || delta < -0.5) {
      delta = std::clamp(delta, -0.5, 0.5);
      out.clamped = true;
    }
    out.history.push_back(delta);
  }
  out.offset = delta;
  return out;
}

void subtract_estimate(CMatrix& residual, const Mask& mask, const Estimate& e, double k,
                       const SystemConfig& cfg) {
  const std::size_t Nt = residual.rows();
  const std::size_t Mb = residual.cols();
  const double nh = e.nu_hat * static_cast<double>(Nt) * cfg.Mtilde * cfg.Ts();
  const Complex amp = e.alpha_hat / k;
  CVector lph(Mb);
  for (std::size_t l = 0; l < Mb; ++l)
    lph[l] = std::polar(1.0, -2.0 * kPi * static_cast<double>(l) * e.l_hat / static_cast<double>(Mb));
  for (std::size_t n = 0; n < Nt; ++n) {
    const Complex a = amp * std::polar(1.0, 2.0 * kPi * static_cast<double>(n) * nh / static_cast<double>(Nt));
    for (std::size_t l = 0; l < Mb; ++l)
      if (mask(n, l)) residual(n, l) -= a * lph[l];
  }
}

EstimateList estimate_targets(const PreprocOutput& pre, std::size_t P, const SystemConfig& cfg,
                              CMatrix* residual_out) {
  if (P == 0) throw std::invalid_argument("estimate_targets: P must be >= 1");
  const std::size_t Nt = pre.Xt.rows();
  const std::size_t Mb = pre.Xt.cols();
  if (P > Nt * Mb) throw std::invalid_argument("estimate_targets: more targets than bins");
  if (pre.mask.rows() != Nt || pre.mask.cols() != Mb)
    throw std::invalid_argument("estimate_targets: mask shape mismatch");

  const TaylorCoefficients cl = taylor_c135(Mb);
  const TaylorCoefficients cn = Nt >= 2 ? taylor_c135(Nt) : TaylorCoefficients{};
  const double sub_block_rate = 1.0 / (static_cast<double>(Nt) * cfg.Mtilde * cfg.Ts());

  EstimateList out;
  CMatrix residual = pre.Xt;
  for (std::size_t p = 0; p < P; ++p) {
    const OffGridMap access(residual);
    const Bin b = peak_pick(access.map());
    const Refinement rl = refine_axis(access, Axis::range, b, cfg.N_iter, cl);
    const Refinement rn = refine_axis(access, Axis::doppler, b, cfg.N_iter, cn);

    Estimate e;
    e.clamped = rl.clamped || rn.clamped;
    e.alpha_hat = pre.k * access.map()(b.l, b.n) /
                  (discrete_sinc(static_cast<double>(Mb), -rl.offset) *
                   discrete_sinc(static_cast<double>(Nt), rn.offset));
    double lh = static_cast<double>(b.l) + rl.offset;
    if (lh >= static_cast<double>(Mb) - 0.5) lh -= static_cast<double>(Mb);
    double nh = static_cast<double>(b.n) + rn.offset;
    if (nh > static_cast<double>(Nt) / 2.0) nh -= static_cast<double>(Nt);
    e.l_hat = lh;
    e.nu_hat = nh * sub_block_rate;
    e.r_hat = delay_to_range(lh, cfg);
    e.v_hat = doppler_to_velocity(e.nu_hat, cfg);
    out.push_back(e);

    subtract_estimate(residual, pre.mask, e, pre.k, cfg);
  }
  if (residual_out) *residual_out = std::move(residual);
  return out;
}

}  // namespace otfs
