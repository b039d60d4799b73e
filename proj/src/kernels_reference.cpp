#include <cmath>

#include "otfs/kernels.hpp"

namespace otfs::reference {

void dft_rows(CMatrix& x, fft::Direction dir) {
  for (std::size_t r = 0; r < x.rows(); ++r) fft::transform_inplace(x.row(r), dir);
}

void dft_cols(CMatrix& x, fft::Direction dir) {
  CVector col(x.rows());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t r = 0; r < x.rows(); ++r) col[r] = x(r, c);
    fft::transform_inplace(col, dir);
    for (std::size_t r = 0; r < x.rows(); ++r) x(r, c) = col[r];
  }
}

void accumulate_echo(std::span<const Complex> s, const TargetSet& targets, double Ts,
                     std::span<Complex> out) {
  const std::size_t L = s.size();
  for (std::size_t i = 0; i < L; ++i) {
    for (const auto& t : targets) {
      const std::size_t l = t.delay % L;
      const double shift = static_cast<double>(i) - static_cast<double>(l);
      const std::size_t src = (i + L - l) % L;
      out[i] += t.alpha * s[src] * std::polar(1.0, 2.0 * kPi * t.doppler * shift * Ts);
    }
  }
}

void masked_divide(const CMatrix& num, const CMatrix& ref, double k, CMatrix& out, Mask& mask) {
  out = CMatrix(num.rows(), num.cols());
  mask = Mask(num.rows(), num.cols());
  for (std::size_t r = 0; r < num.rows(); ++r) {
    for (std::size_t c = 0; c < num.cols(); ++c) {
      const Complex d = k * ref(r, c);
      if (std::abs(d) > 1.0) {
        out(r, c) = num(r, c) / d;
        mask(r, c) = 1;
      }
    }
  }
}

Complex offgrid_coefficient(const CMatrix& x, double lt, double nt) {
  const double R = static_cast<double>(x.rows());
  const double C = static_cast<double>(x.cols());
  Complex acc = 0.0;
  for (std::size_t n = 0; n < x.rows(); ++n)
    for (std::size_t l = 0; l < x.cols(); ++l)
      acc += x(n, l) * std::polar(1.0, 2.0 * kPi * (l * lt / C - n * nt / R));
  return acc / std::sqrt(R * C);
}

}  // namespace otfs::reference
