#include <omp.h>

#include <cmath>

#include "otfs/kernels.hpp"

namespace otfs::kernels {

void dft_rows(CMatrix& x, fft::Direction dir) {
  const auto rows = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) fft::transform_inplace(x.row(r), dir);
}

void dft_cols(CMatrix& x, fft::Direction dir) {
  const std::size_t R = x.rows();
  const auto C = static_cast<std::ptrdiff_t>(x.cols());
#pragma omp parallel
  {
    CVector col(R);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < C; ++c) {
      for (std::size_t r = 0; r < R; ++r) col[r] = x(r, c);
      fft::transform_inplace(col, dir);
      for (std::size_t r = 0; r < R; ++r) x(r, c) = col[r];
    }
  }
}

void accumulate_echo(std::span<const Complex> s, const TargetSet& targets, double Ts,
                     std::span<Complex> out) {
  const auto L = static_cast<std::ptrdiff_t>(s.size());
  for (const auto& t : targets) {
    const auto l = static_cast<std::ptrdiff_t>(t.delay % s.size());
    const double w = 2.0 * kPi * t.doppler * Ts;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < L; ++i) {
      std::ptrdiff_t src = i - l;
      const double ph = w * static_cast<double>(src);
      if (src < 0) src += L;
      out[i] += t.alpha * s[src] * Complex(std::cos(ph), std::sin(ph));
    }
  }
}

void masked_divide(const CMatrix& num, const CMatrix& ref, double k, CMatrix& out, Mask& mask) {
  out = CMatrix(num.rows(), num.cols());
  mask = Mask(num.rows(), num.cols());
  const auto n = static_cast<std::ptrdiff_t>(num.size());
  const Complex* a = num.data();
  const Complex* b = ref.data();
  Complex* o = out.data();
  std::uint8_t* m = mask.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Complex d = k * b[i];
    if (std::abs(d) > 1.0) {
      o[i] = a[i] / d;
      m[i] = 1;
    } else {
      o[i] = 0.0;
      m[i] = 0;
    }
  }
}

Complex offgrid_coefficient(const CMatrix& x, double lt, double nt) {
  const auto R = static_cast<std::ptrdiff_t>(x.rows());
  const std::size_t C = x.cols();
  double re = 0.0, im = 0.0;
#pragma omp parallel for reduction(+ : re, im) schedule(static)
  for (std::ptrdiff_t n = 0; n < R; ++n) {
    Complex acc = 0.0;
    for (std::size_t l = 0; l < C; ++l) {
      const double ph = 2.0 * kPi * (static_cast<double>(l) * lt / static_cast<double>(C) -
                                     static_cast<double>(n) * nt / static_cast<double>(R));
      acc += x(n, l) * Complex(std::cos(ph), std::sin(ph));
    }
    re += acc.real();
    im += acc.imag();
  }
  return Complex(re, im) / std::sqrt(static_cast<double>(R * C));
}

}  // namespace otfs::kernels
