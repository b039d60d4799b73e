#pragma once

#include <span>

#include "otfs/channel.hpp"
#include "otfs/fft.hpp"
#include "otfs/types.hpp"

// Hot loops used by the signal chain. The kernels:: versions are OpenMP
// parallel; reference:: holds plain serial loops that the tests and the
// benchmark compare against. Both produce the same numbers up to rounding.
namespace otfs {

namespace kernels {

void dft_rows(CMatrix& x, fft::Direction dir);
void dft_cols(CMatrix& x, fft::Direction dir);

// out[i] += sum_p alpha_p s[<i - l_p>] exp(j 2 pi nu_p (i - l_p) Ts)
void accumulate_echo(std::span<const Complex> s, const TargetSet& targets, double Ts,
                     std::span<Complex> out);

// out = num / (k ref) where |k ref| > 1, else 0 with mask 0.
void masked_divide(const CMatrix& num, const CMatrix& ref, double k, CMatrix& out, Mask& mask);

// Range-Doppler map value at fractional (l, n) for a symbol-free grid x
// stored [n][l]:
//   sum_{n,l} x(n,l) exp(+j 2 pi l lt / cols) exp(-j 2 pi n nt / rows) / sqrt(rows cols)
Complex offgrid_coefficient(const CMatrix& x, double lt, double nt);

}  // namespace kernels

namespace reference {

void dft_rows(CMatrix& x, fft::Direction dir);
void dft_cols(CMatrix& x, fft::Direction dir);
void accumulate_echo(std::span<const Complex> s, const TargetSet& targets, double Ts,
                     std::span<Complex> out);
void masked_divide(const CMatrix& num, const CMatrix& ref, double k, CMatrix& out, Mask& mask);
Complex offgrid_coefficient(const CMatrix& x, double lt, double nt);

}  // namespace reference

}  // namespace otfs
