#pragma once

#include <cstddef>
#include <vector>

#include "otfs/config.hpp"
#include "otfs/preproc.hpp"
#include "otfs/types.hpp"

namespace otfs {

struct Estimate {
  double l_hat = 0.0;   // fractional delay [samples]
  double nu_hat = 0.0;  // signed Doppler [Hz]
  Complex alpha_hat{};
  double r_hat = 0.0;  // [m]
  double v_hat = 0.0;  // [m/s]
  bool clamped = false;  // a refinement hit the +-0.5 bin limit
};

using EstimateList = std::vector<Estimate>;

struct Bin {
  std::size_t l = 0;
  std::size_t n = 0;
  bool operator==(const Bin&) const = default;
};

enum class Axis { range, doppler };

// (1/sqrt(x)) sin(pi y) / sin(pi y / x) exp(j pi y (x-1)/x); sqrt(x) at y = 0 mod x.
Complex discrete_sinc(double x, double y);

// Range-Doppler map, stored [l][n] (Mbar x Ntilde). Inverse DFT along
// delay, forward DFT along sub-block index, both unitary.
CMatrix rd_map(const CMatrix& Xt);
inline CMatrix rd_map(const PreprocOutput& p) { return rd_map(p.Xt); }

// Largest |.|^2; ties go to smaller l, then smaller n.
Bin peak_pick(const CMatrix& map);

// Ratio of the two quarter-bin-offset interpolations as a function of the
// residual offset xi for an x-point transform.
double ratio_function(double x, double xi);

struct TaylorCoefficients {
  double c1 = 0.0;
  double c3 = 0.0;
  double c5 = 0.0;
};

TaylorCoefficients taylor_c135(std::size_t x);

// Inverse of the ratio via a [3/2] rational fit of the series, solved as a
// cubic. Returns the real part of the smallest root.
double cubic_update(double rho, const TaylorCoefficients& c);

// Map values off the integer grid, computed from the symbol-free grid
// itself. Both cuts are exact: the 2D transform is separable, so fixing one
// index to an integer leaves a 1D sum over the other.
class OffGridMap {
 public:
  explicit OffGridMap(const CMatrix& Xt);

  const CMatrix& map() const { return map_; }
  std::size_t Mbar() const { return map_.rows(); }
  std::size_t Ntilde() const { return map_.cols(); }

  Complex at(double lt, double nt) const;            // direct 2D sum
  Complex range_cut(double lt, std::size_t n) const;  // fractional delay, integer Doppler
  Complex doppler_cut(std::size_t l, double nt) const;
  Complex along(Axis axis, const Bin& anchor, double offset) const;

 private:
  CMatrix grid_;        // Xt [n][l]
  CMatrix n_spectrum_;  // forward DFT along n, [n~][l]
  CMatrix l_spectrum_;  // inverse DFT along l, [n][l~]
  CMatrix map_;
};

struct Refinement {
  double offset = 0.0;
  bool clamped = false;
  std::vector<double> history;  // offset after each iteration, starting with the initial guess
};

Refinement refine_axis(const OffGridMap& access, Axis axis, const Bin& anchor, std::size_t n_iter,
                       const TaylorCoefficients& coeffs);

// Removes (alpha/k) exp(-j 2 pi l l_hat / Mbar) exp(j 2 pi nu_hat n Mtilde Ts)
// from the unmasked bins.
void subtract_estimate(CMatrix& residual, const Mask& mask, const Estimate& e, double k,
                       const SystemConfig& cfg);

// Estimate-and-subtract over P targets, strongest first. The grid left after
// all P subtractions is written to residual_out when given.
EstimateList estimate_targets(const PreprocOutput& pre, std::size_t P, const SystemConfig& cfg,
                              CMatrix* residual_out = nullptr);

}  // namespace otfs
