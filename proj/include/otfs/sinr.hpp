#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "otfs/config.hpp"

namespace otfs {

// Variance constant of the eps-truncated ratio of two complex Gaussians.
// Non-positive for large eps, where the approximation is meaningless.
double b_of_eps(double eps);

// a = (pi^2 Ts^2 / 3) sum_p sigma_p^2 nu_p^2 for a known population.
double curvature_a(double Ts, std::span<const double> sigma2, std::span<const double> nu);
// Same with nu_p ~ U[-nu_max, nu_max] replaced by E[nu^2] = nu_max^2 / 3.
double curvature_a_uniform(double Ts, double sigma_P2, double nu_max);

struct PowerBudget {
  double sigma_S2 = 0.0;
  double sigma_I2 = 0.0;
  double sigma_Z2 = 0.0;
  double sigma_W2 = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  double sigma_P2 = 0.0;
  double b = 0.0;
  double k = 0.0;
  // false when the small-phase expansion breaks (sigma_S2 < 0) or b <= 0
  bool valid = true;

  double interference() const { return sigma_I2 + sigma_Z2 + sigma_W2; }
};

// sigma2 lists the target powers in ascending delay order; i_min and i_max
// are the smallest and largest delays.
PowerBudget power_budget(const SystemConfig& cfg, double a, std::span<const double> sigma2,
                         double i_min, double i_max);
// Upper-bound form, i.e. i_min = 0 and i_max = Q.
PowerBudget power_budget(const SystemConfig& cfg, double a, std::span<const double> sigma2);

struct OptimalSubBlock {
  double Mbar_f = 0.0;        // numerator maximiser, large-Mbar approximation
  double Mbar_g = 0.0;        // denominator minimiser
  double Mbar_joint = 0.0;    // cbrt(Q sigma_P^2 / (2a)), both in the many-target limit
  double Mbar_f_exact = 0.0;  // root of the full cubic behind Mbar_f
  std::size_t Mtilde_opt = 0;
  std::size_t Ntilde_opt = 0;
  bool interior = true;  // false for static targets (a = 0)
};

OptimalSubBlock opt_Mbar(const SystemConfig& cfg, double a, double sigma_P2);

// Numerator and denominator of gamma with Ntilde = MN / (Mbar + Q) taken as
// continuous and k, b fixed by the configured eps.
double sinr_numerator(const SystemConfig& cfg, double a, double sigma_P2, double Mbar);
double sinr_denominator(const SystemConfig& cfg, double a, double sigma_P2, double Mbar);

// Velocity bound [m^2/s^2] at input SNR gamma0 (linear).
double crlb_velocity(const SystemConfig& cfg, double gamma0);
double crlb_velocity(const SystemConfig& cfg, double gamma0, CrlbForm form);

struct SinrPoint {
  std::size_t Mtilde = 0;
  double gamma = 0.0;
  double gamma_db = 0.0;
};

struct SinrCurve {
  std::vector<SinrPoint> points;
  std::size_t argmax = 0;  // index into points
};

// gamma on Mtilde = lo, lo + step, ..., <= hi, using the bound form.
SinrCurve sinr_curve(SystemConfig cfg, double a, std::span<const double> sigma2, std::size_t lo,
                     std::size_t hi, std::size_t step);

}  // namespace otfs
