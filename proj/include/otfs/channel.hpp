#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "otfs/config.hpp"
#include "otfs/types.hpp"

namespace otfs {

// One point target: integer delay in samples, Doppler in Hz, complex gain.
struct Target {
  Complex alpha{1.0, 0.0};
  std::size_t delay = 0;
  double doppler = 0.0;
  double sigma2 = 1.0;  // E|alpha|^2, kept for the power budget
};

using TargetSet = std::vector<Target>;

// Swerling-I draw: alpha ~ CN(0, sigma2[p]), delay ~ U{0..Q-1},
// doppler ~ U[-nu_max, nu_max].
TargetSet draw_targets(const SystemConfig& cfg, std::span<const double> sigma2,
                       double nu_max, std::uint64_t seed);

// Redraw only the gains, keeping delays and Dopplers.
void redraw_gains(TargetSet& targets, std::uint64_t seed);

// x[i] = sum_p alpha_p s[<i - l_p>] exp(j 2 pi nu_p (i - l_p) Ts) + w[i]
// with w ~ CN(0, sigma_w2). The block repeats circularly, which models a
// transmitter CP of at least max delay.
CVector apply_channel(std::span<const Complex> s, const TargetSet& targets, double Ts,
                      double sigma_w2, std::uint64_t seed);

// Unit conversions. Range uses the two-way delay, velocity the two-way Doppler.
double delay_to_range(double delay, const SystemConfig& cfg);
double range_to_delay(double range_m, const SystemConfig& cfg);
double doppler_to_velocity(double nu, const SystemConfig& cfg);
double velocity_to_doppler(double v_mps, const SystemConfig& cfg);
inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

}  // namespace otfs
