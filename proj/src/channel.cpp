#include "otfs/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "otfs/kernels.hpp"
#include "otfs/random.hpp"

namespace otfs {

TargetSet draw_targets(const SystemConfig& cfg, std::span<const double> sigma2, double nu_max,
                       std::uint64_t seed) {
  if (cfg.Q == 0) throw std::invalid_argument("draw_targets: Q must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> delay(0, cfg.Q - 1);
  std::uniform_real_distribution<double> nu(-nu_max, nu_max);
  TargetSet out;
  for (double s2 : sigma2) {
    if (s2 < 0.0) throw std::invalid_argument("draw_targets: negative target power");
    Target t;
    t.sigma2 = s2;
    t.delay = delay(rng);
    t.doppler = nu_max > 0.0 ? nu(rng) : 0.0;
    t.alpha = complex_normal(rng, s2);
    out.push_back(t);
  }
  return out;
}

void redraw_gains(TargetSet& targets, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& t : targets) t.alpha = complex_normal(rng, t.sigma2);
}

CVector apply_channel(std::span<const Complex> s, const TargetSet& targets, double Ts,
                      double sigma_w2, std::uint64_t seed) {
  if (s.empty()) throw std::invalid_argument("apply_channel: empty waveform");
  if (sigma_w2 < 0.0) throw std::invalid_argument("apply_channel: negative noise power");
  for (const auto& t : targets)
    if (t.delay >= s.size()) throw std::invalid_argument("apply_channel: delay exceeds block length");
  CVector x(s.size());
  if (sigma_w2 > 0.0) {
    std::mt19937_64 rng(seed);
    for (auto& v : x) v = complex_normal(rng, sigma_w2);
  }
  kernels::accumulate_echo(s, targets, Ts, x);
  return x;
}

double delay_to_range(double delay, const SystemConfig& cfg) {
  return delay * cfg.Ts() * kSpeedOfLight / 2.0;
}

double range_to_delay(double range_m, const SystemConfig& cfg) {
  return 2.0 * range_m / (kSpeedOfLight * cfg.Ts());
}

double doppler_to_velocity(double nu, const SystemConfig& cfg) { return nu * cfg.lambda() / 2.0; }

double velocity_to_doppler(double v_mps, const SystemConfig& cfg) {
  return 2.0 * v_mps / cfg.lambda();
}

}  // namespace otfs
