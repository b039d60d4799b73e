#include "otfs/sinr.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "otfs/preproc.hpp"
#include "otfs/types.hpp"

namespace otfs {

double b_of_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("b_of_eps: eps must lie in (0, 1)");
  return 2.0 * (std::log(2.0 * (1.0 - eps) / std::sqrt(eps * (2.0 - eps))) - 1.0);
}

double curvature_a(double Ts, std::span<const double> sigma2, std::span<const double> nu) {
  if (sigma2.size() != nu.size()) throw std::invalid_argument("curvature_a: size mismatch");
  double s = 0.0;
  for (std::size_t p = 0; p < nu.size(); ++p) s += sigma2[p] * nu[p] * nu[p];
  return kPi * kPi * Ts * Ts / 3.0 * s;
}

double curvature_a_uniform(double Ts, double sigma_P2, double nu_max) {
  return kPi * kPi * Ts * Ts / 3.0 * sigma_P2 * nu_max * nu_max / 3.0;
}

PowerBudget power_budget(const SystemConfig& cfg, double a, std::span<const double> sigma2,
                         double i_min, double i_max) {
  PowerBudget pb;
  const double eps = cfg.epsilon();
  pb.a = a;
  pb.b = b_of_eps(eps);
  pb.k = choose_k(cfg.sigma_d2, eps);
  pb.sigma_P2 = std::accumulate(sigma2.begin(), sigma2.end(), 0.0);
  const double k2 = pb.k * pb.k;
  const double Mb = static_cast<double>(cfg.Mbar());
  const double Nt = static_cast<double>(cfg.Ntilde());
  const double Q = static_cast<double>(cfg.Q);
  const std::size_t P = sigma2.size();

  pb.sigma_W2 = pb.b * cfg.sigma_w2 / (k2 * cfg.sigma_d2);
  if (P == 0) {
    pb.valid = pb.b > 0.0;
    return pb;
  }
  pb.sigma_S2 = (pb.sigma_P2 + a - a * Mb * Mb) / k2;
  pb.sigma_I2 = pb.b * (a * Mb * Mb - a) / k2;
  double head = 0.0, tail = 0.0;
  for (std::size_t p = 0; p < P; ++p) {
    head += static_cast<double>(p + 1) * sigma2[p];
    tail += static_cast<double>(P - p) * sigma2[p];
  }
  pb.sigma_Z2 = pb.b * (i_max * head + (Q - i_min) * tail) / (k2 * static_cast<double>(P) * Mb);
  pb.gamma = Mb * Nt * pb.sigma_S2 / pb.interference();
  pb.valid = pb.sigma_S2 >= 0.0 && pb.b > 0.0;
  return pb;
}

PowerBudget power_budget(const SystemConfig& cfg, double a, std::span<const double> sigma2) {
  return power_budget(cfg, a, sigma2, 0.0, static_cast<double>(cfg.Q));
}

OptimalSubBlock opt_Mbar(const SystemConfig& cfg, double a, double sigma_P2) {
  if (cfg.Q == 0) throw std::invalid_argument("opt_Mbar: Q must be >= 1");
  OptimalSubBlock o;
  const std::size_t MN = cfg.block_len();
  if (!(a > 0.0)) {
    o.interior = false;
    o.Mtilde_opt = MN;
    o.Ntilde_opt = 1;
    return o;
  }
  const double Q = static_cast<double>(cfg.Q);
  const double P = static_cast<double>(cfg.P);
  o.Mbar_f = std::cbrt((Q * a + Q * sigma_P2) / (2.0 * a));
  o.Mbar_g = std::cbrt(Q * (P + 1.0) * sigma_P2 / (2.0 * a * P));
  o.Mbar_joint = std::cbrt(Q * sigma_P2 / (2.0 * a));

  // 2 a M^3 + 3 Q a M^2 - Q a - Q sigma_P^2 = 0 has one positive root;
  // the left side is increasing for M > 0, so bisect.
  auto h = [&](double m) { return 2.0 * a * m * m * m + 3.0 * Q * a * m * m - Q * a - Q * sigma_P2; };
  double lo = 0.0, hi = std::max(1.0, o.Mbar_f);
  while (h(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  o.Mbar_f_exact = 0.5 * (lo + hi);

  const double mt = std::round(o.Mbar_joint + Q);
  o.Mtilde_opt = std::max<std::size_t>(static_cast<std::size_t>(mt), cfg.Q + 2);
  o.Mtilde_opt = std::min(o.Mtilde_opt, MN);
  o.Ntilde_opt = MN / o.Mtilde_opt;
  return o;
}

double sinr_numerator(const SystemConfig& cfg, double a, double sigma_P2, double Mbar) {
  const double k = choose_k(cfg.sigma_d2, cfg.epsilon());
  const double Nt = static_cast<double>(cfg.block_len()) / (Mbar + static_cast<double>(cfg.Q));
  return Mbar * Nt * (sigma_P2 + a - a * Mbar * Mbar) / (k * k);
}

double sinr_denominator(const SystemConfig& cfg, double a, double sigma_P2, double Mbar) {
  const double eps = cfg.epsilon();
  const double k = choose_k(cfg.sigma_d2, eps);
  const double b = b_of_eps(eps);
  const double Q = static_cast<double>(cfg.Q);
  const double P = static_cast<double>(cfg.P);
  return b / (k * k) *
         (a * Mbar * Mbar - a + Q * (P + 1.0) * sigma_P2 / (Mbar * P) + cfg.sigma_w2 / cfg.sigma_d2);
}

double crlb_velocity(const SystemConfig& cfg, double gamma0) {
  return crlb_velocity(cfg, gamma0, cfg.crlb_form);
}

double crlb_velocity(const SystemConfig& cfg, double gamma0, CrlbForm form) {
  if (!(gamma0 > 0.0)) throw std::invalid_argument("crlb_velocity: gamma0 must be positive");
  const double lambda = cfg.lambda();
  const double Nt = static_cast<double>(cfg.Ntilde());
  const double Mb = static_cast<double>(cfg.Mbar());
  const double span = Nt * static_cast<double>(cfg.Mtilde) * cfg.Ts();
  const double b = b_of_eps(cfg.epsilon());
  const double pi_pow = form == CrlbForm::printed ? std::pow(kPi, 4) : kPi * kPi;
  return lambda * lambda / 4.0 / (span * span) * 6.0 / (4.0 * pi_pow * Nt * Mb * gamma0 / b);
}

SinrCurve sinr_curve(SystemConfig cfg, double a, std::span<const double> sigma2, std::size_t lo,
                     std::size_t hi, std::size_t step) {
  if (step == 0 || lo > hi) throw std::invalid_argument("sinr_curve: bad sweep bounds");
  if (lo < cfg.Q + 2) throw std::invalid_argument("sinr_curve: Mtilde below Q + 2");
  if (hi > cfg.block_len()) throw std::invalid_argument("sinr_curve: Mtilde above MN");
  SinrCurve c;
  for (std::size_t mt = lo; mt <= hi; mt += step) {
    cfg.Mtilde = mt;
    const PowerBudget pb = power_budget(cfg, a, sigma2);
    SinrPoint pt;
    pt.Mtilde = mt;
    pt.gamma = pb.gamma;
    pt.gamma_db = 10.0 * std::log10(pb.gamma);
    if (c.points.empty() || pt.gamma > c.points[c.argmax].gamma) c.argmax = c.points.size();
    c.points.push_back(pt);
  }
  return c;
}

}  // namespace otfs
