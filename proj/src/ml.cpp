#include "otfs/ml.hpp"

#include <cmath>
#include <stdexcept>

#include "otfs/channel.hpp"
#include "otfs/frame.hpp"

namespace otfs {

void MlSearchConfig::validate() const {
  if (layers < 1) throw std::invalid_argument("MlSearchConfig: layers must be >= 1");
  if (grids_per_layer < 2) throw std::invalid_argument("MlSearchConfig: need at least 2 grid points");
  if (!(shrink > 1.0)) throw std::invalid_argument("MlSearchConfig: shrink must exceed 1");
  if (base_span < 0.0) throw std::invalid_argument("MlSearchConfig: negative span");
}

MlBenchmark::MlBenchmark(const CMatrix& d, const SystemConfig& cfg) : cfg_(cfg) {
  if (d.rows() != cfg.N || d.cols() != cfg.M) throw std::invalid_argument("MlBenchmark: symbol grid is not N x M");
  s_ = modulate(d);
}

CMatrix MlBenchmark::response(std::size_t delay, double doppler) const {
  Target t;
  t.delay = delay;
  t.doppler = doppler;
  const CVector x = apply_channel(s_, {t}, cfg_.Ts(), 0.0, 0);
  return demodulate(x, cfg_.M, cfg_.N);
}

double MlBenchmark::metric(const CMatrix& y_dd, std::size_t delay, double doppler, MlScore score) const {
  if (y_dd.rows() != cfg_.N || y_dd.cols() != cfg_.M) throw std::invalid_argument("ml_metric: y is not N x M");
  const CMatrix h = response(delay, doppler);
  const double e = energy(h);
  if (e == 0.0) throw std::domain_error("ml_metric: zero-energy response");
  Complex proj = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) proj += std::conj(h.data()[i]) * y_dd.data()[i];
  proj /= e;
  return score == MlScore::magnitude ? std::abs(proj) : proj.real();
}

MlSearchResult MlBenchmark::search(const CMatrix& y_dd, std::size_t true_delay, double true_nu,
                                   const MlSearchConfig& sc) const {
  sc.validate();
  const std::size_t G = sc.grids_per_layer;
  const double base = sc.base_span > 0.0 ? sc.base_span : cfg_.delta_f();
  MlSearchResult r;
  double centre = 0.0;
  std::vector<double> grid(G), score(G);
  for (std::size_t layer = 0; layer < sc.layers; ++layer) {
    const double span = base / std::pow(sc.shrink, static_cast<double>(layer));
    const double step = span / static_cast<double>(G - 1);
    for (std::size_t g = 0; g < G; ++g) {
      // layer 0 starts at zero Doppler; later layers are centred on the last winner
      grid[g] = layer == 0 ? static_cast<double>(g) * step
                           : centre + (static_cast<double>(g) - static_cast<double>(G - 1) / 2.0) * step;
    }
    const auto Gi = static_cast<std::ptrdiff_t>(G);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t g = 0; g < Gi; ++g) score[g] = metric(y_dd, true_delay, grid[g], sc.score);

    std::size_t win = 0, near = 0;
    for (std::size_t g = 1; g < G; ++g) {
      if (score[g] > score[win]) win = g;
      if (std::abs(grid[g] - true_nu) < std::abs(grid[near] - true_nu)) near = g;
    }
    ++r.layers_run;
    if (sc.stop_on_miss && win != near) {
      r.stopped = true;
      r.nu_hat = grid[near];
      return r;
    }
    centre = grid[win];
    r.winners.push_back(centre);
  }
  r.nu_hat = centre;
  return r;
}

double ml_metric(const CMatrix& y_dd, std::size_t delay, double doppler, const CMatrix& d,
                 const SystemConfig& cfg, MlScore score) {
  return MlBenchmark(d, cfg).metric(y_dd, delay, doppler, score);
}

double ml_velocity_search(const CMatrix& y_dd, std::size_t true_delay, double true_nu, const CMatrix& d,
                          const SystemConfig& cfg, const MlSearchConfig& sc) {
  return MlBenchmark(d, cfg).search(y_dd, true_delay, true_nu, sc).nu_hat;
}

}  // namespace otfs
