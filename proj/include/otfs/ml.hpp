#pragma once

#include <cstddef>
#include <vector>

#include "otfs/config.hpp"
#include "otfs/types.hpp"

namespace otfs {

// How the normalised projection (Hd)^H y / |Hd|^2 is turned into a score.
enum class MlScore { magnitude, real_part };

struct MlSearchConfig {
  std::size_t layers = 8;
  std::size_t grids_per_layer = 5;
  double base_span = 0.0;  // Hz over layer 0; 0 selects delta_f
  double shrink = 4.0;
  bool stop_on_miss = true;
  MlScore score = MlScore::magnitude;

  void validate() const;
};

struct MlSearchResult {
  double nu_hat = 0.0;
  std::size_t layers_run = 0;
  bool stopped = false;  // ended early on a miss
  std::vector<double> winners;  // accepted winner of each completed layer
};

// Velocity-only maximum likelihood search with the delay fixed to truth.
// The candidate response H(l, nu) d is produced by running the channel
// noise-free on the known transmit block and moving to delay-Doppler.
class MlBenchmark {
 public:
  MlBenchmark(const CMatrix& d, const SystemConfig& cfg);

  CMatrix response(std::size_t delay, double doppler) const;
  double metric(const CMatrix& y_dd, std::size_t delay, double doppler,
                MlScore score = MlScore::magnitude) const;

  // true_nu is used only by the early-stop rule of the simulation protocol:
  // when a layer's winner is not the grid point closest to the truth the
  // search ends there and reports that closest point.
  MlSearchResult search(const CMatrix& y_dd, std::size_t true_delay, double true_nu,
                        const MlSearchConfig& sc = {}) const;

 private:
  SystemConfig cfg_;
  CVector s_;
};

double ml_metric(const CMatrix& y_dd, std::size_t delay, double doppler, const CMatrix& d,
                 const SystemConfig& cfg, MlScore score = MlScore::magnitude);

double ml_velocity_search(const CMatrix& y_dd, std::size_t true_delay, double true_nu, const CMatrix& d,
                          const SystemConfig& cfg, const MlSearchConfig& sc = {});

}  // namespace otfs
