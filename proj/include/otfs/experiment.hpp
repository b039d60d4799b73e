#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/config.hpp"
#include "otfs/estimator.hpp"
#include "otfs/sinr.hpp"

namespace otfs {

enum class Scenario {
  sweep_snr,
  sweep_velocity,
  sweep_mtilde_power,
  sweep_mtilde_mse,
  sweep_snr_multitarget,
  analyze,
  crlb,
  benchmark_ml
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

// Either fixed targets given by range and velocity, or the random
// population drawn every trial (uniform delay on [0, Q-1], uniform Doppler
// on [-nu_max, nu_max]).
enum class GainModel {
  swerling1,  // alpha ~ CN(0, sigma2), redrawn every trial
  constant    // |alpha|^2 = sigma2 with a uniform random phase
};

struct TargetSpec {
  bool random = false;
  GainModel gain = GainModel::swerling1;
  std::vector<double> range_m{30.0};
  std::vector<double> velocity_kmh{80.0};
  std::vector<double> sigma2{1.0};
  double nu_max = 0.0;

  bool operator==(const TargetSpec&) const = default;
};

struct ExperimentSpec {
  Scenario scenario = Scenario::sweep_snr;
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  std::vector<double> sweep;  // empty selects the scenario default
  double snr_db = 10.0;       // operating point for sweeps that are not over SNR
  std::vector<std::pair<std::string, std::string>> overrides;  // applied onto [system]

  bool operator==(const ExperimentSpec&) const = default;
};

struct Setup {
  SystemConfig system;
  TargetSpec targets;
  ExperimentSpec experiment;

  bool operator==(const Setup&) const = default;
};

struct ResultRow {
  double sweep = 0.0;
  std::string metric;
  double value = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

// Flat key = value text with [system], [targets] and [experiment]
// sections. Unknown keys and malformed values throw ConfigError.
Setup parse_config(const std::string& text);
Setup load_config(const std::string& path);
std::string dump_config(const Setup& s);
void set_system_key(SystemConfig& cfg, const std::string& key, const std::string& value);

// --- Monte Carlo building blocks -----------------------------------------

std::vector<double> target_powers(const SystemConfig& cfg, const TargetSpec& ts);
TargetSet make_targets(const SystemConfig& cfg, const TargetSpec& ts, std::uint64_t seed);
// sigma_w2 for input SNR gamma0 = sigma_0^2 / sigma_w2, sigma_0^2 the first target power.
double noise_for_snr(const SystemConfig& cfg, const TargetSpec& ts, double snr_db);

struct TrialOutcome {
  TargetSet truth;
  EstimateList est;
  double ml_nu = std::numeric_limits<double>::quiet_NaN();
};

TrialOutcome run_trial(const SystemConfig& cfg, const TargetSpec& ts, std::uint64_t seed, bool with_ml);

struct SquaredErrors {
  double v = 0.0;  // [m^2/s^2], summed over targets
  double r = 0.0;  // [m^2]
  std::size_t count = 0;
};

// Pairs estimates with targets by the cheapest assignment in bin units.
SquaredErrors score_trial(const SystemConfig& cfg, const TargetSet& truth, const EstimateList& est);

// Per-bin powers of the components of the symbol-free grid for one trial,
// separated by linearity, next to the closed-form values for the same
// delays.
struct PowerSample {
  double S = 0.0, I = 0.0, Z = 0.0, W = 0.0;
  double total = 0.0;  // everything except the coherent target terms
  PowerBudget theory;  // general form with this trial's delay extremes
  PowerBudget bound;   // i_min = 0, i_max = Q
};

PowerSample measure_powers(const SystemConfig& cfg, const TargetSpec& ts, std::uint64_t seed);

std::vector<ResultRow> run(const Setup& s);
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::string format_csv(const std::vector<ResultRow>& rows);

}  // namespace otfs
