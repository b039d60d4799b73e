// otfs-sense: run one Monte Carlo scenario and write the results as CSV.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "otfs/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"OTFS sensing simulator"};
  std::string scenario, config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::vector<std::string> sets;
  bool dump = false;
  app.add_option("scenario", scenario, "sweep_snr | sweep_velocity | sweep_mtilde_power | sweep_mtilde_mse | "
                                        "sweep_snr_multitarget | analyze | crlb | benchmark_ml")
      ->required();
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--seed", seed, "base seed, trial t uses seed + t");
  app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_option("--set", sets, "override a [system] key, e.g. --set Q=30");
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  otfs::Setup setup;
  try {
    setup = otfs::load_config(config_path);
    const otfs::Scenario chosen = otfs::scenario_from_string(scenario);
    // a sweep list belongs to the scenario named in the file
    if (chosen != setup.experiment.scenario) setup.experiment.sweep.clear();
    setup.experiment.scenario = chosen;
    if (seed) setup.experiment.seed = *seed;
    if (trials) setup.experiment.trials = *trials;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw otfs::ConfigError("--set", "expected key=value, got '" + s + "'");
      otfs::set_system_key(setup.system, s.substr(0, eq), s.substr(eq + 1));
    }
    setup.system.validate();
    if (setup.experiment.trials == 0) throw otfs::ConfigError("trials", "must be >= 1");
  } catch (const otfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  if (dump) {
    std::cout << otfs::dump_config(setup);
    return 0;
  }

  try {
    const auto rows = otfs::run(setup);
    if (out_path.empty()) {
      otfs::write_csv(std::cout, rows);
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
      otfs::write_csv(f, rows);
    }
  } catch (const otfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
