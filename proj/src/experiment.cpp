#include "otfs/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>

#include "otfs/frame.hpp"
#include "otfs/ml.hpp"
#include "otfs/preproc.hpp"
#include "otfs/random.hpp"

namespace otfs {

// --- scenario names --------------------------------------------------------

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_names() {
  static const std::vector<std::pair<Scenario, std::string>> names = {
      {Scenario::sweep_snr, "sweep_snr"},
      {Scenario::sweep_velocity, "sweep_velocity"},
      {Scenario::sweep_mtilde_power, "sweep_mtilde_power"},
      {Scenario::sweep_mtilde_mse, "sweep_mtilde_mse"},
      {Scenario::sweep_snr_multitarget, "sweep_snr_multitarget"},
      {Scenario::analyze, "analyze"},
      {Scenario::crlb, "crlb"},
      {Scenario::benchmark_ml, "benchmark_ml"},
  };
  return names;
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [k, v] : scenario_names())
    if (k == s) return v;
  return "?";
}

Scenario scenario_from_string(const std::string& s) {
  for (const auto& [k, v] : scenario_names())
    if (v == s) return k;
  throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

// --- config text -----------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(trim(v), &pos);
    if (pos != trim(v).size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw ConfigError(key, "integer out of range: '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_double(key, item));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

void set_target_key(TargetSpec& t, const std::string& key, const std::string& v) {
  const std::string k = "targets." + key;
  if (key == "mode") {
    const std::string m = trim(v);
    if (m == "fixed") t.random = false;
    else if (m == "random") t.random = true;
    else throw ConfigError(k, "expected fixed or random");
  } else if (key == "gain") {
    const std::string m = trim(v);
    if (m == "swerling1") t.gain = GainModel::swerling1;
    else if (m == "constant") t.gain = GainModel::constant;
    else throw ConfigError(k, "expected swerling1 or constant");
  } else if (key == "range_m") {
    t.range_m = parse_list(k, v);
  } else if (key == "velocity_kmh") {
    t.velocity_kmh = parse_list(k, v);
  } else if (key == "sigma2") {
    t.sigma2 = parse_list(k, v);
  } else if (key == "nu_max") {
    t.nu_max = parse_double(k, v);
  } else {
    throw ConfigError(k, "unknown key");
  }
}

void set_experiment_key(ExperimentSpec& e, const std::string& key, const std::string& v) {
  const std::string k = "experiment." + key;
  if (key == "scenario") {
    e.scenario = scenario_from_string(trim(v));
  } else if (key == "trials") {
    e.trials = parse_uint(k, v);
  } else if (key == "seed") {
    e.seed = parse_uint(k, v);
  } else if (key == "sweep") {
    e.sweep = parse_list(k, v);
  } else if (key == "snr_db") {
    e.snr_db = parse_double(k, v);
  } else if (key == "overrides") {
    e.overrides.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
      if (trim(item).empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError(k, "expected key=value items separated by ';'");
      e.overrides.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
  } else {
    throw ConfigError(k, "unknown key");
  }
}

void validate_setup(const Setup& s) {
  s.system.validate();
  if (s.experiment.trials == 0) throw ConfigError("experiment.trials", "must be >= 1");
  const auto& t = s.targets;
  for (double v : t.sigma2)
    if (!(v >= 0.0)) throw ConfigError("targets.sigma2", "must be non-negative");
  if (t.random && !(t.nu_max >= 0.0)) throw ConfigError("targets.nu_max", "must be non-negative");
  if (!t.random && (t.range_m.size() != t.velocity_kmh.size()))
    throw ConfigError("targets.range_m,targets.velocity_kmh", "lists differ in length");
}

}  // namespace

void set_system_key(SystemConfig& c, const std::string& key, const std::string& v) {
  if (key == "fc") c.fc = parse_double(key, v);
  else if (key == "B") c.B = parse_double(key, v);
  else if (key == "M") c.M = parse_uint(key, v);
  else if (key == "N") c.N = parse_uint(key, v);
  else if (key == "sigma_d2") c.sigma_d2 = parse_double(key, v);
  else if (key == "sigma_w2") c.sigma_w2 = parse_double(key, v);
  else if (key == "Q") c.Q = parse_uint(key, v);
  else if (key == "Mtilde") c.Mtilde = parse_uint(key, v);
  else if (key == "eps") c.eps = parse_double(key, v);
  else if (key == "N_iter") c.N_iter = parse_uint(key, v);
  else if (key == "P") c.P = parse_uint(key, v);
  else if (key == "constellation") c.constellation = constellation_from_string(trim(v));
  else if (key == "crlb_form") {
    const std::string t = trim(v);
    if (t == "printed") c.crlb_form = CrlbForm::printed;
    else if (t == "derived") c.crlb_form = CrlbForm::derived;
    else throw ConfigError(key, "expected printed or derived");
  } else {
    throw ConfigError(key, "unknown key");
  }
}

Setup parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  Setup s;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(section, "key outside of a section");
    for (const auto& [key, node] : body) {
      const std::string value = node.get_value<std::string>();
      if (section == "system") set_system_key(s.system, key, value);
      else if (section == "targets") set_target_key(s.targets, key, value);
      else if (section == "experiment") set_experiment_key(s.experiment, key, value);
      else throw ConfigError(section, "unknown section");
    }
    if (section != "system" && section != "targets" && section != "experiment")
      throw ConfigError(section, "unknown section");
  }
  validate_setup(s);
  return s;
}

Setup load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const Setup& s) {
  const auto& c = s.system;
  std::ostringstream o;
  o << "[system]\n"
    << "fc = " << fmt(c.fc) << "\n"
    << "B = " << fmt(c.B) << "\n"
    << "M = " << c.M << "\n"
    << "N = " << c.N << "\n"
    << "sigma_d2 = " << fmt(c.sigma_d2) << "\n"
    << "sigma_w2 = " << fmt(c.sigma_w2) << "\n"
    << "Q = " << c.Q << "\n"
    << "Mtilde = " << c.Mtilde << "\n"
    << "eps = " << fmt(c.eps) << "\n"
    << "N_iter = " << c.N_iter << "\n"
    << "P = " << c.P << "\n"
    << "constellation = " << to_string(c.constellation) << "\n"
    << "crlb_form = " << (c.crlb_form == CrlbForm::printed ? "printed" : "derived") << "\n\n";
  const auto& t = s.targets;
  o << "[targets]\n"
    << "mode = " << (t.random ? "random" : "fixed") << "\n"
    << "gain = " << (t.gain == GainModel::swerling1 ? "swerling1" : "constant") << "\n"
    << "range_m = " << fmt_list(t.range_m) << "\n"
    << "velocity_kmh = " << fmt_list(t.velocity_kmh) << "\n"
    << "sigma2 = " << fmt_list(t.sigma2) << "\n"
    << "nu_max = " << fmt(t.nu_max) << "\n\n";
  const auto& e = s.experiment;
  o << "[experiment]\n"
    << "scenario = " << to_string(e.scenario) << "\n"
    << "trials = " << e.trials << "\n"
    << "seed = " << e.seed << "\n"
    << "sweep = " << fmt_list(e.sweep) << "\n"
    << "snr_db = " << fmt(e.snr_db) << "\n";
  o << "overrides = ";
  for (std::size_t i = 0; i < e.overrides.size(); ++i)
    o << (i ? "; " : "") << e.overrides[i].first << "=" << e.overrides[i].second;
  o << "\n";
  return o.str();
}

// --- Monte Carlo building blocks ------------------------------------------

std::vector<double> target_powers(const SystemConfig& cfg, const TargetSpec& ts) {
  if (ts.sigma2.size() == cfg.P) return ts.sigma2;
  if (ts.sigma2.size() == 1) return std::vector<double>(cfg.P, ts.sigma2[0]);
  throw ConfigError("targets.sigma2", "needs one entry or P entries");
}

namespace {

void apply_gain_model(TargetSet& t, GainModel g, std::uint64_t seed) {
  if (g != GainModel::constant) return;
  std::mt19937_64 rng(mix_seed(seed, 7));
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  for (auto& x : t) x.alpha = std::polar(std::sqrt(x.sigma2), ph(rng));
}

}  // namespace

TargetSet make_targets(const SystemConfig& cfg, const TargetSpec& ts, std::uint64_t seed) {
  const std::vector<double> pw = target_powers(cfg, ts);
  if (ts.random) {
    TargetSet t = draw_targets(cfg, pw, ts.nu_max, seed);
    apply_gain_model(t, ts.gain, seed);
    return t;
  }
  if (ts.range_m.size() != cfg.P || ts.velocity_kmh.size() != cfg.P)
    throw ConfigError("targets.range_m,P", "fixed mode needs P ranges and velocities");
  TargetSet out(cfg.P);
  for (std::size_t p = 0; p < cfg.P; ++p) {
    const double l = std::round(range_to_delay(ts.range_m[p], cfg));
    // with Q = 0 only a zero-delay target is compatible with the fold
    if (l < 0.0 || l >= static_cast<double>(std::max<std::size_t>(cfg.Q, 1)))
      throw ConfigError("targets.range_m", "target delay falls outside [0, Q-1]");
    out[p].delay = static_cast<std::size_t>(l);
    out[p].doppler = velocity_to_doppler(kmh_to_mps(ts.velocity_kmh[p]), cfg);
    out[p].sigma2 = pw[p];
  }
  redraw_gains(out, seed);
  apply_gain_model(out, ts.gain, seed);
  return out;
}

double noise_for_snr(const SystemConfig& cfg, const TargetSpec& ts, double snr_db) {
  const double s0 = target_powers(cfg, ts).at(0);
  return s0 * std::pow(10.0, -snr_db / 10.0);
}

TrialOutcome run_trial(const SystemConfig& cfg, const TargetSpec& ts, std::uint64_t seed, bool with_ml) {
  TrialOutcome o;
  const CMatrix d = draw_symbols(cfg, mix_seed(seed, 0));
  const CVector s = modulate(d);
  o.truth = make_targets(cfg, ts, mix_seed(seed, 1));
  const CVector x = apply_channel(s, o.truth, cfg.Ts(), cfg.sigma_w2, mix_seed(seed, 2));
  o.est = estimate_targets(preprocess(x, s, cfg), cfg.P, cfg);
  if (with_ml) {
    const MlBenchmark ml(d, cfg);
    o.ml_nu = ml.search(demodulate(x, cfg.M, cfg.N), o.truth[0].delay, o.truth[0].doppler).nu_hat;
  }
  return o;
}

SquaredErrors score_trial(const SystemConfig& cfg, const TargetSet& truth, const EstimateList& est) {
  SquaredErrors out;
  const std::size_t P = std::min(truth.size(), est.size());
  if (P == 0) return out;
  const double bin = static_cast<double>(cfg.Ntilde()) * cfg.Mtilde * cfg.Ts();
  std::vector<std::size_t> perm(est.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      const double dl = est[perm[p]].l_hat - static_cast<double>(truth[p].delay);
      const double dn = (est[perm[p]].nu_hat - truth[p].doppler) * bin;
      c += dl * dl + dn * dn;
    }
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (est.size() <= 8 && std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t p = 0; p < P; ++p) {
    const double dv = est[best[p]].v_hat - doppler_to_velocity(truth[p].doppler, cfg);
    const double dr = est[best[p]].r_hat - delay_to_range(static_cast<double>(truth[p].delay), cfg);
    out.v += dv * dv;
    out.r += dr * dr;
  }
  out.count = P;
  return out;
}

PowerSample measure_powers(const SystemConfig& cfg, const TargetSpec& ts, std::uint64_t seed) {
  const CMatrix d = draw_symbols(cfg, mix_seed(seed, 0));
  const CVector s = modulate(d);
  TargetSet targets = make_targets(cfg, ts, mix_seed(seed, 1));

  const std::size_t Mt = cfg.Mtilde, Mb = cfg.Mbar(), Nt = cfg.Ntilde();
  // the same block with every sample outside the essential segments removed:
  // its echo carries the signal and carrier interference but no
  // inter-sub-block leakage
  CVector s_ess = s;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i / Mt >= Nt || i % Mt >= Mb) s_ess[i] = 0.0;

  const CVector x_full = apply_channel(s, targets, cfg.Ts(), 0.0, 0);
  const CVector x_ess = apply_channel(s_ess, targets, cfg.Ts(), 0.0, 0);
  const CVector w = apply_channel(s, {}, cfg.Ts(), cfg.sigma_w2, mix_seed(seed, 2));

  const double k = choose_k(cfg.sigma_d2, cfg.epsilon());
  const CMatrix ref = reference_blocks(s, cfg);
  auto pre = [&](const CVector& x) { return remove_symbols(add_vcp(segment(x, cfg), cfg.Q), ref, k); };
  const PreprocOutput pf = pre(x_full), pe = pre(x_ess), pw = pre(w);
  const Mask& mask = pe.mask;

  std::size_t unmasked = 0;
  for (auto v : mask.storage()) unmasked += v;

  // coherent target terms, fitted on the unmasked bins
  CMatrix model(Nt, Mb);
  PowerSample out;
  for (const auto& t : targets) {
    CVector lph(Mb), nph(Nt);
    for (std::size_t l = 0; l < Mb; ++l)
      lph[l] = std::polar(1.0, -2.0 * kPi * static_cast<double>(l * t.delay) / static_cast<double>(Mb));
    for (std::size_t n = 0; n < Nt; ++n)
      nph[n] = std::polar(1.0, 2.0 * kPi * t.doppler * static_cast<double>(n * Mt) * cfg.Ts());
    Complex c = 0.0;
    for (std::size_t n = 0; n < Nt; ++n)
      for (std::size_t l = 0; l < Mb; ++l)
        if (mask(n, l)) c += pe.Xt(n, l) * std::conj(lph[l] * nph[n]);
    c /= static_cast<double>(std::max<std::size_t>(unmasked, 1));
    out.S += std::norm(c);
    for (std::size_t n = 0; n < Nt; ++n)
      for (std::size_t l = 0; l < Mb; ++l)
        if (mask(n, l)) model(n, l) += c * lph[l] * nph[n];
  }

  const double bins = static_cast<double>(Nt * Mb);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Complex e = pe.Xt.data()[i], f = pf.Xt.data()[i], n = pw.Xt.data()[i], m = model.data()[i];
    out.I += std::norm(e - m);
    out.Z += std::norm(f - e);
    out.W += std::norm(n);
    out.total += std::norm(f + n - m);
  }
  out.I /= bins;
  out.Z /= bins;
  out.W /= bins;
  out.total /= bins;

  std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) { return a.delay < b.delay; });
  std::vector<double> pw2, nu;
  for (const auto& t : targets) {
    pw2.push_back(t.sigma2);
    nu.push_back(t.doppler);
  }
  const double a = curvature_a(cfg.Ts(), pw2, nu);
  const double imin = targets.empty() ? 0.0 : static_cast<double>(targets.front().delay);
  const double imax = targets.empty() ? 0.0 : static_cast<double>(targets.back().delay);
  out.theory = power_budget(cfg, a, pw2, imin, imax);
  out.bound = power_budget(cfg, a, pw2);
  return out;
}

// --- scenario drivers -----------------------------------------------------

namespace {

// Runs fn(seed + t) for every trial in parallel; results come back in trial
// order so any later reduction is independent of the thread count.
template <typename F>
auto run_trials(std::size_t trials, std::uint64_t seed, F&& fn) {
  using R = decltype(fn(seed));
  std::vector<R> out(trials);
  std::exception_ptr err;
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    try {
      out[t] = fn(seed + static_cast<std::uint64_t>(t));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

double target_a(const SystemConfig& cfg, const TargetSpec& ts) {
  const std::vector<double> pw = target_powers(cfg, ts);
  if (ts.random) return curvature_a_uniform(cfg.Ts(), std::accumulate(pw.begin(), pw.end(), 0.0), ts.nu_max);
  std::vector<double> nu;
  for (double v : ts.velocity_kmh) nu.push_back(velocity_to_doppler(kmh_to_mps(v), cfg));
  return curvature_a(cfg.Ts(), pw, nu);
}

std::vector<double> default_sweep(Scenario sc, const SystemConfig& cfg) {
  switch (sc) {
    case Scenario::sweep_velocity: return {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
    case Scenario::sweep_mtilde_power:
    case Scenario::sweep_mtilde_mse: return {100, 200, 500, 900, 1300};
    case Scenario::analyze: return {static_cast<double>(cfg.Q)};
    default: return {-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10};
  }
}

struct Emitter {
  std::vector<ResultRow>& rows;
  std::size_t trials;
  std::uint64_t seed;
  void operator()(double sweep, const std::string& metric, double value) const {
    rows.push_back({sweep, metric, value, trials, seed});
  }
};

void mse_rows(const Emitter& emit, double x, const SystemConfig& cfg, const TargetSpec& ts,
              const ExperimentSpec& e, bool with_ml) {
  const auto outs = run_trials(e.trials, e.seed, [&](std::uint64_t sd) { return run_trial(cfg, ts, sd, with_ml); });
  double sv = 0.0, sr = 0.0, sml = 0.0;
  std::size_t cnt = 0, clamped = 0, total = 0;
  for (const auto& o : outs) {
    const SquaredErrors se = score_trial(cfg, o.truth, o.est);
    sv += se.v;
    sr += se.r;
    cnt += se.count;
    for (const auto& est : o.est) {
      clamped += est.clamped;
      ++total;
    }
    if (with_ml) {
      const double dv = doppler_to_velocity(o.ml_nu - o.truth[0].doppler, cfg);
      sml += dv * dv;
    }
  }
  emit(x, "mse_v", sv / static_cast<double>(cnt));
  emit(x, "mse_r", sr / static_cast<double>(cnt));
  emit(x, "clamp_rate", static_cast<double>(clamped) / static_cast<double>(total));
  if (with_ml) emit(x, "mse_v_ml", sml / static_cast<double>(outs.size()));
}

}  // namespace

std::vector<ResultRow> run(const Setup& setup) {
  SystemConfig cfg = setup.system;
  for (const auto& [k, v] : setup.experiment.overrides) set_system_key(cfg, k, v);
  cfg.validate();
  const ExperimentSpec& e = setup.experiment;
  if (e.trials == 0) throw ConfigError("experiment.trials", "must be >= 1");
  TargetSpec ts = setup.targets;
  const std::vector<double> sweep = e.sweep.empty() ? default_sweep(e.scenario, cfg) : e.sweep;

  std::vector<ResultRow> rows;
  const Emitter emit{rows, e.trials, e.seed};

  switch (e.scenario) {
    case Scenario::sweep_snr:
    case Scenario::benchmark_ml:
    case Scenario::sweep_snr_multitarget: {
      const bool ml = e.scenario == Scenario::benchmark_ml;
      if (ml && cfg.P != 1) throw ConfigError("P", "the ML benchmark is single-target");
      if (e.scenario == Scenario::sweep_snr_multitarget && cfg.P < 2)
        throw ConfigError("P", "multitarget scenario needs P >= 2");
      for (double snr : sweep) {
        cfg.sigma_w2 = noise_for_snr(cfg, ts, snr);
        mse_rows(emit, snr, cfg, ts, e, ml);
        if (e.scenario != Scenario::sweep_snr_multitarget) {
          const double g0 = std::pow(10.0, snr / 10.0);
          emit(snr, "crlb_v", crlb_velocity(cfg, g0, CrlbForm::printed));
          emit(snr, "crlb_v_derived", crlb_velocity(cfg, g0, CrlbForm::derived));
        }
      }
      break;
    }
    case Scenario::sweep_velocity: {
      if (ts.random) throw ConfigError("targets.mode", "velocity sweep needs fixed targets");
      cfg.sigma_w2 = noise_for_snr(cfg, ts, e.snr_db);
      for (double v : sweep) {
        for (auto& tv : ts.velocity_kmh) tv = v;
        mse_rows(emit, v, cfg, ts, e, false);
      }
      break;
    }
    case Scenario::sweep_mtilde_power: {
      cfg.sigma_w2 = ts.random ? cfg.sigma_w2 : noise_for_snr(cfg, ts, e.snr_db);
      for (double mt : sweep) {
        cfg.Mtilde = static_cast<std::size_t>(mt);
        cfg.validate();
        const auto outs =
            run_trials(e.trials, e.seed, [&](std::uint64_t sd) { return measure_powers(cfg, ts, sd); });
        PowerSample avg;
        double tS = 0, tI = 0, tZ = 0, tW = 0, bZ = 0;
        for (const auto& o : outs) {
          avg.S += o.S;
          avg.I += o.I;
          avg.Z += o.Z;
          avg.W += o.W;
          avg.total += o.total;
          tS += o.theory.sigma_S2;
          tI += o.theory.sigma_I2;
          tZ += o.theory.sigma_Z2;
          tW += o.theory.sigma_W2;
          bZ += o.bound.sigma_Z2;
        }
        const double n = static_cast<double>(outs.size());
        emit(mt, "sim_sigma_S2", avg.S / n);
        emit(mt, "sim_sigma_I2", avg.I / n);
        emit(mt, "sim_sigma_Z2", avg.Z / n);
        emit(mt, "sim_sigma_W2", avg.W / n);
        emit(mt, "sim_interference", avg.total / n);
        emit(mt, "theory_sigma_S2", tS / n);
        emit(mt, "theory_sigma_I2", tI / n);
        emit(mt, "theory_sigma_Z2", tZ / n);
        emit(mt, "theory_sigma_W2", tW / n);
        emit(mt, "theory_interference", (tI + tZ + tW) / n);
        emit(mt, "bound_sigma_Z2", bZ / n);
      }
      break;
    }
    case Scenario::sweep_mtilde_mse: {
      cfg.sigma_w2 = ts.random ? cfg.sigma_w2 : noise_for_snr(cfg, ts, e.snr_db);
      const double a = target_a(cfg, ts);
      const std::vector<double> pw = target_powers(cfg, ts);
      for (double mt : sweep) {
        cfg.Mtilde = static_cast<std::size_t>(mt);
        cfg.validate();
        mse_rows(emit, mt, cfg, ts, e, false);
        emit(mt, "theory_gamma_db", 10.0 * std::log10(power_budget(cfg, a, pw).gamma));
      }
      const OptimalSubBlock o = opt_Mbar(cfg, a, std::accumulate(pw.begin(), pw.end(), 0.0));
      emit(0.0, "mtilde_opt", static_cast<double>(o.Mtilde_opt));
      break;
    }
    case Scenario::analyze: {
      for (double q : sweep) {
        SystemConfig c = cfg;
        c.Q = static_cast<std::size_t>(q);
        if (c.Mtilde <= c.Q + 1) c.Mtilde = c.Q + 2;
        const double a = target_a(c, ts);
        const std::vector<double> pw = target_powers(c, ts);
        const OptimalSubBlock o = opt_Mbar(c, a, std::accumulate(pw.begin(), pw.end(), 0.0));
        emit(q, "Mbar_f", o.Mbar_f);
        emit(q, "Mbar_g", o.Mbar_g);
        emit(q, "Mbar_joint", o.Mbar_joint);
        emit(q, "Mbar_f_exact", o.Mbar_f_exact);
        emit(q, "Mtilde_opt", static_cast<double>(o.Mtilde_opt));
        emit(q, "Ntilde_opt", static_cast<double>(o.Ntilde_opt));
        const std::size_t hi = std::min<std::size_t>(c.block_len(), 4000);
        const SinrCurve curve = sinr_curve(c, a, pw, c.Q + 2, hi, 1);
        emit(q, "sinr_argmax_Mtilde", static_cast<double>(curve.points[curve.argmax].Mtilde));
        emit(q, "sinr_max_db", curve.points[curve.argmax].gamma_db);
      }
      break;
    }
    case Scenario::crlb: {
      for (double snr : sweep) {
        const double g0 = std::pow(10.0, snr / 10.0);
        emit(snr, "crlb_v", crlb_velocity(cfg, g0, CrlbForm::printed));
        emit(snr, "crlb_v_derived", crlb_velocity(cfg, g0, CrlbForm::derived));
      }
      break;
    }
  }
  return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "sweep,metric,value,trials,seed\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%zu,%llu\n", r.sweep, r.metric.c_str(), r.value, r.trials,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) { os << format_csv(rows); }

}  // namespace otfs
