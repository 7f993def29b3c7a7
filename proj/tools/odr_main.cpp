// Command-line front end: emits BER curve data as CSV, runs configured
// Monte Carlo experiments, TES histograms, and phase-lock simulations.
//
// Exit codes: 0 success, 2 config/usage error, 3 numeric failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "odr/bounds.hpp"
#include "odr/errors.hpp"
#include "odr/mc.hpp"
#include "odr/model.hpp"
#include "odr/phaselock.hpp"
#include "odr/tes.hpp"

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw odr::ValidationError("cannot open '" + path + "' for writing");
  return out;
}

odr::RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw odr::ValidationError("cannot read config '" + path + "'");
  return odr::parse_run_config(in);
}

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool no_timestamp = false;
  unsigned threads = 0;
};

void apply_overrides(odr::RunConfig& cfg, const GlobalOpts& g) {
  if (g.seed_set) cfg.seed = g.seed;
}

// ---------------------------------------------------------------------
// curves

struct CurveSpec {
  double lo = 0.01;
  double hi = 3.0;
  int steps = 300;
  bool log_spacing = false;
  std::vector<std::string> curves = {"ql_bpsk", "ql_ook", "sql",    "sql_eta",
                                     "odr_ideal", "odr_model", "kennedy"};
  odr::ImperfectionModel model{0.91, 0.003, 0.993, 0.0};
};

double curve_value(const std::string& name, double alpha_sq,
                   const odr::ImperfectionModel& m) {
  const double alpha = std::sqrt(alpha_sq);
  const odr::SignalModel s = odr::SignalModel::bpsk(alpha);
  if (name == "ql_bpsk") return odr::helstrom_bpsk_ber(alpha).ber;
  if (name == "ql_ook") return odr::helstrom_ook_ber(alpha_sq).ber;
  if (name == "sql") return odr::sql_homodyne_ber(alpha, 1.0).ber;
  if (name == "sql_eta") return odr::sql_homodyne_ber(alpha, m.eta).ber;
  if (name == "kennedy") return odr::kennedy_ber(alpha).ber;
  if (name == "odr_ideal")
    return odr::odr_ber(s, odr::optimal_beta_ideal(alpha),
                        odr::ImperfectionModel::identity())
        .ber;
  if (name == "odr_model") return odr::optimal_beta_model(s, m).second.ber;
  throw odr::ValidationError("unknown curve '" + name + "'");
}

int cmd_curves(const CurveSpec& spec, const std::string& out_path) {
  if (!(spec.lo < spec.hi))
    throw odr::ValidationError("curve range requires lo < hi");
  if (spec.steps < 2) throw odr::ValidationError("steps out of [2,inf)");
  if (spec.log_spacing && !(spec.lo > 0.0))
    throw odr::ValidationError("log spacing requires lo > 0");
  for (const auto& name : spec.curves) curve_value(name, 0.25, spec.model);

  std::ofstream out = open_output(out_path);
  out << "alpha_sq";
  for (const auto& name : spec.curves) out << ',' << name;
  out << '\n';
  for (int i = 0; i < spec.steps; ++i) {
    const double t = static_cast<double>(i) / (spec.steps - 1);
    const double alpha_sq =
        spec.log_spacing
            ? spec.lo * std::pow(spec.hi / spec.lo, t)
            : spec.lo + t * (spec.hi - spec.lo);
    out << fmt_double(alpha_sq);
    for (const auto& name : spec.curves)
      out << ',' << fmt_double(curve_value(name, alpha_sq, spec.model));
    out << '\n';
  }
  std::cout << "curves: " << spec.steps << " rows, " << spec.curves.size()
            << " curves -> " << out_path << '\n';
  return 0;
}

// ---------------------------------------------------------------------
// simulate / sweep / histogram

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& trials_path, const GlobalOpts& g) {
  odr::RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, g);
  odr::SimOptions opts;
  opts.threads = g.threads;
  opts.store_records = !trials_path.empty();
  const odr::RunResult result = odr::simulate_run(cfg, opts);

  std::cout << "ber = " << result.ber.ber << " +/- " << result.ber.std_err
            << " (n_trials=" << result.ber.n_trials
            << ", seed=" << result.seed
            << ", beta_sq=" << result.beta_sq_used << ")\n";
  if (!out_path.empty()) {
    nlohmann::json doc = odr::result_to_json(result);
    if (!g.no_timestamp) doc["timestamp"] = utc_timestamp();
    std::ofstream out = open_output(out_path);
    out << doc.dump(2) << '\n';
  }
  if (!trials_path.empty()) {
    std::ofstream out = open_output(trials_path);
    odr::write_trials_csv(out, result.records);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, double beta_sq_lo,
              double beta_sq_hi, int steps, const std::string& out_path,
              const GlobalOpts& g) {
  if (steps < 1) throw odr::ValidationError("steps out of [1,inf)");
  if (steps > 1 && !(beta_sq_lo < beta_sq_hi))
    throw odr::ValidationError("sweep range requires beta-lo < beta-hi");
  odr::RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, g);
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i)
    grid[i] = steps == 1 ? beta_sq_lo
                         : beta_sq_lo + (beta_sq_hi - beta_sq_lo) * i /
                               static_cast<double>(steps - 1);
  odr::SimOptions opts;
  opts.threads = g.threads;
  const auto curve = odr::sweep_beta(cfg, grid, opts);

  std::ofstream out = open_output(out_path);
  out << "beta_sq,ber,stderr\n";
  std::size_t best = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << fmt_double(curve[i].first) << ',' << fmt_double(curve[i].second.ber)
        << ',' << fmt_double(curve[i].second.std_err) << '\n';
    if (curve[i].second.ber < curve[best].second.ber) best = i;
  }
  std::cout << "sweep: min ber = " << curve[best].second.ber
            << " at beta_sq = " << curve[best].first << " -> " << out_path
            << '\n';
  return 0;
}

int cmd_histogram(const std::string& config_path, double e_min, double e_max,
                  int bins, const std::string& out_path, const GlobalOpts& g) {
  if (bins < 1) throw odr::ValidationError("bins out of [1,inf)");
  if (!(e_min < e_max)) throw odr::ValidationError("requires emin < emax");
  odr::RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, g);
  odr::SimOptions opts;
  opts.threads = g.threads;
  opts.hist_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i)
    opts.hist_edges[i] = e_min + (e_max - e_min) * i / static_cast<double>(bins);
  const odr::RunResult result = odr::simulate_run(cfg, opts);

  std::ofstream out = open_output(out_path);
  odr::write_histogram_csv(out, *result.histogram);
  std::cout << "histogram: " << result.histogram->total() << " heights ("
            << result.histogram->clamped << " clamped), ber = "
            << result.ber.ber << " -> " << out_path << '\n';
  return 0;
}

// ---------------------------------------------------------------------
// lock

odr::LockConfig load_lock_config(const std::string& path) {
  odr::LockConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw odr::ValidationError("cannot read config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw odr::ValidationError(std::string("config is not valid JSON: ") +
                               e.what());
  }
  if (!doc.is_object())
    throw odr::ValidationError("config must be a JSON object");
  const std::map<std::string, double*> numbers = {
      {"alpha_sq_lock", &cfg.alpha_sq_lock},
      {"beta_sq_lock", &cfg.beta_sq_lock},
      {"eta", &cfg.eta},
      {"xi", &cfg.xi},
      {"window_s", &cfg.window_s},
      {"pulse_rate_hz", &cfg.pulse_rate_hz},
      {"drift_std_rad", &cfg.drift_std_rad},
      {"kp", &cfg.kp},
      {"ki", &cfg.ki},
      {"setpoint_click_prob", &cfg.setpoint_click_prob},
      {"initial_offset_rad", &cfg.initial_offset_rad},
  };
  for (const auto& [key, value] : doc.items()) {
    if (auto it = numbers.find(key); it != numbers.end()) {
      if (!value.is_number())
        throw odr::ValidationError("field '" + key + "' must be a number");
      *it->second = value.get<double>();
    } else if (key == "n_windows" || key == "settle_windows" ||
               key == "seed") {
      if (!value.is_number_integer())
        throw odr::ValidationError("field '" + key + "' must be an integer");
      if (key == "n_windows") cfg.n_windows = value.get<long>();
      if (key == "settle_windows") cfg.settle_windows = value.get<long>();
      if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    } else if (key == "detect_lock_loss") {
      if (!value.is_boolean())
        throw odr::ValidationError("field '" + key + "' must be a boolean");
      cfg.detect_lock_loss = value.get<bool>();
    } else {
      throw odr::ValidationError("unknown field '" + key + "'");
    }
  }
  return cfg;
}

int cmd_lock(const std::string& config_path, const std::string& out_path,
             const GlobalOpts& g) {
  odr::LockConfig cfg = load_lock_config(config_path);
  if (g.seed_set) cfg.seed = g.seed;
  const odr::LockResult result = odr::simulate_lock(cfg);
  std::cout << "lock: residual = " << result.residual_std_rad
            << " rad over " << result.trace.size() << " windows (setpoint p="
            << result.setpoint_click_prob << ", theta="
            << result.setpoint_theta_rad << " rad)\n";
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    odr::write_lock_csv(out, result);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BPSK coherent-state receiver simulator"};
  app.fallthrough();
  GlobalOpts global;
  app.add_option("--seed", global.seed, "Override the config seed")
      ->each([&](const std::string&) { global.seed_set = true; });
  app.add_flag("--no-timestamp", global.no_timestamp,
               "Omit timestamps from JSON outputs");
  app.add_option("--threads", global.threads,
                 "Worker threads (0 = auto); never affects results");

  std::string out_path;
  std::string config_path;
  std::string trials_path;

  CurveSpec spec;
  std::string curve_list;
  auto* curves = app.add_subcommand("curves", "Emit BER curves as CSV");
  curves->add_option("--lo", spec.lo, "Lowest alpha^2")->capture_default_str();
  curves->add_option("--hi", spec.hi, "Highest alpha^2")->capture_default_str();
  curves->add_option("--steps", spec.steps, "Grid points")->capture_default_str();
  curves->add_flag("--log", spec.log_spacing, "Logarithmic alpha^2 grid");
  curves->add_option("--curves", curve_list,
                     "Comma-separated subset of: ql_bpsk,ql_ook,sql,sql_eta,"
                     "odr_ideal,odr_model,kennedy");
  curves->add_option("--eta", spec.model.eta, "Model-curve efficiency")->capture_default_str();
  curves->add_option("--nu", spec.model.nu, "Model-curve dark counts")->capture_default_str();
  curves->add_option("--xi", spec.model.xi, "Model-curve mode match")->capture_default_str();
  curves->add_option("--jitter", spec.model.phase_jitter_sigma,
                     "Model-curve phase jitter sigma (rad)")->capture_default_str();
  curves->add_option("--out", out_path, "Output CSV path")->required();

  auto* simulate =
      app.add_subcommand("simulate", "Run a configured Monte Carlo experiment");
  simulate->add_option("--config", config_path, "RunConfig JSON")->required();
  simulate->add_option("--out", out_path, "Result JSON path");
  simulate->add_option("--trials-out", trials_path, "Trial-record CSV path");

  double beta_lo = 0.1, beta_hi = 1.2;
  int sweep_steps = 23;
  auto* sweep = app.add_subcommand("sweep", "Sweep beta^2 over a grid");
  sweep->add_option("--config", config_path, "RunConfig JSON")->required();
  sweep->add_option("--beta-lo", beta_lo, "Lowest beta^2")->capture_default_str();
  sweep->add_option("--beta-hi", beta_hi, "Highest beta^2")->capture_default_str();
  sweep->add_option("--steps", sweep_steps, "Grid points")->capture_default_str();
  sweep->add_option("--out", out_path, "Output CSV path")->required();

  double e_min = -1.0, e_max = 8.0;
  int bins = 180;
  auto* histogram = app.add_subcommand(
      "histogram", "Pulse-height histogram at an operating point");
  histogram->add_option("--config", config_path, "RunConfig JSON (tes_enabled)")
      ->required();
  histogram->add_option("--emin", e_min, "Lowest bin edge (eV)")->capture_default_str();
  histogram->add_option("--emax", e_max, "Highest bin edge (eV)")->capture_default_str();
  histogram->add_option("--bins", bins, "Bin count")->capture_default_str();
  histogram->add_option("--out", out_path, "Output CSV path")->required();

  auto* lock =
      app.add_subcommand("lock", "Simulate the photon-level phase lock");
  lock->add_option("--config", config_path, "LockConfig JSON (optional)");
  lock->add_option("--out", out_path, "Phase-trace CSV path");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (curves->parsed()) {
      if (!curve_list.empty()) {
        spec.curves.clear();
        std::stringstream ss(curve_list);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) spec.curves.push_back(item);
        if (spec.curves.empty())
          throw odr::ValidationError("empty curve list");
      }
      return cmd_curves(spec, out_path);
    }
    if (simulate->parsed())
      return cmd_simulate(config_path, out_path, trials_path, global);
    if (sweep->parsed())
      return cmd_sweep(config_path, beta_lo, beta_hi, sweep_steps, out_path,
                       global);
    if (histogram->parsed())
      return cmd_histogram(config_path, e_min, e_max, bins, out_path, global);
    if (lock->parsed()) return cmd_lock(config_path, out_path, global);
  } catch (const odr::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const odr::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
