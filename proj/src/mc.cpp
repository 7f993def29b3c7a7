#include "odr/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "odr/bounds.hpp"
#include "odr/errors.hpp"
#include "odr/rng.hpp"

namespace odr {

namespace {

using rng::CounterRng;
using rng::Purpose;

void check_known_fields(const nlohmann::json& doc,
                        std::initializer_list<const char*> known,
                        const std::string& scope) {
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end())
      throw ValidationError("unknown field '" + scope + key + "'");
  }
}

double get_number(const nlohmann::json& doc, const char* field,
                  double fallback, const std::string& scope = "") {
  if (!doc.contains(field)) return fallback;
  const auto& v = doc.at(field);
  if (!v.is_number())
    throw ValidationError("field '" + scope + field + "' must be a number");
  return v.get<double>();
}

struct ChunkTally {
  long errors = 0;
  long n_plus = 0;
  HeightHistogram hist;
};

}  // namespace

RunConfig validate_config(const RunConfig& cfg) {
  if (!(cfg.alpha_sq >= 0.0)) throw ValidationError("alpha_sq out of [0,inf)");
  if (!cfg.beta_optimal && !(cfg.beta_sq >= 0.0))
    throw ValidationError("beta_sq out of [0,inf)");
  validate_model(cfg.imperfections);
  if (cfg.n_trials < 1) throw ValidationError("n_trials out of [1,inf)");
  validate_tes(cfg.tes);
  return cfg;
}

RunConfig run_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  check_known_fields(doc,
                     {"alpha_sq", "beta_sq", "eta", "nu", "xi",
                      "phase_jitter_sigma", "n_trials", "seed", "tes_enabled",
                      "tes"},
                     "");
  RunConfig cfg;
  if (!doc.contains("alpha_sq"))
    throw ValidationError("missing field 'alpha_sq'");
  cfg.alpha_sq = get_number(doc, "alpha_sq", 0.0);
  if (!doc.contains("beta_sq")) throw ValidationError("missing field 'beta_sq'");
  if (doc.at("beta_sq").is_string()) {
    if (doc.at("beta_sq").get<std::string>() != "optimal")
      throw ValidationError(
          "field 'beta_sq' must be a number or the string \"optimal\"");
    cfg.beta_optimal = true;
    cfg.beta_sq = 0.0;
  } else {
    cfg.beta_sq = get_number(doc, "beta_sq", 0.0);
  }
  cfg.imperfections.eta = get_number(doc, "eta", 1.0);
  cfg.imperfections.nu = get_number(doc, "nu", 0.0);
  cfg.imperfections.xi = get_number(doc, "xi", 1.0);
  cfg.imperfections.phase_jitter_sigma =
      get_number(doc, "phase_jitter_sigma", 0.0);
  if (doc.contains("n_trials")) {
    if (!doc.at("n_trials").is_number_integer())
      throw ValidationError("field 'n_trials' must be an integer");
    cfg.n_trials = doc.at("n_trials").get<long>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer())
      throw ValidationError("field 'seed' must be an integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("tes_enabled")) {
    if (!doc.at("tes_enabled").is_boolean())
      throw ValidationError("field 'tes_enabled' must be a boolean");
    cfg.tes_enabled = doc.at("tes_enabled").get<bool>();
  }
  // Dark counts have one source of truth: nu. The TES block may repeat
  // it but must not disagree.
  cfg.tes.dark_mean = cfg.imperfections.nu;
  if (doc.contains("tes")) {
    const auto& tes = doc.at("tes");
    if (!tes.is_object()) throw ValidationError("field 'tes' must be an object");
    check_known_fields(tes,
                       {"photon_energy_ev", "resolution_fwhm_ev",
                        "threshold_ev", "dark_mean"},
                       "tes.");
    cfg.tes.photon_energy_ev =
        get_number(tes, "photon_energy_ev", cfg.tes.photon_energy_ev, "tes.");
    cfg.tes.resolution_fwhm_ev = get_number(
        tes, "resolution_fwhm_ev", cfg.tes.resolution_fwhm_ev, "tes.");
    cfg.tes.threshold_ev =
        get_number(tes, "threshold_ev", cfg.tes.threshold_ev, "tes.");
    const double dark = get_number(tes, "dark_mean", cfg.tes.dark_mean, "tes.");
    if (dark != cfg.imperfections.nu)
      throw ValidationError("field 'tes.dark_mean' must equal 'nu'");
  }
  return validate_config(cfg);
}

RunConfig parse_run_config(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return run_config_from_json(doc);
}

Bit trial_bit(std::uint64_t seed, long trial) {
  CounterRng rng(seed, static_cast<std::uint64_t>(trial), Purpose::bit);
  return (rng.next_u64() & 1u) ? Bit::plus : Bit::minus;
}

std::vector<Bit> generate_bits(std::uint64_t seed, long n) {
  if (n < 1) throw ValidationError("n out of [1,inf)");
  std::vector<Bit> bits(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    bits[static_cast<std::size_t>(i)] = trial_bit(seed, i);
  return bits;
}

RunResult simulate_run(const RunConfig& cfg_in, const SimOptions& opts) {
  RunConfig cfg = validate_config(cfg_in);
  if (!opts.hist_edges.empty() && !cfg.tes_enabled)
    throw ValidationError("height histogram requires tes_enabled");

  if (cfg.beta_optimal) {
    const auto [d, ber] = optimal_beta_model(
        SignalModel::bpsk(std::sqrt(cfg.alpha_sq)), cfg.imperfections);
    (void)ber;
    cfg.beta_sq = d.beta * d.beta;
    cfg.beta_optimal = false;
  }

  const SignalModel signal = SignalModel::bpsk(std::sqrt(cfg.alpha_sq));
  const Displacement disp{std::sqrt(cfg.beta_sq)};
  const double jitter = cfg.imperfections.phase_jitter_sigma;
  const MeanPair fixed_means = effective_means(signal, disp, cfg.imperfections);

  RunResult result;
  result.beta_sq_used = cfg.beta_sq;
  result.seed = cfg.seed;
  if (opts.store_records)
    result.records.resize(static_cast<std::size_t>(cfg.n_trials));

  const long n = cfg.n_trials;
  unsigned threads = opts.threads != 0
                         ? opts.threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<long>(threads, std::max<long>(1, n / 1000)));

  std::vector<ChunkTally> tallies(threads);
  const bool want_hist = !opts.hist_edges.empty();
  for (auto& t : tallies)
    if (want_hist) t.hist = make_histogram(opts.hist_edges);

  const auto worker = [&](unsigned tid, long lo, long hi, ChunkTally& tally) {
    (void)tid;
    for (long i = lo; i < hi; ++i) {
      const Bit bit = trial_bit(cfg.seed, i);
      MeanPair means = fixed_means;
      if (jitter > 0.0) {
        CounterRng phase_rng(cfg.seed, static_cast<std::uint64_t>(i),
                             Purpose::phase);
        means = effective_means_at(signal, disp, cfg.imperfections,
                                   jitter * phase_rng.normal());
      }
      const double mean = (bit == Bit::minus) ? means.n_null : means.n_anti;
      CounterRng poisson_rng(cfg.seed, static_cast<std::uint64_t>(i),
                             Purpose::poisson);
      const int photons = rng::poisson(poisson_rng, mean);

      bool click;
      std::optional<double> height;
      if (cfg.tes_enabled) {
        CounterRng noise_rng(cfg.seed, static_cast<std::uint64_t>(i),
                             Purpose::tes_noise);
        const double h =
            sample_pulse_height(photons, cfg.tes, noise_rng.normal());
        height = h;
        click = h > cfg.tes.threshold_ev;
      } else {
        click = photons >= 1;
      }
      const Bit decided = click ? Bit::plus : Bit::minus;

      if (bit == Bit::plus) ++tally.n_plus;
      if (decided != bit) ++tally.errors;
      if (want_hist) tally.hist.add(bit, *height);
      if (opts.store_records)
        result.records[static_cast<std::size_t>(i)] =
            TrialRecord{bit, photons, height, decided};
    }
  };

  if (threads <= 1) {
    worker(0, 0, n, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const long lo = t * chunk;
      const long hi = std::min<long>(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, t, lo, hi, std::ref(tallies[t]));
    }
    for (auto& th : pool) th.join();
  }

  long errors = 0;
  for (const auto& t : tallies) {
    errors += t.errors;
    result.n_plus += t.n_plus;
  }
  if (want_hist) {
    HeightHistogram merged = make_histogram(opts.hist_edges);
    for (const auto& t : tallies) {
      for (std::size_t b = 0; b < merged.count_plus.size(); ++b) {
        merged.count_plus[b] += t.hist.count_plus[b];
        merged.count_minus[b] += t.hist.count_minus[b];
      }
      merged.clamped += t.hist.clamped;
    }
    result.histogram = std::move(merged);
  }
  result.ber = BerResult::monte_carlo(errors, n);
  return result;
}

std::vector<std::pair<double, BerResult>> sweep_beta(
    const RunConfig& cfg, std::span<const double> beta_sq_grid,
    const SimOptions& opts) {
  if (beta_sq_grid.empty()) throw ValidationError("beta_sq_grid is empty");
  std::vector<std::pair<double, BerResult>> curve;
  curve.reserve(beta_sq_grid.size());
  SimOptions point_opts = opts;
  point_opts.store_records = false;
  point_opts.hist_edges.clear();
  for (std::size_t i = 0; i < beta_sq_grid.size(); ++i) {
    RunConfig point = cfg;
    point.beta_optimal = false;
    point.beta_sq = beta_sq_grid[i];
    point.seed = rng::derive_seed(cfg.seed, i);
    curve.emplace_back(beta_sq_grid[i], simulate_run(point, point_opts).ber);
  }
  return curve;
}

nlohmann::json result_to_json(const RunResult& r) {
  return nlohmann::json{{"ber", r.ber.ber},
                        {"stderr", r.ber.std_err},
                        {"n_trials", r.ber.n_trials},
                        {"seed", r.seed},
                        {"provenance", provenance_name(r.ber.provenance)}};
}

void write_trials_csv(std::ostream& out,
                      std::span<const TrialRecord> records) {
  out << "index,true_bit,photons,height_ev,decided_bit\n";
  char buf[32];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrialRecord& r = records[i];
    out << i << ',' << bit_char(r.true_bit) << ',' << r.photons << ',';
    if (r.height_ev) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.height_ev);
      out << buf;
    }
    out << ',' << bit_char(r.decided_bit) << '\n';
  }
}

}  // namespace odr
