#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "odr/model.hpp"
#include "odr/tes.hpp"

namespace odr {

// One simulated experiment: random BPSK modulation, Poisson detection
// with imperfections, optional TES pulse-height layer, threshold
// decision.
struct RunConfig {
  double alpha_sq = 0.21;
  double beta_sq = 0.59;
  bool beta_optimal = false;  // beta_sq = "optimal" in JSON
  ImperfectionModel imperfections;
  long n_trials = 10000;
  std::uint64_t seed = 0;
  bool tes_enabled = false;
  TesModel tes;
};

RunConfig validate_config(const RunConfig& cfg);

// Strict parser for the JSON document schema:
//   alpha_sq, beta_sq (number or "optimal"), eta, nu, xi,
//   phase_jitter_sigma, n_trials, seed, tes_enabled,
//   tes: {photon_energy_ev, resolution_fwhm_ev, threshold_ev, dark_mean}
// Unknown or ill-typed fields raise ValidationError naming the field.
// tes.dark_mean defaults to nu and must not disagree with it.
RunConfig run_config_from_json(const nlohmann::json& doc);
RunConfig parse_run_config(std::istream& in);

struct TrialRecord {
  Bit true_bit;
  int photons;
  std::optional<double> height_ev;  // present when the TES layer ran
  Bit decided_bit;

  bool operator==(const TrialRecord&) const = default;
};

struct SimOptions {
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results
  bool store_records = false;
  std::vector<double> hist_edges;  // non-empty: build a height histogram
};

struct RunResult {
  BerResult ber;
  std::optional<HeightHistogram> histogram;
  std::vector<TrialRecord> records;  // filled when store_records
  long n_plus = 0;                   // realized modulation split
  double beta_sq_used = 0.0;         // after resolving "optimal"
  std::uint64_t seed = 0;
};

// Deterministic, seed-reproducible, unbiased modulation sequence. The
// same (seed, trial) pair always yields the same bit, on any platform
// and under any execution order.
std::vector<Bit> generate_bits(std::uint64_t seed, long n);
Bit trial_bit(std::uint64_t seed, long trial);

// Runs the experiment. Per-trial randomness is keyed by (seed, trial,
// purpose), so the result is bit-identical for any thread count.
RunResult simulate_run(const RunConfig& cfg, const SimOptions& opts = {});

// One simulate_run per grid point, each with a sub-seed derived from
// (cfg.seed, point index). Raw results, no smoothing.
std::vector<std::pair<double, BerResult>> sweep_beta(
    const RunConfig& cfg, std::span<const double> beta_sq_grid,
    const SimOptions& opts = {});

// Result document: ber, stderr, n_trials, seed, provenance.
nlohmann::json result_to_json(const RunResult& r);

// CSV columns: index,true_bit,photons,height_ev,decided_bit (height
// empty without the TES layer).
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

}  // namespace odr
