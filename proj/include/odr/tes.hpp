#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "odr/model.hpp"

namespace odr {

// hc in eV nm and the operating wavelength of the detector model.
inline constexpr double kEvNm = 1239.842;
inline constexpr double kWavelengthNm = 853.0;
inline constexpr double kFwhmToSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

// Transition-edge-sensor pulse-height statistics: each n-photon event
// reads n * photon_energy_ev plus Gaussian readout noise of constant
// width (the post-filter energy resolution). Peak broadening with n is
// not modeled; the resolution is a single number.
struct TesModel {
  double photon_energy_ev = kEvNm / kWavelengthNm;
  double resolution_fwhm_ev = 0.55;
  double threshold_ev = 0.5 * kEvNm / kWavelengthNm;  // midpoint default
  double dark_mean = 0.003;  // per pulse

  double sigma_ev() const { return resolution_fwhm_ev / kFwhmToSigma; }
};

TesModel validate_tes(const TesModel& t);

// Pulse height for an n-photon event given a standard-normal noise draw.
double sample_pulse_height(int n_photons, const TesModel& t,
                           double noise_draw);

struct ThresholdChoice {
  double threshold_ev;
  double misid_zero;     // P(zero-photon event reads above threshold)
  double misid_nonzero;  // P(non-zero event reads below threshold)
};

// Threshold minimizing p_zero * misid_zero + (1 - p_zero) * misid_nonzero
// under the Gaussian-mixture model. nonzero_probs[k] = P(n = k+1 | n >= 1)
// and must sum to 1. Degenerate sigma = 0 returns the midpoint with zero
// misidentification.
ThresholdChoice choose_threshold(const TesModel& t, double p_zero,
                                 std::span<const double> nonzero_probs);

// Probability that a true >= 1 photon event reads below the model's
// threshold, under photon_probs[n] = P(n photons). Returns 0 when the
// source has no >= 1 photon mass.
double overlap_loss(const TesModel& t, std::span<const double> photon_probs);

// Pulse-height counts split by the true signal label. Out-of-range
// heights clamp to the end bins and are tallied in `clamped`.
struct HeightHistogram {
  std::vector<double> bin_edges;  // size bins + 1, strictly increasing
  std::vector<std::uint64_t> count_plus;
  std::vector<std::uint64_t> count_minus;
  std::uint64_t clamped = 0;

  void add(Bit label, double height_ev);
  std::uint64_t total() const;
};

HeightHistogram make_histogram(std::vector<double> bin_edges);

HeightHistogram build_histogram(
    std::span<const std::pair<Bit, double>> trials,
    std::vector<double> bin_edges);

// CSV columns: bin_lo_ev,bin_hi_ev,count_plus,count_minus.
void write_histogram_csv(std::ostream& out, const HeightHistogram& h);

// Truncated Poisson photon-number distribution, probs[n] = P(n), renormalized.
std::vector<double> poisson_photon_dist(double mean, std::size_t max_n);

}  // namespace odr
