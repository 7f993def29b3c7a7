#include "odr/tes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "odr/errors.hpp"
#include "odr/solvers.hpp"

namespace odr {

namespace {

// Standard normal upper tail Q(x) and CDF Phi(x).
double gauss_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }
double gauss_phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void write_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

TesModel validate_tes(const TesModel& t) {
  if (!(t.photon_energy_ev > 0.0))
    throw ValidationError("photon_energy_ev out of (0,inf)");
  if (!(t.resolution_fwhm_ev >= 0.0))
    throw ValidationError("resolution_fwhm_ev out of [0,inf)");
  if (!std::isfinite(t.threshold_ev))
    throw ValidationError("threshold_ev is not finite");
  if (!(t.dark_mean >= 0.0)) throw ValidationError("dark_mean out of [0,inf)");
  return t;
}

double sample_pulse_height(int n_photons, const TesModel& t,
                           double noise_draw) {
  if (n_photons < 0) throw ValidationError("n_photons out of [0,inf)");
  return n_photons * t.photon_energy_ev + t.sigma_ev() * noise_draw;
}

ThresholdChoice choose_threshold(const TesModel& t, double p_zero,
                                 std::span<const double> nonzero_probs) {
  validate_tes(t);
  if (p_zero < 0.0 || p_zero > 1.0)
    throw ValidationError("p_zero out of [0,1]");
  const double mass = std::accumulate(nonzero_probs.begin(),
                                      nonzero_probs.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-9)
    throw ValidationError("nonzero_probs not normalized");

  const double energy = t.photon_energy_ev;
  const double sigma = t.sigma_ev();
  if (sigma == 0.0) return {0.5 * energy, 0.0, 0.0};

  const auto misid_zero_at = [&](double thr) { return gauss_q(thr / sigma); };
  const auto misid_nonzero_at = [&](double thr) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nonzero_probs.size(); ++k)
      acc += nonzero_probs[k] * gauss_phi((thr - (k + 1.0) * energy) / sigma);
    return acc;
  };
  const auto total = [&](double thr) {
    return p_zero * misid_zero_at(thr) +
           (1.0 - p_zero) * misid_nonzero_at(thr);
  };

  // Coarse scan between the zero and one-photon peaks, then a golden
  // polish on the best bracket. The mixture objective can flatten near
  // the edges, so the scan pins the basin first.
  const int kScan = 2048;
  double best = 0.5 * energy;
  double best_val = total(best);
  for (int i = 0; i <= kScan; ++i) {
    const double thr = energy * i / kScan;
    const double v = total(thr);
    if (v < best_val) {
      best_val = v;
      best = thr;
    }
  }
  const double step = energy / kScan;
  const double lo = std::max(0.0, best - step);
  const double hi = std::min(energy, best + step);
  const double thr = solvers::golden_min(total, lo, hi, 1e-12);
  const double refined = total(thr) <= best_val ? thr : best;
  return {refined, misid_zero_at(refined), misid_nonzero_at(refined)};
}

double overlap_loss(const TesModel& t, std::span<const double> photon_probs) {
  validate_tes(t);
  const double sigma = t.sigma_ev();
  double below = 0.0;
  double nonzero_mass = 0.0;
  for (std::size_t n = 1; n < photon_probs.size(); ++n) {
    nonzero_mass += photon_probs[n];
    if (sigma > 0.0)
      below += photon_probs[n] *
               gauss_phi((t.threshold_ev - n * t.photon_energy_ev) / sigma);
    else if (n * t.photon_energy_ev <= t.threshold_ev)
      below += photon_probs[n];
  }
  if (nonzero_mass <= 0.0) return 0.0;
  return below / nonzero_mass;
}

void HeightHistogram::add(Bit label, double height_ev) {
  const auto& edges = bin_edges;
  std::size_t bin;
  if (height_ev < edges.front()) {
    bin = 0;
    ++clamped;
  } else if (height_ev >= edges.back()) {
    bin = count_plus.size() - 1;
    ++clamped;
  } else {
    bin = static_cast<std::size_t>(
              std::upper_bound(edges.begin(), edges.end(), height_ev) -
              edges.begin()) -
          1;
  }
  (label == Bit::plus ? count_plus : count_minus)[bin] += 1;
}

std::uint64_t HeightHistogram::total() const {
  std::uint64_t acc = 0;
  for (std::uint64_t c : count_plus) acc += c;
  for (std::uint64_t c : count_minus) acc += c;
  return acc;
}

HeightHistogram make_histogram(std::vector<double> bin_edges) {
  if (bin_edges.size() < 2)
    throw ValidationError("bin_edges needs at least 2 entries");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i - 1] < bin_edges[i]))
      throw ValidationError("bin_edges must be strictly increasing");
  HeightHistogram h;
  h.count_plus.assign(bin_edges.size() - 1, 0);
  h.count_minus.assign(bin_edges.size() - 1, 0);
  h.bin_edges = std::move(bin_edges);
  return h;
}

HeightHistogram build_histogram(
    std::span<const std::pair<Bit, double>> trials,
    std::vector<double> bin_edges) {
  HeightHistogram h = make_histogram(std::move(bin_edges));
  for (const auto& [label, height] : trials) h.add(label, height);
  return h;
}

void write_histogram_csv(std::ostream& out, const HeightHistogram& h) {
  out << "bin_lo_ev,bin_hi_ev,count_plus,count_minus\n";
  for (std::size_t i = 0; i < h.count_plus.size(); ++i) {
    write_double(out, h.bin_edges[i]);
    out << ',';
    write_double(out, h.bin_edges[i + 1]);
    out << ',' << h.count_plus[i] << ',' << h.count_minus[i] << '\n';
  }
}

std::vector<double> poisson_photon_dist(double mean, std::size_t max_n) {
  if (mean < 0.0) throw ValidationError("mean out of [0,inf)");
  std::vector<double> probs(max_n + 1);
  probs[0] = std::exp(-mean);
  for (std::size_t n = 1; n <= max_n; ++n)
    probs[n] = probs[n - 1] * mean / static_cast<double>(n);
  const double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= mass;
  return probs;
}

}  // namespace odr
