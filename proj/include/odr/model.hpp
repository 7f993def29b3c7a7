#pragma once

#include <cstdint>
#include <string>

namespace odr {

enum class Bit : std::uint8_t { minus = 0, plus = 1 };

inline char bit_char(Bit b) { return b == Bit::plus ? '+' : '-'; }

// BPSK signal pair {|alpha>, |-alpha>}; amplitudes are real and
// nonnegative, the phase lives in the +/- sign.
struct SignalModel {
  double alpha = 0.0;        // sqrt(photons)
  double prior_plus = 0.5;
  double prior_minus = 0.5;

  static SignalModel bpsk(double alpha) { return {alpha, 0.5, 0.5}; }
};

struct Displacement {
  double beta = 0.0;  // sqrt(photons), in phase with |alpha>
};

// Receiver-side imperfections. The identity model (1, 0, 1, 0) reduces
// every downstream formula to its ideal form.
struct ImperfectionModel {
  double eta = 1.0;                // detection efficiency
  double nu = 0.0;                 // dark-count mean per pulse
  double xi = 1.0;                 // interference mode-match factor
  double phase_jitter_sigma = 0.0; // rad, std of the residual phase

  static ImperfectionModel identity() { return {}; }
};

enum class Provenance { analytic, monte_carlo, oracle };

std::string provenance_name(Provenance p);

// A BER value together with how it was obtained. stderr is the binomial
// standard error for Monte Carlo estimates and 0 otherwise.
struct BerResult {
  double ber = 0.0;
  double std_err = 0.0;
  long n_trials = 0;
  Provenance provenance = Provenance::analytic;

  static BerResult analytic(double ber);
  static BerResult oracle(double ber);
  static BerResult monte_carlo(long n_errors, long n_trials);
};

// Throw ValidationError naming the offending field unless all invariants
// hold; returns the model unchanged otherwise.
ImperfectionModel validate_model(const ImperfectionModel& m);
SignalModel validate_signal(const SignalModel& s);
Displacement validate_displacement(const Displacement& d);

// Mean photon number through a channel of loss_db <= 0 decibels.
double apply_channel_loss(double mean_photons_in, double loss_db);

struct MeanPair {
  double n_null;  // mean detected photons when the nulled signal was sent
  double n_anti;  // mean for the opposite signal
};

// Mean detected photon numbers of the two displaced signals, including
// efficiency, mode match and dark counts:
//   n_null = eta (alpha^2 + beta^2 - 2 xi alpha beta) + nu
//   n_anti = eta (alpha^2 + beta^2 + 2 xi alpha beta) + nu
// The displacement nulls |-alpha>.
MeanPair effective_means(const SignalModel& s, const Displacement& d,
                         const ImperfectionModel& m);

// Same with the interference contrast rotated by a phase error theta
// (the cross term picks up cos(theta)).
MeanPair effective_means_at(const SignalModel& s, const Displacement& d,
                            const ImperfectionModel& m, double theta);

}  // namespace odr
