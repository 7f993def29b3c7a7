#pragma once

#include <utility>

#include "odr/model.hpp"

namespace odr {

// Homodyne (standard quantum) limit for BPSK at amplitude alpha,
// detection efficiency eta: (1 - erf(sqrt(2 eta) alpha)) / 2.
BerResult sql_homodyne_ber(double alpha, double eta = 1.0);

// Minimum error probability for two pure states with squared overlap
// overlap_sq and prior prior_plus on the first:
// (1 - sqrt(1 - 4 p (1-p) overlap_sq)) / 2.
BerResult helstrom_binary_ber(double overlap_sq, double prior_plus = 0.5);

// Quantum limit for BPSK {|alpha>, |-alpha>}, equal priors.
BerResult helstrom_bpsk_ber(double alpha);

// Quantum limit for on-off keying at the same average photon number
// nbar: states {|0>, |sqrt(2 nbar)>}, equal priors.
BerResult helstrom_ook_ber(double nbar);

// Displacement receiver with exact nulling (beta = alpha): e^(-4a^2)/2.
BerResult kennedy_ber(double alpha);

// Displacement receiver BER for the zero/non-zero photon counting rule
// (no click -> guess the nulled signal). With phase jitter sigma > 0 the
// result is averaged over theta ~ Normal(0, sigma^2) by Gauss-Hermite
// quadrature of order 21.
BerResult odr_ber(const SignalModel& s, const Displacement& d,
                  const ImperfectionModel& m);

// Ideal-receiver optimal displacement: the root of beta tanh(2 alpha
// beta) = alpha, which lies in (max(alpha, 1/sqrt(2)), alpha + 1).
Displacement optimal_beta_ideal(double alpha);

// Displacement minimizing odr_ber under an arbitrary imperfection model;
// golden-section search on beta in [0, alpha + 2].
std::pair<Displacement, BerResult> optimal_beta_model(
    const SignalModel& s, const ImperfectionModel& m);

// Coefficients of the optimal projector |pi-> = b0 |alpha> + b1 |-alpha>.
struct ProjectorCoeffs {
  double b0;     // <= 0
  double b1;     // >= 0
  double alpha;  // context amplitude
};

ProjectorCoeffs helstrom_projector_coeffs(double alpha);

}  // namespace odr
