#pragma once

#include <cstddef>
#include <vector>

#include "odr/model.hpp"

namespace odr {

// Truncated photon-number-basis vector with real (signed) amplitudes.
// tail_mass records 1 - sum of squared amplitudes at construction.
struct FockVector {
  std::vector<double> amplitudes;
  double tail_mass = 0.0;

  std::size_t dim() const { return amplitudes.size(); }

  static FockVector from_amplitudes(std::vector<double> amplitudes);
};

// Default truncation tolerance and the hard cap on auto-sized dimensions.
inline constexpr double kFockTailTol = 1e-12;
inline constexpr std::size_t kFockDimCap = 200;

// Coherent state |alpha> truncated to dim terms: amplitude[n] =
// e^(-a^2/2) a^n / sqrt(n!), evaluated by recurrence. Throws NumericError
// naming the required dimension when the truncated tail exceeds tail_tol.
FockVector coherent_fock(double alpha, std::size_t dim,
                         double tail_tol = kFockTailTol);

// Auto-sized variant: smallest dimension with tail below kFockTailTol,
// capped at kFockDimCap.
FockVector coherent_fock(double alpha);

// c0 * a + c1 * b, amplitudes combined termwise (dims must match).
FockVector linear_combination(double c0, const FockVector& a, double c1,
                              const FockVector& b);

// Fock-sum inner product <a|b>; dims must match.
double overlap(const FockVector& a, const FockVector& b);

// Closed-form coherent overlap <a|b> = exp(-(a-b)^2/2) for real signed
// amplitudes.
double overlap_closed(double alpha, double beta);

// Minimum error probability for the pair {plus, minus} with prior
// prior_plus on the first, solved through the 2x2 eigenproblem of
// p+ |psi+><psi+| - p- |psi-><psi-| on a Gram-Schmidt basis of the
// signal span (trace-norm route, independent of the closed form).
BerResult gram_helstrom(const FockVector& plus, const FockVector& minus,
                        double prior_plus = 0.5);

// |<projector|state>|^2. The projector must be normalized.
double projection_probability(const FockVector& projector,
                              const FockVector& state);

}  // namespace odr
