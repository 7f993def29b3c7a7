#include "odr/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "odr/errors.hpp"
#include "odr/solvers.hpp"

namespace odr {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

double odr_ber_at(const SignalModel& s, const Displacement& d,
                  const ImperfectionModel& m, double theta) {
  const MeanPair means = effective_means_at(s, d, m, theta);
  return s.prior_minus * (1.0 - std::exp(-means.n_null)) +
         s.prior_plus * std::exp(-means.n_anti);
}

}  // namespace

// std::erf is used throughout; on this platform it is correctly rounded
// to within 1 ulp (absolute error < 1e-16 on [0, 6]), well inside the
// 1e-14 budget the BER formulas need.
BerResult sql_homodyne_ber(double alpha, double eta) {
  if (alpha < 0.0) throw ValidationError("alpha out of [0,inf)");
  if (eta < 0.0 || eta > 1.0) throw ValidationError("eta out of [0,1]");
  return BerResult::analytic(0.5 * (1.0 - std::erf(std::sqrt(2.0 * eta) * alpha)));
}

BerResult helstrom_binary_ber(double overlap_sq, double prior_plus) {
  if (overlap_sq < 0.0 || overlap_sq > 1.0)
    throw ValidationError("overlap_sq out of [0,1]");
  if (prior_plus < 0.0 || prior_plus > 1.0)
    throw ValidationError("prior_plus out of [0,1]");
  const double p = prior_plus;
  const double disc = 1.0 - 4.0 * p * (1.0 - p) * overlap_sq;
  return BerResult::analytic(0.5 * (1.0 - std::sqrt(std::max(0.0, disc))));
}

BerResult helstrom_bpsk_ber(double alpha) {
  if (alpha < 0.0) throw ValidationError("alpha out of [0,inf)");
  return helstrom_binary_ber(std::exp(-4.0 * alpha * alpha), 0.5);
}

BerResult helstrom_ook_ber(double nbar) {
  if (nbar < 0.0) throw ValidationError("nbar out of [0,inf)");
  return helstrom_binary_ber(std::exp(-2.0 * nbar), 0.5);
}

BerResult kennedy_ber(double alpha) {
  if (alpha < 0.0) throw ValidationError("alpha out of [0,inf)");
  const SignalModel s = SignalModel::bpsk(alpha);
  const Displacement d{alpha};
  return BerResult::analytic(odr_ber_at(s, d, ImperfectionModel::identity(), 0.0));
}

BerResult odr_ber(const SignalModel& s, const Displacement& d,
                  const ImperfectionModel& m) {
  validate_signal(s);
  validate_displacement(d);
  validate_model(m);
  if (m.phase_jitter_sigma == 0.0)
    return BerResult::analytic(odr_ber_at(s, d, m, 0.0));
  const double ber = solvers::normal_expectation(
      [&](double theta) { return odr_ber_at(s, d, m, theta); },
      m.phase_jitter_sigma);
  return BerResult::analytic(std::clamp(ber, 0.0, 1.0));
}

Displacement optimal_beta_ideal(double alpha) {
  if (alpha < 0.0) throw ValidationError("alpha out of [0,inf)");
  // The optimality condition degenerates at alpha = 0; its limit is
  // beta^2 = 1/2.
  if (alpha == 0.0) return {kInvSqrt2};
  const double lo = std::max(alpha, 1e-9);
  const double hi = alpha + 1.0;
  const auto residual = [alpha](double beta) {
    return beta * std::tanh(2.0 * alpha * beta) - alpha;
  };
  const double beta = solvers::bisect_root(residual, lo, hi);
  if (std::abs(residual(beta)) > 1e-12)
    throw NumericError("optimal_beta_ideal: residual above 1e-12");
  return {beta};
}

std::pair<Displacement, BerResult> optimal_beta_model(
    const SignalModel& s, const ImperfectionModel& m) {
  validate_signal(s);
  validate_model(m);
  if (s.alpha == 0.0) {
    // Every beta gives BER 1/2; report the ideal small-signal limit.
    const Displacement d{kInvSqrt2};
    return {d, odr_ber(s, d, m)};
  }
  const auto objective = [&](double beta) {
    return odr_ber(s, Displacement{beta}, m).ber;
  };
  const double beta = solvers::golden_min(objective, 0.0, s.alpha + 2.0, 1e-9);
  const Displacement d{beta};
  return {d, odr_ber(s, d, m)};
}

ProjectorCoeffs helstrom_projector_coeffs(double alpha) {
  if (alpha <= 0.0)
    throw ValidationError(
        "alpha out of (0,inf): projector degenerate at alpha = 0");
  const double den = 1.0 - std::exp(-4.0 * alpha * alpha);
  const double p_ql = helstrom_bpsk_ber(alpha).ber;
  return {-std::sqrt(p_ql / den), std::sqrt((1.0 - p_ql) / den), alpha};
}

}  // namespace odr
