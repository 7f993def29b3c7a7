#include "odr/model.hpp"

#include <cmath>

#include "odr/errors.hpp"

namespace odr {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(std::string(field) + " is not finite");
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::monte_carlo: return "monte-carlo";
    case Provenance::oracle: return "oracle";
  }
  return "unknown";
}

BerResult BerResult::analytic(double ber) {
  require(ber >= 0.0 && ber <= 1.0, "ber out of [0,1]");
  return {ber, 0.0, 0, Provenance::analytic};
}

BerResult BerResult::oracle(double ber) {
  require(ber >= 0.0 && ber <= 1.0, "ber out of [0,1]");
  return {ber, 0.0, 0, Provenance::oracle};
}

BerResult BerResult::monte_carlo(long n_errors, long n_trials) {
  require(n_trials >= 1, "n_trials out of [1,inf)");
  require(n_errors >= 0 && n_errors <= n_trials, "n_errors out of [0,n_trials]");
  const double ber = static_cast<double>(n_errors) / n_trials;
  const double se = std::sqrt(ber * (1.0 - ber) / n_trials);
  return {ber, se, n_trials, Provenance::monte_carlo};
}

ImperfectionModel validate_model(const ImperfectionModel& m) {
  require_finite(m.eta, "eta");
  require_finite(m.nu, "nu");
  require_finite(m.xi, "xi");
  require_finite(m.phase_jitter_sigma, "phase_jitter_sigma");
  require(m.eta >= 0.0 && m.eta <= 1.0, "eta out of [0,1]");
  require(m.nu >= 0.0, "nu out of [0,inf)");
  require(m.xi >= 0.0 && m.xi <= 1.0, "xi out of [0,1]");
  require(m.phase_jitter_sigma >= 0.0, "phase_jitter_sigma out of [0,inf)");
  return m;
}

SignalModel validate_signal(const SignalModel& s) {
  require_finite(s.alpha, "alpha");
  require(s.alpha >= 0.0, "alpha out of [0,inf)");
  require(s.prior_plus >= 0.0 && s.prior_minus >= 0.0,
          "priors out of [0,inf)");
  require(std::abs(s.prior_plus + s.prior_minus - 1.0) <= 1e-12,
          "priors do not sum to 1");
  return s;
}

Displacement validate_displacement(const Displacement& d) {
  require_finite(d.beta, "beta");
  require(d.beta >= 0.0, "beta out of [0,inf)");
  return d;
}

double apply_channel_loss(double mean_photons_in, double loss_db) {
  require(mean_photons_in >= 0.0, "mean_photons_in out of [0,inf)");
  if (loss_db > 0.0) throw ValidationError("loss_db out of (-inf,0]: gain not modeled");
  return mean_photons_in * std::pow(10.0, loss_db / 10.0);
}

MeanPair effective_means(const SignalModel& s, const Displacement& d,
                         const ImperfectionModel& m) {
  return effective_means_at(s, d, m, 0.0);
}

MeanPair effective_means_at(const SignalModel& s, const Displacement& d,
                            const ImperfectionModel& m, double theta) {
  const double quad = s.alpha * s.alpha + d.beta * d.beta;
  const double cross = 2.0 * m.xi * s.alpha * d.beta * std::cos(theta);
  return {m.eta * (quad - cross) + m.nu, m.eta * (quad + cross) + m.nu};
}

}  // namespace odr
