#include "odr/phaselock.hpp"

#include <cmath>
#include <cstdio>

#include "odr/errors.hpp"
#include "odr/rng.hpp"
#include "odr/solvers.hpp"

namespace odr {

namespace {

using rng::CounterRng;
using rng::Purpose;

constexpr int kLossWindows = 10;  // consecutive windows beyond pi

double fringe_mean(const LockConfig& cfg, double theta_abs) {
  const double a = std::sqrt(cfg.alpha_sq_lock);
  const double b = std::sqrt(cfg.beta_sq_lock);
  return cfg.eta *
         (a * a + b * b - 2.0 * cfg.xi * a * b * std::cos(theta_abs));
}

double fringe_slope(const LockConfig& cfg, double theta_abs) {
  const double a = std::sqrt(cfg.alpha_sq_lock);
  const double b = std::sqrt(cfg.beta_sq_lock);
  const double dn = 2.0 * cfg.eta * cfg.xi * a * b * std::sin(theta_abs);
  return std::exp(-fringe_mean(cfg, theta_abs)) * dn;
}

}  // namespace

LockConfig validate_lock(const LockConfig& cfg) {
  if (!(cfg.alpha_sq_lock > 0.0))
    throw ValidationError("alpha_sq_lock out of (0,inf)");
  if (!(cfg.beta_sq_lock > 0.0))
    throw ValidationError("beta_sq_lock out of (0,inf)");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
    throw ValidationError("eta out of (0,1]");
  if (!(cfg.xi > 0.0 && cfg.xi <= 1.0))
    throw ValidationError("xi out of (0,1]");
  if (!(cfg.window_s > 0.0)) throw ValidationError("window_s out of (0,inf)");
  if (!(cfg.pulse_rate_hz > 0.0))
    throw ValidationError("pulse_rate_hz out of (0,inf)");
  if (!(cfg.drift_std_rad >= 0.0))
    throw ValidationError("drift_std_rad out of [0,inf)");
  if (!std::isfinite(cfg.kp) || !std::isfinite(cfg.ki))
    throw ValidationError("controller gains must be finite");
  if (cfg.setpoint_click_prob > 1.0)
    throw ValidationError("setpoint_click_prob out of [0,1]");
  if (cfg.n_windows < 1) throw ValidationError("n_windows out of [1,inf)");
  if (cfg.settle_windows < 0 || cfg.settle_windows >= cfg.n_windows)
    throw ValidationError("settle_windows out of [0,n_windows)");
  return cfg;
}

double lock_click_probability(const LockConfig& cfg, double theta_abs) {
  return 1.0 - std::exp(-fringe_mean(cfg, theta_abs));
}

LockResult simulate_lock(const LockConfig& cfg_in) {
  const LockConfig cfg = validate_lock(cfg_in);

  const long pulses = std::lround(cfg.window_s * cfg.pulse_rate_hz);
  if (pulses < 1) throw ValidationError("window too short: no pulses");
  if (pulses > 100000000)
    throw ValidationError("window too long: more than 1e8 pulses");

  // Setpoint: maximum-slope phase on the rising fringe, or the phase
  // matching a requested click probability.
  double theta_set;
  if (cfg.setpoint_click_prob >= 0.0) {
    const double target = cfg.setpoint_click_prob;
    const double p0 = lock_click_probability(cfg, 0.0);
    const double p_pi = lock_click_probability(cfg, M_PI);
    if (target < p0 || target > p_pi)
      throw ValidationError("setpoint_click_prob outside the fringe range");
    theta_set = solvers::bisect_root(
        [&](double th) { return lock_click_probability(cfg, th) - target; },
        0.0, M_PI, 1e-13);
  } else {
    theta_set = solvers::golden_min(
        [&](double th) { return -fringe_slope(cfg, th); }, 0.0, M_PI, 1e-12);
  }
  const double p_set = lock_click_probability(cfg, theta_set);

  LockResult result;
  result.setpoint_theta_rad = theta_set;
  result.setpoint_click_prob = p_set;
  result.pulses_per_window = pulses;
  result.trace.reserve(static_cast<std::size_t>(cfg.n_windows));

  double theta = cfg.initial_offset_rad;  // deviation from the setpoint
  double integral = 0.0;
  int beyond_pi = 0;
  for (long w = 0; w < cfg.n_windows; ++w) {
    if (cfg.drift_std_rad > 0.0) {
      CounterRng drift_rng(cfg.seed, static_cast<std::uint64_t>(w),
                           Purpose::drift);
      theta += cfg.drift_std_rad * drift_rng.normal();
    }
    CounterRng click_rng(cfg.seed, static_cast<std::uint64_t>(w),
                         Purpose::clicks);
    const double p = lock_click_probability(cfg, theta_set + theta);
    const long clicks =
        rng::binomial(click_rng, static_cast<int>(pulses), p);
    const double error =
        static_cast<double>(clicks) / static_cast<double>(pulses) - p_set;
    integral += error;
    const double correction = -(cfg.kp * error + cfg.ki * integral);
    result.trace.push_back({theta, clicks, correction});
    theta += correction;  // takes effect from the next window

    if (cfg.detect_lock_loss) {
      beyond_pi = (std::abs(theta) > M_PI) ? beyond_pi + 1 : 0;
      if (beyond_pi >= kLossWindows)
        throw LockLossError(static_cast<std::size_t>(w));
    }
  }

  double sum = 0.0, sum_sq = 0.0;
  long count = 0;
  for (long w = cfg.settle_windows; w < cfg.n_windows; ++w) {
    const double th = result.trace[static_cast<std::size_t>(w)].theta_rad;
    sum += th;
    sum_sq += th * th;
    ++count;
  }
  const double mean = sum / count;
  result.residual_std_rad = std::sqrt(std::max(0.0, sum_sq / count - mean * mean));
  return result;
}

void write_lock_csv(std::ostream& out, const LockResult& r) {
  out << "window_index,theta_rad,clicks,correction_rad\n";
  char buf[32];
  for (std::size_t w = 0; w < r.trace.size(); ++w) {
    const LockWindow& win = r.trace[w];
    out << w << ',';
    std::snprintf(buf, sizeof buf, "%.17g", win.theta_rad);
    out << buf << ',' << win.clicks << ',';
    std::snprintf(buf, sizeof buf, "%.17g", win.correction_rad);
    out << buf << '\n';
  }
}

}  // namespace odr
