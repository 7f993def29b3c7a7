#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace odr {

// Photon-level phase-locking loop: interference clicks counted per
// window feed a proportional-integral corrector against a random-walk
// phase drift. Side-of-fringe locking: the setpoint sits where the
// click probability is steepest in phase.
struct LockConfig {
  double alpha_sq_lock = 2.0;   // lock-beam mean photons
  double beta_sq_lock = 2.0;    // auxiliary amplitude during locking
  double eta = 0.91;            // detection efficiency at the lock point
  double xi = 0.993;            // interference mode match
  double window_s = 0.010;
  double pulse_rate_hz = 40000.0;
  double drift_std_rad = 0.01;  // random-walk std per window
  // Gains in rad per unit click-probability error; defaults from a grid
  // search over (kp, ki) at the reference drift (see tests).
  double kp = 0.4;
  double ki = 0.02;
  double setpoint_click_prob = -1.0;  // < 0: auto (max-slope point)
  long n_windows = 10000;
  long settle_windows = 100;
  std::uint64_t seed = 0;
  double initial_offset_rad = 0.0;
  bool detect_lock_loss = true;
};

LockConfig validate_lock(const LockConfig& cfg);

struct LockWindow {
  double theta_rad;       // phase deviation from the setpoint, pre-correction
  long clicks;
  double correction_rad;  // applied before the next window
};

struct LockResult {
  double residual_std_rad;  // std of theta after the settling prefix
  std::vector<LockWindow> trace;
  double setpoint_theta_rad;
  double setpoint_click_prob;
  long pulses_per_window;
};

// Click probability of the lock fringe at absolute phase theta:
// 1 - exp(-eta (a^2 + b^2 - 2 xi a b cos theta)).
double lock_click_probability(const LockConfig& cfg, double theta_abs);

// Runs the loop. Throws LockLossError when |theta| stays beyond pi for
// several consecutive windows (only if cfg.detect_lock_loss).
LockResult simulate_lock(const LockConfig& cfg);

// CSV columns: window_index,theta_rad,clicks,correction_rad.
void write_lock_csv(std::ostream& out, const LockResult& r);

}  // namespace odr
