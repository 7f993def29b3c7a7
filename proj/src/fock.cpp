#include "odr/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odr/errors.hpp"

namespace odr {

namespace {

constexpr double kNormTol = 1e-9;

double squared_norm(const FockVector& v) {
  double acc = 0.0;
  for (double a : v.amplitudes) acc += a * a;
  return acc;
}

void require_same_dim(const FockVector& a, const FockVector& b) {
  if (a.dim() != b.dim())
    throw ValidationError("fock dimension mismatch: " +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
}

void require_normalized(const FockVector& v, const char* what) {
  if (std::abs(1.0 - squared_norm(v)) > kNormTol)
    throw ValidationError(std::string(what) +
                          " is not normalized within tolerance");
}

}  // namespace

FockVector FockVector::from_amplitudes(std::vector<double> amplitudes) {
  FockVector v;
  v.amplitudes = std::move(amplitudes);
  for (double a : v.amplitudes)
    if (!std::isfinite(a)) throw ValidationError("fock amplitude not finite");
  v.tail_mass = std::max(0.0, 1.0 - squared_norm(v));
  return v;
}

FockVector coherent_fock(double alpha, std::size_t dim, double tail_tol) {
  if (dim < 1) throw ValidationError("fock dim out of [1,inf)");
  std::vector<double> amps(dim);
  // a_0 = e^(-alpha^2/2), a_{n+1} = a_n alpha / sqrt(n+1); no factorials.
  amps[0] = std::exp(-0.5 * alpha * alpha);
  double mass = amps[0] * amps[0];
  for (std::size_t n = 1; n < dim; ++n) {
    amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    mass += amps[n] * amps[n];
  }
  const double tail = std::max(0.0, 1.0 - mass);
  if (tail > tail_tol) {
    // Find the dimension that would have sufficed, for the message.
    std::size_t need = dim;
    double a = amps[dim - 1];
    double m = mass;
    while (need < kFockDimCap && 1.0 - m > tail_tol) {
      a *= alpha / std::sqrt(static_cast<double>(need));
      m += a * a;
      ++need;
    }
    throw NumericError("coherent_fock: tail mass " + std::to_string(tail) +
                       " above tolerance at dim " + std::to_string(dim) +
                       "; need dim >= " + std::to_string(need));
  }
  FockVector v;
  v.amplitudes = std::move(amps);
  v.tail_mass = tail;
  return v;
}

FockVector coherent_fock(double alpha) {
  // Poisson tail of mean alpha^2; grow until below tolerance.
  const double mean = alpha * alpha;
  std::size_t dim = static_cast<std::size_t>(
      std::ceil(mean + 10.0 * std::sqrt(mean + 1.0) + 10.0));
  dim = std::min(dim, kFockDimCap);
  while (true) {
    try {
      return coherent_fock(alpha, dim);
    } catch (const NumericError&) {
      if (dim >= kFockDimCap) throw;
      dim = std::min(kFockDimCap, dim * 2);
    }
  }
}

FockVector linear_combination(double c0, const FockVector& a, double c1,
                              const FockVector& b) {
  require_same_dim(a, b);
  std::vector<double> amps(a.dim());
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] = c0 * a.amplitudes[i] + c1 * b.amplitudes[i];
  return FockVector::from_amplitudes(std::move(amps));
}

double overlap(const FockVector& a, const FockVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    acc += a.amplitudes[i] * b.amplitudes[i];
  return acc;
}

double overlap_closed(double alpha, double beta) {
  const double d = alpha - beta;
  return std::exp(-0.5 * d * d);
}

BerResult gram_helstrom(const FockVector& plus, const FockVector& minus,
                        double prior_plus) {
  require_same_dim(plus, minus);
  if (prior_plus < 0.0 || prior_plus > 1.0)
    throw ValidationError("prior_plus out of [0,1]");
  if (plus.tail_mass > kFockTailTol || minus.tail_mass > kFockTailTol)
    throw NumericError("gram_helstrom: input tail mass above tolerance");
  require_normalized(plus, "gram_helstrom state");
  require_normalized(minus, "gram_helstrom state");

  const double p = prior_plus;
  const double q = 1.0 - prior_plus;
  const double gamma = overlap(plus, minus);
  const double ortho_sq = 1.0 - gamma * gamma;
  if (ortho_sq <= 1e-14) {
    // States coincide up to sign; the best guess is the likelier prior.
    return BerResult::oracle(std::min(p, q));
  }

  // Basis {e1 = |+>, e2 = (|-> - gamma |+>)/sqrt(1 - gamma^2)}:
  // |+> = (1, 0), |-> = (gamma, s) with s = sqrt(1 - gamma^2).
  const double s = std::sqrt(ortho_sq);
  // M = p |+><+| - q |-><-|, symmetric 2x2.
  const double m00 = p - q * gamma * gamma;
  const double m01 = -q * gamma * s;
  const double m11 = -q * ortho_sq;
  const double half_tr = 0.5 * (m00 + m11);
  const double det = m00 * m11 - m01 * m01;
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - det));
  const double lambda1 = half_tr + disc;
  const double lambda2 = half_tr - disc;
  // P_err = (1 - ||M||_1) / 2 with ||M||_1 = |l1| + |l2|.
  const double err = 0.5 * (1.0 - std::abs(lambda1) - std::abs(lambda2));
  return BerResult::oracle(std::clamp(err, 0.0, 1.0));
}

double projection_probability(const FockVector& projector,
                              const FockVector& state) {
  require_normalized(projector, "projector");
  const double amp = overlap(projector, state);
  return amp * amp;
}

}  // namespace odr
