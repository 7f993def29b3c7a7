#include "odr/rng.hpp"

#include <cmath>

#include "odr/errors.hpp"

namespace odr::rng {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                      std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

inline void one_round(std::array<std::uint32_t, 4>& ctr,
                      const std::array<std::uint32_t, 2>& key) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
  mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW32A;
      key[1] += kPhiloxW32B;
    }
    one_round(counter, key);
  }
  return counter;
}

std::uint64_t CounterRng::next_u64() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32) ^ purpose_, stream_lo_,
      stream_hi_};
  ++block_;
  const auto out = philox4x32(ctr, key_);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double CounterRng::u01() {
  // 53 high bits, offset by half an ulp to stay inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = u01();
  const double u2 = u01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

int poisson(CounterRng& rng, double mean) {
  if (mean < 0.0) throw ValidationError("poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  const double u = rng.u01();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  int k = 0;
  // Cap well beyond any realistic tail for the photon-level means here.
  const int cap = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 200.0);
  while (u > cdf) {
    ++k;
    if (k > cap) throw NumericError("poisson inversion did not terminate");
    pmf *= mean / k;
    cdf += pmf;
  }
  return k;
}

int binomial(CounterRng& rng, int n, double p) {
  if (n < 0) throw ValidationError("binomial n must be >= 0");
  if (p < 0.0 || p > 1.0) throw ValidationError("binomial p must be in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;

  const double u = rng.u01();
  const int mode = static_cast<int>((n + 1) * p);
  const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                              std::lgamma(n - mode + 1.0) +
                              mode * std::log(p) +
                              (n - mode) * std::log1p(-p);
  const double odds = p / (1.0 - p);

  // Interleaved walk below/above the mode; each step extends the covered
  // probability mass until it passes u.
  double pmf_lo = std::exp(log_pmf_mode);
  double pmf_hi = pmf_lo;
  double cdf = pmf_lo;
  int lo = mode;
  int hi = mode;
  if (u <= cdf) return mode;
  while (lo > 0 || hi < n) {
    if (lo > 0) {
      pmf_lo *= lo / (odds * (n - lo + 1));
      --lo;
      cdf += pmf_lo;
      if (u <= cdf) return lo;
    }
    if (hi < n) {
      pmf_hi *= odds * (n - hi) / (hi + 1);
      ++hi;
      cdf += pmf_hi;
      if (u <= cdf) return hi;
    }
  }
  // u fell into the last sliver of roundoff beyond the accumulated mass.
  return hi;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index, Purpose::derive);
  return rng.next_u64();
}

}  // namespace odr::rng
