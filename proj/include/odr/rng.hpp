#pragma once

#include <array>
#include <cstdint>

namespace odr::rng {

// Philox4x32-10 block function (Salmon et al., SC 2011). Counter-based:
// the output is a pure function of (counter, key), so any draw in a
// simulation can be addressed directly and execution order or thread
// count cannot change the stream.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Purpose tags keep draws for different roles in disjoint streams even
// when they share (seed, stream index).
enum class Purpose : std::uint32_t {
  bit = 0,
  phase = 1,
  poisson = 2,
  tes_noise = 3,
  drift = 4,
  clicks = 5,
  derive = 6,
};

// One deterministic stream addressed by (seed, stream, purpose).
// Consecutive draws advance an internal 64-bit block counter.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, Purpose purpose)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)),
        purpose_(static_cast<std::uint32_t>(purpose)) {}

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); 53-bit resolution.
  double u01();

  // Standard normal via Box-Muller; the spare value is cached.
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint32_t purpose_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Poisson sample by CDF inversion with sequential search from k = 0.
// Exact for the means used here (< ~700 before e^-mean underflows);
// throws NumericError beyond the iteration cap.
int poisson(CounterRng& rng, double mean);

// Binomial sample by CDF inversion walking outward from the mode, so the
// PMF never underflows for large n. One uniform per draw.
int binomial(CounterRng& rng, int n, double p);

// Stateless sub-seed derivation for nested runs (e.g. one seed per sweep
// grid point).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace odr::rng
