#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace svre {

/// Seeded random source whose every draw is defined here rather than by the
/// standard library's implementation-specific distributions, so traces are
/// bit-identical across compilers.
///
///  - engine: std::mt19937_64 (output sequence fixed by the standard)
///  - uniform: top 53 bits scaled to [0, 1)
///  - index: Lemire's nearly-divisionless bounded integer
///  - normal: Box-Muller, both outputs used (cached second value)
///  - geometric: inversion, support {1, 2, ...}, mean 1/rho
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  // Uniform on (0, 1]; safe to take the log of.
  double uniform_open_zero() { return 1.0 - uniform(); }
  std::size_t index(std::size_t bound);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t geometric(double rho);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Independent named streams derived from one master seed.
enum class Stream : std::uint64_t {
  kProblem = 1,
  kEpochLength = 2,
  kExtrapolationIndex = 3,
  kUpdateIndex = 4,
  kRestartCoin = 5,
  kInit = 6,
  kAnalysis = 7,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, Stream stream);
inline Rng make_stream(std::uint64_t master, Stream stream) { return Rng(derive_seed(master, stream)); }

}  // namespace svre
