#include "svre/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace svre {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::index(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::index: empty range");
  const std::uint64_t range = bound;
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::geometric(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("Rng::geometric: rho must lie in (0, 1]");
  const double u = uniform_open_zero();
  if (rho == 1.0) return 1;
  // P(N > k) = (1 - rho)^k, so N = 1 + floor(log U / log(1 - rho)).
  const double k = std::floor(std::log(u) / std::log1p(-rho));
  if (k >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2))
    return std::numeric_limits<std::uint64_t>::max() / 2;
  return 1 + static_cast<std::uint64_t>(k);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(static_cast<std::uint64_t>(stream) * 0x632be59bd9b4e019ULL));
}

}  // namespace svre
