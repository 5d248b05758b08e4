#pragma once

#include <cstdint>
#include <random>

namespace dpsqkd {

/// SplitMix64 finalizer; bijective 64-bit mix.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Sub-seed for stream `stream` of a run seeded with `master`:
/// splitmix64(master ^ splitmix64(stream + 0x9e3779b97f4a7c15)).
/// Every random stream in the toolkit is derived this way from one 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Stream identifiers used with derive_seed.
namespace streams {
inline constexpr std::uint64_t pattern = 1;
inline constexpr std::uint64_t detector_base = 16;  // + 3 * port + {signal, background, detector}
inline constexpr std::uint64_t sweep_base = 1024;   // + sweep point index
}  // namespace streams

/// mt19937_64 with distribution code written out so that draws are
/// bit-identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }
  double exponential(double mean);
  bool bernoulli(double p) { return uniform() < p; }
  /// Failures before the first success of a Bernoulli(p) sequence.
  std::uint64_t geometric(double p);

private:
  std::mt19937_64 engine_;
};

}  // namespace dpsqkd
