#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace indet {

/// Recorded in every stochastic output so a run can be replayed bit for bit.
inline constexpr std::string_view kGeneratorVersion = "mt19937_64/splitmix64-streams/v1";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `stream` under `parent`. Parallel work uses one stream index per task.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

/// Seeded generator with platform-independent variate conversions
/// (std::*_distribution output differs between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer on [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace indet
