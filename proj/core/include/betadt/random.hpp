#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace betadt {

// Keyed pseudo-random stream. The state is derived from (seed, stream_id) by
// SplitMix64 mixing and then advanced by xoshiro256**. Construction is cheap,
// so Monte Carlo loops open one stream per sample index and their results do
// not depend on how samples are distributed over workers.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent child stream; children of distinct (id) are distinct streams.
  RandomStream substream(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> s_{};
};

// Stream identifiers used by the library so that different purposes never
// share draws for the same seed.
namespace streams {
inline constexpr std::uint64_t kTypicalCells = 0x1000'0000ULL;
inline constexpr std::uint64_t kAuxiliary = 0x2000'0000ULL;
inline constexpr std::uint64_t kPoisson = 0x3000'0000ULL;
inline constexpr std::uint64_t kAngles = 0x4000'0000ULL;
inline constexpr std::uint64_t kGaussian = 0x5000'0000ULL;
inline constexpr std::uint64_t kMcmc = 0x6000'0000ULL;
inline constexpr std::uint64_t kHull = 0x7000'0000ULL;
}  // namespace streams

}  // namespace betadt
