#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace gdkd {

/// Seeded, counter-based random stream (xoshiro256** seeded via splitmix64).
/// The same (seed, stream, call sequence) always yields the same outputs,
/// independent of platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Derived stream with the same seed; distinct ids give independent streams.
  Rng stream(std::uint64_t id) const { return Rng(seed_, mix(stream_, id)); }

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();

  /// Standard normal (Box-Muller).
  double normal();

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  /// Combine values into a single stream id.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

/// dim i.i.d. standard normal entries. dim must be >= 1.
std::vector<double> gaussian_vector(Rng& rng, std::size_t dim);

}  // namespace gdkd
