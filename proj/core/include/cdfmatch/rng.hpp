#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cdfmatch {

/// Value handle naming one reproducible random sequence.
///
/// Two streams with equal (seed, stream_id) always produce identical draws.
/// Streams are cheap to copy and safe to hand to concurrent workers; each
/// worker materializes its own RandomEngine.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Deterministically derives an independent child stream.
RngStream derive_stream(RngStream parent, std::uint64_t child_index);

/// Generator bound to one RngStream.
class RandomEngine {
 public:
  explicit RandomEngine(RngStream stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lower, double upper) { return lower + (upper - lower) * uniform(); }
  double normal(double mean = 0.0, double sd = 1.0);
  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// splitmix64 finalizer; exposed for hashing seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace cdfmatch
