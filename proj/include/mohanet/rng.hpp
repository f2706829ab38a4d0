#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mohanet {

/// Subsystem tags mixed into stream derivation.
enum class StreamTag : std::uint64_t {
  kEmission = 1,
  kMobility = 2,
  kEpidemic = 3,
  kPlacement = 4,
  kReplication = 5,
};

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent seed from (seed, tag, id). Adding a node or a
/// receiver never shifts the seeds of the others.
std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t id);

/// Portable random stream: mt19937_64 plus hand-written transforms, so draws
/// are bit-identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : engine_(seed) {}
  RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t id)
      : engine_(derive_seed(seed, tag, id)) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Exponential with the given mean.
  double exponential(double mean);
  /// Standard normal (Box-Muller, one value per call).
  double normal();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mohanet
