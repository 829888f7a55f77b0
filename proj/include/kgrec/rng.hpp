#pragma once

#include <cstdint>
#include <vector>

namespace kgrec {

/// Logical random streams. Every stochastic step of the pipeline draws from
/// its own (seed, stream) generator so that e.g. changing the number of
/// training epochs never perturbs the dataset split.
enum class RngStream : std::uint64_t {
  Split = 1,
  Init = 2,
  Corruption = 3,
  RandomBaseline = 4,
  Shuffle = 5,
  RecNegatives = 6,
};

/// Combines stream parts into a single sub-stream identifier.
std::uint64_t substream(std::uint64_t a, std::uint64_t b);
std::uint64_t substream(RngStream s, std::uint64_t b);

/// Counter-mode SplitMix64. Output i is a bijective mix of
/// key + (i+1) * golden-gamma, so the sequence is a pure function of
/// (seed, stream) and independent of platform or standard library.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  Rng(std::uint64_t seed, RngStream stream)
      : Rng(seed, static_cast<std::uint64_t>(stream)) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53 random bits.
  double next_double();

  /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n);

  /// Standard normal via Box-Muller.
  double next_normal();

  /// Deterministic Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace kgrec
