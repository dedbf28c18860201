#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace sposs {

/// SplitMix64 output function. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Combines two words into a substream identifier.
std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b);

/// Counter-based generator: the i-th output is mix64(key + (i+1) * gamma) with
/// key derived from (seed, stream). Any (seed, stream, counter) triple maps to
/// the same value on every platform, so runs are bit-reproducible and trials
/// can be dispatched to threads in any order.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next(); }

  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform();

  /// true with probability p; p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p);

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Independent generator for a child stream.
  Rng split(std::uint64_t child) const;

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream tags used to separate the randomness of independent phases.
namespace stream_tag {
inline constexpr std::uint64_t kActive = 0x41435456;      // R draws
inline constexpr std::uint64_t kQuery = 0x51554552;       // Q draws
inline constexpr std::uint64_t kMarginals = 0x4d415247;   // marginal estimation
inline constexpr std::uint64_t kCrs = 0x43525321;         // CRS internals
inline constexpr std::uint64_t kMultilinear = 0x4d4c4e52;
inline constexpr std::uint64_t kBalance = 0x42414c41;
}  // namespace stream_tag

}  // namespace sposs
