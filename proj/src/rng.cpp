#include "sposs/rng.hpp"

namespace sposs {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a + kGamma) ^ (b * 0xd6e8feb86659fd93ULL + 1));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(derive_stream(seed, stream)) {}

std::uint64_t Rng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() < p;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

Rng Rng::split(std::uint64_t child) const {
  return Rng(seed_, derive_stream(stream_, child));
}

}  // namespace sposs
