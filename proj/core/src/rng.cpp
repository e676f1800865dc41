#include "cdfmatch/rng.hpp"

#include <stdexcept>

namespace cdfmatch {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream derive_stream(RngStream parent, std::uint64_t child_index) {
  const std::uint64_t key = mix64(parent.seed ^ mix64(parent.stream_id));
  return RngStream{mix64(key + 0xD1B54A32D192ED03ULL), mix64(key ^ mix64(child_index + 1))};
}

namespace {

std::mt19937_64 seeded_engine(RngStream stream) {
  const std::uint64_t a = mix64(stream.seed);
  const std::uint64_t b = mix64(stream.stream_id ^ 0xA0761D6478BD642FULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomEngine::RandomEngine(RngStream stream) : engine_(seeded_engine(stream)) {}

double RandomEngine::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomEngine::normal(double mean, double sd) {
  return mean + sd * normal_(engine_);
}

std::size_t RandomEngine::below(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("RandomEngine::below: empty range");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~0ULL - (~0ULL % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

}  // namespace cdfmatch
