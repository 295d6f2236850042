#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rauzy {

// Threefry-2x64 with 20 rounds: a keyed bijection on 128-bit counters.
std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> counter, std::array<std::uint64_t, 2> key);

// Counter-based random stream keyed by (seed, stream id). Substreams are
// derived from the id alone, so trial i always sees the same numbers no
// matter which thread runs it or in which order. Satisfies
// UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) : key_{seed, stream} {}

  RandomStream substream(std::uint64_t id) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream_id() const { return key_[1]; }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> block_{};
  bool has_spare_ = false;
};

// Stable 64-bit FNV-1a; used to derive seeds from text.
std::uint64_t stable_hash(const void* data, std::size_t size, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace rauzy
