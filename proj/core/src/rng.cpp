#include "rauzy/rng.hpp"

#include <bit>

namespace rauzy {

std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> counter, std::array<std::uint64_t, 2> key) {
  constexpr int kRotations[8] = {16, 42, 12, 31, 16, 32, 24, 21};
  const std::uint64_t ks[3] = {key[0], key[1], 0x1BD11BDAA9FC1A22ULL ^ key[0] ^ key[1]};
  std::uint64_t x0 = counter[0] + ks[0];
  std::uint64_t x1 = counter[1] + ks[1];
  for (int r = 0; r < 20; ++r) {
    x0 += x1;
    x1 = std::rotl(x1, kRotations[r % 8]);
    x1 ^= x0;
    if (r % 4 == 3) {
      const unsigned s = static_cast<unsigned>(r / 4 + 1);
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + s;
    }
  }
  return {x0, x1};
}

RandomStream RandomStream::substream(std::uint64_t id) const {
  // Mix the parent id through the cipher so sibling and nested ids don't collide.
  auto mixed = threefry2x64({key_[1], id}, {key_[0], 0x9E3779B97F4A7C15ULL});
  return RandomStream(key_[0], mixed[0]);
}

RandomStream::result_type RandomStream::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return block_[1];
  }
  block_ = threefry2x64({counter_++, 0}, key_);
  has_spare_ = true;
  return block_[0];
}

double RandomStream::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t stable_hash(const void* data, std::size_t size, std::uint64_t basis) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rauzy
