#include "lhvsim/random_stream.hpp"

namespace lhvsim {

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace detail

namespace {

constexpr std::uint64_t kRootSalt = 0x6C687673696D2D31ULL;

std::uint64_t mix_label(std::uint64_t key, std::uint64_t label) noexcept {
  return detail::splitmix64(key ^ detail::splitmix64(label + 0xA0761D6478BD642FULL));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed)
    : key_(detail::splitmix64(master_seed ^ kRootSalt)) {}

RandomStream::RandomStream(std::uint64_t master_seed, std::span<const std::uint64_t> labels)
    : RandomStream(master_seed) {
  for (std::uint64_t label : labels) key_ = mix_label(key_, label);
}

RandomStream::RandomStream(std::uint64_t key, int) : key_(key) {}

RandomStream RandomStream::split(std::uint64_t label) const {
  return RandomStream(mix_label(key_, label), 0);
}

void RandomStream::refill() {
  const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_),
                                         static_cast<std::uint32_t>(block_ >> 32), 0u, 0u};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(key_),
                                         static_cast<std::uint32_t>(key_ >> 32)};
  const auto out = detail::philox4x32(ctr, key);
  buffer_[0] = (std::uint64_t{out[0]} << 32) | out[1];
  buffer_[1] = (std::uint64_t{out[2]} << 32) | out[3];
  buffered_ = 2;
  ++block_;
}

std::uint64_t RandomStream::next_u64() {
  if (buffered_ == 0) refill();
  ++draws_;
  return buffer_[2 - buffered_--];
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomStream derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels) {
  return RandomStream(master_seed, std::span<const std::uint64_t>(labels.begin(), labels.size()));
}

}  // namespace lhvsim
