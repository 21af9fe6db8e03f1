#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace lhvsim {

// Counter-based uniform stream (Philox4x32-10 keyed by a hash of the master
// seed and a label path). Output depends only on (seed, labels, draw index),
// never on thread schedule or platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t master_seed);
  RandomStream(std::uint64_t master_seed, std::span<const std::uint64_t> labels);

  // Independent child stream; the parent is not advanced.
  RandomStream split(std::uint64_t label) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  explicit RandomStream(std::uint64_t key, int);  // from an already mixed key
  void refill();

  std::uint64_t key_;
  std::uint64_t block_ = 0;
  std::uint64_t draws_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned buffered_ = 0;
};

RandomStream derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels);

namespace detail {
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;
}  // namespace detail

}  // namespace lhvsim
