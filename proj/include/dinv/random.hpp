#pragma once

#include <cstdint>

namespace dinv {

/// Counter-based random stream. Draw number i of stream (seed, stream_id) is
/// a pure function of the triple, computed with the SplitMix64 finaliser, so
/// substreams are independent by construction and any partition of the
/// indices across threads reproduces the same values bit for bit.
class SeededStream {
public:
  static constexpr std::uint64_t kDefaultSeed = 20100917;

  explicit SeededStream(std::uint64_t seed = kDefaultSeed, std::uint64_t stream_id = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return counter_; }

  // Random access, no state change.
  std::uint64_t bits_at(std::uint64_t index) const noexcept;
  // Uniform on the open interval (0, 1), 53 random bits.
  double uniform_at(std::uint64_t index) const noexcept;
  // Standard normal by inversion of one uniform.
  double normal_at(std::uint64_t index) const;

  // Sequential use.
  std::uint64_t next_bits() noexcept { return bits_at(counter_++); }
  double uniform() noexcept { return uniform_at(counter_++); }
  double normal() { return normal_at(counter_++); }

  void seek(std::uint64_t index) noexcept { counter_ = index; }

  SeededStream substream(std::uint64_t stream_id) const noexcept {
    return SeededStream(seed_, stream_id);
  }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dinv
