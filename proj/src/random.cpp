#include "dinv/random.hpp"

#include "dinv/numerics.hpp"

namespace dinv {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed),
      stream_id_(stream_id),
      key_(splitmix64(seed + kGolden) ^ splitmix64((stream_id + 1) * kGolden + 0x632be59bd9b4e019ULL)) {}

std::uint64_t SeededStream::bits_at(std::uint64_t index) const noexcept {
  return splitmix64(splitmix64(key_ + (index + 1) * kGolden) ^ key_);
}

double SeededStream::uniform_at(std::uint64_t index) const noexcept {
  return (static_cast<double>(bits_at(index) >> 11) + 0.5) * 0x1.0p-53;
}

double SeededStream::normal_at(std::uint64_t index) const {
  return normal_quantile(uniform_at(index));
}

}  // namespace dinv
