#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace ebsbm {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Identifies one random stream: a master value plus a task discriminator.
/// Two seeds that differ in either field give unrelated streams.
struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream_id = 0;

  /// Child stream for sub-task `index`. Deterministic and collision-free in
  /// practice; children of children are fine.
  constexpr Seed derive(std::uint64_t index) const noexcept {
    return Seed{value, mix64(stream_id ^ mix64(index + 0x9e3779b97f4a7c15ULL))};
  }

  bool operator==(const Seed&) const = default;
};

/// Counter-based generator: the k-th output is mix64(key + (k+1) * golden),
/// where key hashes (value, stream_id). Satisfies UniformRandomBitGenerator,
/// so it works with <random> distributions and std::shuffle.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(Seed seed) noexcept
      : key_(mix64(seed.value ^ mix64(seed.stream_id ^ 0xd1b54a32d192ed03ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform_unit(CounterRng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound) (Lemire's multiply-shift with
/// rejection). `bound` must be positive.
inline std::uint64_t uniform_below(CounterRng& rng, std::uint64_t bound) noexcept {
  __extension__ typedef unsigned __int128 u128;
  u128 product = u128{rng()} * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = u128{rng()} * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

/// Fisher-Yates shuffle driven by uniform_below, so the result only depends
/// on the seed and not on the standard library in use.
template <typename T>
void shuffle(std::span<T> items, CounterRng& rng) noexcept {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace ebsbm
