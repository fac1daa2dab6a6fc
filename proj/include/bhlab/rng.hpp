#pragma once

#include <cmath>
#include <cstdint>

namespace bhlab {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64: value c of stream `key` is mix64(key + (c+1) * golden).
/// Substreams are keyed by mixing the parent key with an index.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t at(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGolden); }
  CounterRng derive(std::uint64_t index) const { return CounterRng(mix64(key_ ^ mix64(index + kGolden))); }

  std::uint64_t next() { return at(counter_++); }
  /// Uniform in (0, 1].
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bhlab
