#pragma once

#include <cstdint>

namespace reprometa {

// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based uniform stream addressed by a derivation path.
//
// A stream is identified by (root seed, path of child indices). Draws are
// stateless: the same (seed, path, counter) yields the same uniform on any
// machine and under any thread scheduling, which is what makes pooled
// Monte-Carlo runs reproducible across worker counts.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix64(seed ^ kRootTag)) {}

  // Independent sub-stream for the given index (replicate, study, ...).
  RngStream child(std::uint64_t index) const {
    return RngStream(FromState{}, mix64(state_ ^ mix64(index ^ kChildTag)));
  }

  // U(0,1) draw at the given counter position, strictly inside (0,1).
  double uniform(std::uint64_t counter) const {
    const std::uint64_t bits = mix64(state_ ^ mix64(counter ^ kDrawTag));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t state() const { return state_; }

 private:
  struct FromState {};
  RngStream(FromState, std::uint64_t state) : state_(state) {}

  static constexpr std::uint64_t kRootTag = 0x726570726f6d6574ull;
  static constexpr std::uint64_t kChildTag = 0x6368696c64000000ull;
  static constexpr std::uint64_t kDrawTag = 0x6472617700000000ull;

  std::uint64_t state_;
};

}  // namespace reprometa
