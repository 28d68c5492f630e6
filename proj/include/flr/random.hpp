#pragma once

#include <array>
#include <cstdint>

namespace flr {

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3"). Pure function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

inline constexpr const char* kPrngId = "philox4x32-10/box-muller/v1";

// Standard normal stream keyed by a 64-bit seed. Draw i of stream s comes
// from counter block (i / 2, s), so every draw is addressable and streams do
// not overlap.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint32_t stream);

  double operator()();
  // Draw at an absolute position, independent of the stream's cursor.
  double at(std::uint64_t index) const;

 private:
  std::array<double, 2> block(std::uint64_t block_index) const;

  PhiloxKey key_;
  std::uint32_t stream_;
  std::uint64_t next_ = 0;
  std::array<double, 2> cache_{};
  std::uint64_t cached_block_ = ~std::uint64_t{0};
};

}  // namespace flr
