#pragma once

#include <array>
#include <cstdint>

namespace bathreuse {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
/// Output for a given (key, counter) is fixed, so a stream can be
/// re-created anywhere from its key alone.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const auto [hi0, lo0] = mulhilo(kMul0, ctr[0]);
      const auto [hi1, lo1] = mulhilo(kMul1, ctr[2]);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  struct HiLo {
    std::uint64_t hi;
    std::uint64_t lo;
  };

  static HiLo mulhilo(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }
};

/// Sequential stream over Philox blocks with a fixed key.
/// The counter is pre-incremented, so the first block uses counter 1.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) : key_{seed, stream_id} {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      ++ctr_[0];
      if (ctr_[0] == 0) ++ctr_[1];
      buf_ = Philox4x64::block(ctr_, key_);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  Philox4x64::Key key_;
  Philox4x64::Counter ctr_{0, 0, 0, 0};
  Philox4x64::Counter buf_{};
  int pos_ = 4;
};

enum class RegionKind : std::uint64_t { dyson = 1, inchworm = 2, bare = 3 };

/// Pack a sampling region and diagram order into a stream id. Every field is
/// stored in its own bit range, so distinct regions never share a stream.
inline std::uint64_t region_stream_id(RegionKind kind, std::int64_t a, std::int64_t b, int m) {
  constexpr std::int64_t offset = 1 << 20;
  const auto ua = static_cast<std::uint64_t>(a + offset) & 0x1FFFFFULL;
  const auto ub = static_cast<std::uint64_t>(b + offset) & 0x1FFFFFULL;
  return (static_cast<std::uint64_t>(kind) << 58) | (ua << 37) | (ub << 16) |
         (static_cast<std::uint64_t>(m) & 0xFFFFULL);
}

/// SplitMix64 finaliser, used to derive per-repetition seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace bathreuse
