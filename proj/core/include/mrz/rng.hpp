#ifndef MRZ_RNG_HPP
#define MRZ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mrz {

// Splittable counter-friendly PRNG (splitmix64). Every randomized routine in
// the library derives its stream from a single user-visible 64-bit seed, so
// runs are reproducible bit-for-bit regardless of how trials are scheduled.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Stateless mix of (key, index); used to derive independent per-trial
  // streams so that parallel and serial execution produce identical results.
  static constexpr std::uint64_t mix(std::uint64_t key, std::uint64_t index) noexcept {
    std::uint64_t z = key + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(mix(seed, index));
  }

  // Uniform double in [0, 1).
  double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_double(); }

  // Standard exponential draw; strictly positive.
  double next_exponential() noexcept { return -std::log1p(-next_double()); }

  // Uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(next()) * bound) >> 64);
  }

  bool next_bool(double prob_true) noexcept { return next_double() < prob_true; }

 private:
  std::uint64_t state_;
};

}  // namespace mrz

#endif  // MRZ_RNG_HPP
