#ifndef OSA_RNG_HPP
#define OSA_RNG_HPP

#include <cstdint>

namespace osa {

// Self-contained 64-bit stream (splitmix64). Every simulation run owns
// exactly one stream; results are bit-reproducible across platforms and
// worker counts as long as streams are never shared between runs.
//
// Draw order inside a slot is fixed: true channel states for channels
// 0..N-1, then sensing outcomes for the sensed channels in ascending
// index, then any randomness the policy itself consumes.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform index in [0, n), n >= 1. Multiply-shift; the bias at
  // 64-bit width is far below anything a simulation can resolve.
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Seed for run r of an experiment: hash(master_seed, run_index).
inline std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                     std::uint64_t run_index) {
  SplitMix64 h(master_seed ^ (0xA0761D6478BD642Full + run_index * 0xE7037ED1A0B428DBull));
  h.next_u64();
  return h.next_u64();
}

}  // namespace osa

#endif  // OSA_RNG_HPP
