#ifndef RLSGAN_RNG_HPP
#define RLSGAN_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace rlsgan {

// Mixes a seed with a stream id so derived streams (evaluation draws,
// per-round seeds) never overlap the training stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeded random source owned by a single consumer (sampler or training
// loop). All draws go through one mt19937_64 so a fixed seed gives a
// fixed stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform01() { return unif01_(gen_); }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(gen_);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif01_{0.0, 1.0};
};

// First k entries of a Fisher-Yates shuffle over 0..n-1: a uniform draw
// of k distinct indices.
std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k, Rng& rng);

}  // namespace rlsgan

#endif  // RLSGAN_RNG_HPP
