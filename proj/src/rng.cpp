#include "rlsgan/rng.hpp"

#include <numeric>

#include "rlsgan/error.hpp"

namespace rlsgan {

std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k, Rng& rng) {
  if (k > n)
    fail(ErrorCode::invalid_argument,
         "sample_without_replacement: k exceeds population size");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace rlsgan
