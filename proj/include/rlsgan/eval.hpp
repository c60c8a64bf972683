#ifndef RLSGAN_EVAL_HPP
#define RLSGAN_EVAL_HPP

#include <string>
#include <vector>

#include "rlsgan/linalg.hpp"
#include "rlsgan/synthdata.hpp"

namespace rlsgan::eval {

// A mode counts as covered once this many samples fall within 3 sigma of
// its center.
constexpr long kCoveredMinSamples = 50;

struct EvalReport {
  std::vector<long> per_mode_counts;  // samples within 3 sigma of each center
  int modes_covered = 0;
  double hq_fraction = 0.0;
  double kl_to_uniform = 0.0;
  std::size_t n_samples = 0;

  std::string csv_header() const;
  std::string csv_row() const;
  std::string pretty() const;
};

// Assigns every sample to its nearest mode center; a sample is
// high-quality when that distance is at most 3 sigma. Per-mode counts
// include only high-quality samples.
EvalReport evaluate(const linalg::Matrix& samples,
                    const synth::MixtureSpec& spec);

// KL(q || uniform) of the mode histogram q = counts / sum(counts), with
// the 0*log(0) = 0 convention.
double kl_mode_histogram(const std::vector<long>& per_mode_counts);

}  // namespace rlsgan::eval

#endif  // RLSGAN_EVAL_HPP
