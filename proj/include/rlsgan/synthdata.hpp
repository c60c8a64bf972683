#ifndef RLSGAN_SYNTHDATA_HPP
#define RLSGAN_SYNTHDATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rlsgan/linalg.hpp"

namespace rlsgan::synth {

// A finite isotropic Gaussian mixture: mode centers, one shared standard
// deviation, and per-mode sampling weights.
struct MixtureSpec {
  linalg::Matrix means;              // n_modes x dim
  double sigma = 0.0;
  std::vector<double> mode_weights;  // sums to 1

  std::size_t n_modes() const { return means.rows; }
  std::size_t dim() const { return means.cols; }
};

struct Dataset {
  linalg::Matrix points;        // n x dim
  std::vector<int> mode_labels; // 0-based index into spec.means
  MixtureSpec spec;
  bool has_spec = false;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.rows; }
  std::size_t dim() const { return points.cols; }
};

// Eight modes on the radius-2.5 circle, std 0.05; modes 1..4 carry 0.05x
// the weight of modes 5..8.
MixtureSpec ring_spec();

// 5x5 grid with spacing 2 centered at the origin, std 0.05; the two
// leftmost columns (10 modes, column-major from the left) carry 0.05x
// the weight of the rest.
MixtureSpec grid_spec();

// 1D mixture 0.9*N(0,1) + 0.05*N(10,1) + 0.05*N(-10,1).
MixtureSpec motivating_1d_spec();

// Spec lookup by dataset kind name: "ring", "grid", "1d-motivating".
MixtureSpec spec_by_name(const std::string& kind);

Dataset sample_mixture(const MixtureSpec& spec, std::size_t n,
                       std::uint64_t seed);

Dataset make_ring(std::size_t n, std::uint64_t seed);
Dataset make_grid(std::size_t n, std::uint64_t seed);
Dataset make_1d_motivating(std::size_t n, std::uint64_t seed);
Dataset make_by_name(const std::string& kind, std::size_t n,
                     std::uint64_t seed);

// CSV with header "x,y,mode_label" ("x,mode_label" in 1D); labels are
// written 1-based.
void save_csv(const Dataset& data, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace rlsgan::synth

#endif  // RLSGAN_SYNTHDATA_HPP
