#ifndef RLSGAN_SVG_HPP
#define RLSGAN_SVG_HPP

#include <string>
#include <vector>

#include "rlsgan/linalg.hpp"

namespace rlsgan::svg {

struct Series {
  linalg::Matrix points;  // n x 2 (or n x 1, drawn at y = 0)
  std::string color;      // CSS color
  double radius = 2.0;
};

// Fixed-canvas scatter plot; output bytes depend only on the inputs.
void write_scatter(const std::string& path, const std::vector<Series>& series);

// Scatter colored by score: higher scores draw darker, mirroring the
// leverage-score figures.
void write_score_scatter(const std::string& path, const linalg::Matrix& points,
                         const std::vector<double>& scores);

}  // namespace rlsgan::svg

#endif  // RLSGAN_SVG_HPP
