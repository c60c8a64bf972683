#include "rlsgan/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"
#include "rlsgan/rng.hpp"

namespace rlsgan::synth {

namespace {

std::vector<double> normalized(std::vector<double> w) {
  double s = 0.0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
  return w;
}

}  // namespace

MixtureSpec ring_spec() {
  MixtureSpec spec;
  spec.means = linalg::Matrix(8, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    // Mode i+1 sits at angle 2*pi*(i+1)/8; modes 1..4 are the minority.
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i + 1) / 8.0;
    spec.means(i, 0) = 2.5 * std::cos(angle);
    spec.means(i, 1) = 2.5 * std::sin(angle);
  }
  spec.sigma = 0.05;
  spec.mode_weights = normalized({0.05, 0.05, 0.05, 0.05, 1, 1, 1, 1});
  return spec;
}

MixtureSpec grid_spec() {
  MixtureSpec spec;
  spec.means = linalg::Matrix(25, 2);
  std::vector<double> weights(25, 1.0);
  // Column-major from the leftmost column; the first two columns are the
  // depleted 2x5 block.
  std::size_t m = 0;
  for (int cx = -4; cx <= 4; cx += 2) {
    for (int cy = -4; cy <= 4; cy += 2) {
      spec.means(m, 0) = cx;
      spec.means(m, 1) = cy;
      if (m < 10) weights[m] = 0.05;
      ++m;
    }
  }
  spec.sigma = 0.05;
  spec.mode_weights = normalized(weights);
  return spec;
}

MixtureSpec motivating_1d_spec() {
  MixtureSpec spec;
  spec.means = linalg::Matrix(3, 1);
  spec.means(0, 0) = 0.0;
  spec.means(1, 0) = 10.0;
  spec.means(2, 0) = -10.0;
  spec.sigma = 1.0;
  spec.mode_weights = {0.9, 0.05, 0.05};
  return spec;
}

MixtureSpec spec_by_name(const std::string& kind) {
  if (kind == "ring") return ring_spec();
  if (kind == "grid") return grid_spec();
  if (kind == "1d-motivating") return motivating_1d_spec();
  fail(ErrorCode::invalid_argument, "unknown dataset kind: " + kind);
}

Dataset sample_mixture(const MixtureSpec& spec, std::size_t n,
                       std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_argument, "dataset size must be >= 1");
  if (spec.n_modes() == 0) fail(ErrorCode::invalid_argument, "mixture has no modes");

  std::vector<double> cum(spec.mode_weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    acc += spec.mode_weights[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;

  Rng rng(seed);
  Dataset data;
  data.points = linalg::Matrix(n, spec.dim());
  data.mode_labels.resize(n);
  data.spec = spec;
  data.has_spec = true;
  data.seed = seed;

  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    const std::size_t mode =
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
    data.mode_labels[i] = static_cast<int>(mode);
    for (std::size_t d = 0; d < spec.dim(); ++d)
      data.points(i, d) = spec.means(mode, d) + spec.sigma * rng.normal();
  }
  return data;
}

Dataset make_ring(std::size_t n, std::uint64_t seed) {
  return sample_mixture(ring_spec(), n, seed);
}

Dataset make_grid(std::size_t n, std::uint64_t seed) {
  return sample_mixture(grid_spec(), n, seed);
}

Dataset make_1d_motivating(std::size_t n, std::uint64_t seed) {
  return sample_mixture(motivating_1d_spec(), n, seed);
}

Dataset make_by_name(const std::string& kind, std::size_t n,
                     std::uint64_t seed) {
  return sample_mixture(spec_by_name(kind), n, seed);
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ostringstream out;
  out << (data.dim() == 1 ? "x,mode_label" : "x,y,mode_label") << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t d = 0; d < data.dim(); ++d)
      out << io::format_double(data.points(i, d)) << ",";
    out << (data.mode_labels[i] + 1) << "\n";
  }
  io::write_file_atomic(path, out.str());
}

Dataset load_csv(const std::string& path) {
  const std::vector<std::string> lines = io::split_lines(io::read_file(path));
  Dataset data;
  std::size_t start = 0;
  if (!lines.empty() && io::looks_like_header(lines[0])) start = 1;

  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t count = 0;
  for (std::size_t li = start; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = io::split_csv_row(lines[li]);
    if (fields.size() < 2)
      fail(ErrorCode::parse, "line " + std::to_string(li + 1) + ": expected at least 2 fields");
    const std::size_t row_dim = fields.size() - 1;
    if (dim == 0) dim = row_dim;
    if (row_dim != dim)
      fail(ErrorCode::parse, "line " + std::to_string(li + 1) + ": inconsistent column count");
    for (std::size_t d = 0; d < dim; ++d)
      values.push_back(io::parse_double(fields[d], li + 1));
    const long label = io::parse_long(fields[dim], li + 1);
    if (label < 1)
      fail(ErrorCode::parse, "line " + std::to_string(li + 1) + ": mode label must be >= 1");
    data.mode_labels.push_back(static_cast<int>(label - 1));
    ++count;
  }
  if (count == 0) fail(ErrorCode::parse, "dataset file has no data rows: " + path);

  data.points = linalg::Matrix(count, dim);
  data.points.data = std::move(values);
  return data;
}

}  // namespace rlsgan::synth
