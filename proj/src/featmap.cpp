#include "rlsgan/featmap.hpp"

#include <cmath>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"

namespace rlsgan::featmap {

void FeatureMapSpec::validate() const {
  if (kind == FeatureKind::implicit_gaussian) {
    if (!(sigma > 0.0))
      fail(ErrorCode::invalid_argument, "feature map: sigma must be > 0");
    if (sketch_dim != 0)
      fail(ErrorCode::invalid_argument,
           "feature map: sketch_dim is only valid for explicit feature maps");
  }
  if (sketch_dim < 0)
    fail(ErrorCode::invalid_argument, "feature map: sketch_dim must be >= 1");
  if (kind == FeatureKind::external_features && path.empty())
    fail(ErrorCode::invalid_argument, "feature map: external features need a path");
}

Matrix gaussian_kernel_matrix(const Matrix& points, double sigma) {
  if (!(sigma > 0.0))
    fail(ErrorCode::invalid_argument, "gaussian_kernel_matrix: sigma must be > 0");
  const std::size_t n = points.rows;
  const double inv = 1.0 / (sigma * sigma);
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    const double* xi = points.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* xj = points.row(j);
      double d2 = 0.0;
      for (std::size_t d = 0; d < points.cols; ++d) {
        const double diff = xi[d] - xj[d];
        d2 += diff * diff;
      }
      const double v = std::exp(-d2 * inv);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

FeatureBatch extract_discriminator_features(const nn::Mlp& disc,
                                            const Matrix& points) {
  if (disc.layers.size() < 2)
    fail(ErrorCode::invalid_argument,
         "extract_discriminator_features: network needs at least 2 layers");
  nn::ForwardResult r = nn::forward(disc, points);
  return FeatureBatch{std::move(r.hidden)};
}

FeatureBatch load_external_features(const std::string& path, bool has_header) {
  const std::vector<std::string> lines = io::split_lines(io::read_file(path));
  std::size_t start = has_header ? 1 : 0;

  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t count = 0;
  for (std::size_t li = start; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = io::split_csv_row(lines[li]);
    if (dim == 0) dim = fields.size();
    if (fields.size() != dim)
      fail(ErrorCode::parse,
           "line " + std::to_string(li + 1) + ": inconsistent row width");
    for (const std::string& f : fields) {
      const double v = io::parse_double(f, li + 1);
      if (!std::isfinite(v))
        fail(ErrorCode::parse,
             "line " + std::to_string(li + 1) + ": non-finite feature value");
      values.push_back(v);
    }
    ++count;
  }
  if (count == 0)
    fail(ErrorCode::parse, "feature file has no data rows: " + path);

  FeatureBatch batch;
  batch.vectors = Matrix(count, dim);
  batch.vectors.data = std::move(values);
  return batch;
}

void save_external_features(const FeatureBatch& features,
                            const std::string& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < features.n(); ++i) {
    const double* row = features.vectors.row(i);
    for (std::size_t j = 0; j < features.dim(); ++j)
      out << io::format_double(row[j]) << (j + 1 == features.dim() ? "\n" : ",");
  }
  io::write_file_atomic(path, out.str());
}

FeatureBatch pca_reduce(const FeatureBatch& features, int k) {
  if (k < 1) fail(ErrorCode::invalid_argument, "pca_reduce: k must be >= 1");
  const std::size_t n = features.n();
  const std::size_t m = features.dim();
  if (static_cast<std::size_t>(k) >= m) return features;

  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = features.vectors.row(i);
    for (std::size_t j = 0; j < m; ++j) mean[j] += row[j];
  }
  for (double& v : mean) v /= static_cast<double>(n);

  Matrix centered(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      centered(i, j) = features.vectors(i, j) - mean[j];

  Matrix cov = linalg::matmul_tn(centered, centered);
  for (double& v : cov.data) v /= static_cast<double>(n);

  linalg::EigenDecomposition e = linalg::sym_eig(cov);
  Matrix basis(m, static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < basis.cols; ++j)
    for (std::size_t i = 0; i < m; ++i) basis(i, j) = e.eigenvectors(i, j);

  return FeatureBatch{linalg::matmul(centered, basis)};
}

}  // namespace rlsgan::featmap
