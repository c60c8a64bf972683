#ifndef RLSGAN_FEATMAP_HPP
#define RLSGAN_FEATMAP_HPP

#include <string>

#include "rlsgan/linalg.hpp"
#include "rlsgan/nn.hpp"

namespace rlsgan::featmap {

using linalg::Matrix;

enum class FeatureKind { implicit_gaussian, discriminator_layer, external_features };

struct FeatureMapSpec {
  FeatureKind kind = FeatureKind::implicit_gaussian;
  double sigma = 0.15;        // Gaussian kernel bandwidth
  std::string path;           // external feature file
  bool file_has_header = false;
  int sketch_dim = 0;         // 0 = none; explicit kinds only

  void validate() const;
};

struct FeatureBatch {
  Matrix vectors;  // n x dim

  std::size_t n() const { return vectors.rows; }
  std::size_t dim() const { return vectors.cols; }
};

// K(x, y) = exp(-||x - y||^2 / sigma^2) with an exactly-unit diagonal.
Matrix gaussian_kernel_matrix(const Matrix& points, double sigma);

// Post-activation output of the last hidden layer, the features phi_D
// with D(x) = sigmoid(w^T phi_D(x)).
FeatureBatch extract_discriminator_features(const nn::Mlp& disc,
                                            const Matrix& points);

// CSV, one sample per row; a single leading header line is skipped when
// `has_header` is set.
FeatureBatch load_external_features(const std::string& path, bool has_header);
void save_external_features(const FeatureBatch& features,
                            const std::string& path);

// Projects onto the top-k principal directions of the centered feature
// covariance. Stand-in reduction for fixed explicit feature maps.
FeatureBatch pca_reduce(const FeatureBatch& features, int k);

}  // namespace rlsgan::featmap

#endif  // RLSGAN_FEATMAP_HPP
