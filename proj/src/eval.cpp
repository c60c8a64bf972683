#include "rlsgan/eval.hpp"

#include <cmath>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"

namespace rlsgan::eval {

EvalReport evaluate(const linalg::Matrix& samples,
                    const synth::MixtureSpec& spec) {
  if (spec.n_modes() < 1)
    fail(ErrorCode::invalid_argument, "evaluate: spec has no modes");
  if (samples.rows == 0)
    fail(ErrorCode::invalid_argument, "evaluate: empty sample set");
  if (samples.cols != spec.dim())
    fail(ErrorCode::dimension_mismatch, "evaluate: sample dimension disagrees with spec");

  const std::size_t n_modes = spec.n_modes();
  const double r2 = 9.0 * spec.sigma * spec.sigma;  // (3 sigma)^2

  EvalReport report;
  report.per_mode_counts.assign(n_modes, 0);
  report.n_samples = samples.rows;

  long hq = 0;
  for (std::size_t i = 0; i < samples.rows; ++i) {
    const double* x = samples.row(i);
    std::size_t best = 0;
    double best_d2 = 0.0;
    for (std::size_t m = 0; m < n_modes; ++m) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < samples.cols; ++d) {
        const double diff = x[d] - spec.means(m, d);
        d2 += diff * diff;
      }
      if (m == 0 || d2 < best_d2) {
        best = m;
        best_d2 = d2;
      }
    }
    if (best_d2 <= r2) {
      ++report.per_mode_counts[best];
      ++hq;
    }
  }

  report.hq_fraction = static_cast<double>(hq) / static_cast<double>(samples.rows);
  for (long c : report.per_mode_counts)
    if (c >= kCoveredMinSamples) ++report.modes_covered;
  report.kl_to_uniform = hq > 0 ? kl_mode_histogram(report.per_mode_counts) : 0.0;
  return report;
}

double kl_mode_histogram(const std::vector<long>& per_mode_counts) {
  if (per_mode_counts.empty())
    fail(ErrorCode::invalid_argument, "kl_mode_histogram: no modes");
  double total = 0.0;
  for (long c : per_mode_counts) {
    if (c < 0) fail(ErrorCode::invalid_argument, "kl_mode_histogram: negative count");
    total += static_cast<double>(c);
  }
  if (total <= 0.0)
    fail(ErrorCode::invalid_argument, "kl_mode_histogram: all counts are zero");

  const double m = static_cast<double>(per_mode_counts.size());
  double kl = 0.0;
  for (long c : per_mode_counts) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / total;
    kl += q * std::log(q * m);
  }
  return kl;
}

std::string EvalReport::csv_header() const {
  std::ostringstream out;
  out << "n_samples,modes_covered,hq_fraction,kl_to_uniform";
  for (std::size_t m = 0; m < per_mode_counts.size(); ++m)
    out << ",count_" << (m + 1);
  return out.str();
}

std::string EvalReport::csv_row() const {
  std::ostringstream out;
  out << n_samples << "," << modes_covered << ","
      << io::format_double(hq_fraction) << ","
      << io::format_double(kl_to_uniform);
  for (long c : per_mode_counts) out << "," << c;
  return out.str();
}

std::string EvalReport::pretty() const {
  std::ostringstream out;
  out << "samples: " << n_samples << "\n"
      << "modes covered: " << modes_covered << " / " << per_mode_counts.size()
      << "\n"
      << "high-quality fraction: " << hq_fraction << "\n"
      << "KL(modes || uniform): " << kl_to_uniform << "\n"
      << "per-mode counts:";
  for (long c : per_mode_counts) out << " " << c;
  out << "\n";
  return out.str();
}

}  // namespace rlsgan::eval
