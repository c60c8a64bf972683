#include "rlsgan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"

namespace rlsgan::svg {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kMargin = 40.0;

struct Bounds {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

Bounds data_bounds(const std::vector<Series>& series) {
  Bounds b;
  bool any = false;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.points.rows; ++i) {
      const double x = s.points(i, 0);
      const double y = s.points.cols > 1 ? s.points(i, 1) : 0.0;
      if (!any) {
        b.xmin = b.xmax = x;
        b.ymin = b.ymax = y;
        any = true;
      } else {
        b.xmin = std::min(b.xmin, x);
        b.xmax = std::max(b.xmax, x);
        b.ymin = std::min(b.ymin, y);
        b.ymax = std::max(b.ymax, y);
      }
    }
  }
  const double pad_x = std::max(0.05 * (b.xmax - b.xmin), 0.5);
  const double pad_y = std::max(0.05 * (b.ymax - b.ymin), 0.5);
  b.xmin -= pad_x;
  b.xmax += pad_x;
  b.ymin -= pad_y;
  b.ymax += pad_y;
  return b;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void emit(std::ostringstream& out, const Bounds& b, const Series& s) {
  const double sx = (kCanvas - 2.0 * kMargin) / (b.xmax - b.xmin);
  const double sy = (kCanvas - 2.0 * kMargin) / (b.ymax - b.ymin);
  for (std::size_t i = 0; i < s.points.rows; ++i) {
    const double x = s.points(i, 0);
    const double y = s.points.cols > 1 ? s.points(i, 1) : 0.0;
    const double px = kMargin + (x - b.xmin) * sx;
    const double py = kCanvas - kMargin - (y - b.ymin) * sy;
    out << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\""
        << fmt(s.radius) << "\" fill=\"" << s.color << "\" fill-opacity=\"0.6\"/>\n";
  }
}

std::string header() {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kCanvas
      << "\" height=\"" << (int)kCanvas << "\" viewBox=\"0 0 " << (int)kCanvas
      << " " << (int)kCanvas << "\">\n"
      << "<rect width=\"" << (int)kCanvas << "\" height=\"" << (int)kCanvas
      << "\" fill=\"white\"/>\n"
      << "<rect x=\"" << (int)kMargin << "\" y=\"" << (int)kMargin
      << "\" width=\"" << (int)(kCanvas - 2 * kMargin) << "\" height=\""
      << (int)(kCanvas - 2 * kMargin)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  return out.str();
}

}  // namespace

void write_scatter(const std::string& path, const std::vector<Series>& series) {
  std::ostringstream out;
  out << header();
  const Bounds b = data_bounds(series);
  for (const Series& s : series) emit(out, b, s);
  out << "</svg>\n";
  io::write_file_atomic(path, out.str());
}

void write_score_scatter(const std::string& path, const linalg::Matrix& points,
                         const std::vector<double>& scores) {
  if (points.rows != scores.size())
    fail(ErrorCode::dimension_mismatch, "write_score_scatter: lengths disagree");
  double max_score = 0.0;
  for (double s : scores) max_score = std::max(max_score, s);
  if (max_score <= 0.0) max_score = 1.0;

  std::ostringstream out;
  out << header();
  Series all;
  all.points = points;
  const Bounds b = data_bounds({all});
  const double sx = (kCanvas - 2.0 * kMargin) / (b.xmax - b.xmin);
  const double sy = (kCanvas - 2.0 * kMargin) / (b.ymax - b.ymin);
  for (std::size_t i = 0; i < points.rows; ++i) {
    const double x = points(i, 0);
    const double y = points.cols > 1 ? points(i, 1) : 0.0;
    const double px = kMargin + (x - b.xmin) * sx;
    const double py = kCanvas - kMargin - (y - b.ymin) * sy;
    // 0 -> light, max -> dark
    const int shade = 230 - static_cast<int>(std::lround(210.0 * scores[i] / max_score));
    char color[8];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, 255 - (230 - shade) / 2);
    out << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
        << "\" r=\"2.00\" fill=\"" << color << "\"/>\n";
  }
  out << "</svg>\n";
  io::write_file_atomic(path, out.str());
}

}  // namespace rlsgan::svg
