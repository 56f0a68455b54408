#include "marp/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace marp {

Point uniform_direction(int dimension, Rng& rng) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Point p(dimension);
    for (int i = 0; i < dimension; ++i) p[i] = gauss(rng);
    const double n = p.norm();
    if (n > 1e-12) return p / n;
  }
}

Point uniform_in_ball(const Point& center, double radius, Rng& rng) {
  const int d = static_cast<int>(center.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::pow(unit(rng), 1.0 / d);
  return center + r * uniform_direction(d, rng);
}

std::vector<Point> sample_set_points(const ClosedSet& S, const Point& center, double radius,
                                     int count, Rng& rng) {
  if (count < 0) throw std::invalid_argument("sample count must be >= 0");
  check_dimension(S, center);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Point q = uniform_in_ball(center, radius, rng);
    out.push_back(select_nearest(project(S, q), TiePolicy::LexMin));
  }
  return out;
}

}  // namespace marp
