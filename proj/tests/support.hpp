#pragma once

#include "marp/geometry.hpp"
#include "marp/sampling.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>
#include <vector>

namespace marp::testing {

inline Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

inline SetPtr share(ClosedSet s) { return std::make_shared<const ClosedSet>(std::move(s)); }

inline Point gaussian(int d, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Point p(d);
  for (int i = 0; i < d; ++i) p[i] = n(rng);
  return p;
}

inline Matrix random_orthogonal(int d, Rng& rng) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) g.col(j) = gaussian(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  return q;
}

struct NamedSet {
  std::string kind;
  ClosedSet set;
};

/// One random set of every variant (the sawtooth variants are planar).
inline std::vector<NamedSet> random_sets(int d, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  std::vector<NamedSet> out;
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(gaussian(d, rng, 2.0));
  out.push_back({"finite", ClosedSet::finite(pts)});
  const int k = std::max(1, d - 1);
  const Matrix q = random_orthogonal(d, rng);
  out.push_back({"affine", ClosedSet::affine(gaussian(d, rng), q.leftCols(k))});
  out.push_back({"halfspace", ClosedSet::half_space(gaussian(d, rng), u(rng) - 1.0)});
  Point lo = gaussian(d, rng);
  Point hi = lo;
  for (int i = 0; i < d; ++i) hi[i] += u(rng);
  out.push_back({"box", ClosedSet::box(lo, hi)});
  out.push_back({"ball", ClosedSet::ball(gaussian(d, rng), u(rng))});
  out.push_back({"transformed", ClosedSet::transformed(ClosedSet::box(lo, hi),
                                                       random_orthogonal(d, rng),
                                                       gaussian(d, rng))});
  if (d == 2) {
    out.push_back({"sawtooth", ClosedSet::sawtooth(60)});
    out.push_back({"sawtooth-moved", ClosedSet::transformed(ClosedSet::sawtooth(40),
                                                            random_orthogonal(2, rng),
                                                            gaussian(2, rng, 0.1))});
  }
  return out;
}

}  // namespace marp::testing
