#include "marp/sawtooth.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace marp::sawtooth {

namespace {

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

double valley_depth(int k) { return std::tan(tooth_angle()) * std::ldexp(1.0, -k) / 4.0; }

// Foot of the perpendicular from q onto [p0, p1].
Point segment_foot(const Point& p0, const Point& p1, const Point& q) {
  const Point d = p1 - p0;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return p0;
  const double t = std::clamp((q - p0).dot(d) / len2, 0.0, 1.0);
  return p0 + t * d;
}

}  // namespace

double tooth_angle() { return std::acos(0.75) / 4.0; }

double profile(double x, int k_max) {
  if (!(x > 0.0) || x > 1.0) return 0.0;
  int e = 0;
  const double m = std::frexp(x, &e);
  // x = m 2^e with m in [0.5, 1); x lies on tooth k when 2^-(k+1) < x <= 2^-k.
  const int k = (m == 0.5) ? 1 - e : -e;
  if (k > k_max) return 0.0;
  const double right = std::ldexp(1.0, -k);
  const double left = std::ldexp(1.0, -(k + 1));
  const double mid = 0.75 * right;
  const double slope = std::tan(tooth_angle());
  return x <= mid ? -slope * (x - left) : slope * (x - right);
}

std::vector<Point> vertices(int k_max) {
  std::vector<Point> out;
  out.reserve(2 * static_cast<std::size_t>(k_max) + 3);
  out.push_back(pt(0.0, 0.0));
  out.push_back(pt(std::ldexp(1.0, -(k_max + 1)), 0.0));
  for (int k = k_max; k >= 0; --k) {
    out.push_back(pt(0.75 * std::ldexp(1.0, -k), -valley_depth(k)));
    out.push_back(pt(std::ldexp(1.0, -k), 0.0));
  }
  return out;
}

Matrix reflector() {
  Matrix q(2, 2);
  const double c = 0.75;
  const double s = std::sqrt(7.0) / 4.0;
  q << c, s, s, -c;
  return q;
}

ClosedSet reflected_companion(int k_max) {
  return ClosedSet::transformed(ClosedSet::sawtooth(k_max), reflector(), Point::Zero(2));
}

ProjectionResult nearest_on_profile(int k_max, const Point& q) {
  if (q.size() != 2) throw std::invalid_argument("sawtooth queries must be 2-dimensional");
  // The profile point straight above or below q bounds the distance, so only
  // segments overlapping [qx - D, qx + D] can hold a nearest point.
  const double D = std::abs(q[1] - profile(q[0], k_max));
  const double lo = q[0] - D;
  const double hi = q[0] + D;

  std::vector<std::pair<Point, double>> cands;
  auto add = [&](Point p) {
    const double d = (p - q).norm();
    cands.emplace_back(std::move(p), d);
  };
  if (lo <= 0.0) add(pt(std::min(q[0], 0.0), 0.0));
  if (hi >= 1.0) add(pt(std::max(q[0], 1.0), 0.0));
  const double flat_end = std::ldexp(1.0, -(k_max + 1));
  if (lo <= flat_end && hi >= 0.0) add(pt(std::clamp(q[0], 0.0, flat_end), 0.0));
  for (int k = 0; k <= k_max; ++k) {
    const double right = std::ldexp(1.0, -k);
    const double left = std::ldexp(1.0, -(k + 1));
    if (right < lo) break;
    if (left > hi) continue;
    const Point p0 = pt(left, 0.0);
    const Point v = pt(0.75 * right, -valley_depth(k));
    const Point p1 = pt(right, 0.0);
    add(segment_foot(p0, v, q));
    add(segment_foot(v, p1, q));
  }
  return detail::collect_ties(std::move(cands), q);
}

Landmarks landmarks(const Sawtooth2D& set, int k) {
  if (k < 1 || k > set.k_max - 1) {
    throw std::invalid_argument("landmark index must lie in [1, " +
                                std::to_string(set.k_max - 1) + "]");
  }
  Landmarks l;
  l.s_k = pt(std::ldexp(1.0, -k), 0.0);
  l.s_next = pt(std::ldexp(1.0, -(k + 1)), 0.0);
  l.valley = pt(0.75 * std::ldexp(1.0, -k), -valley_depth(k));
  l.z_k = reflector() * l.s_k;
  l.mid_right = 0.5 * (l.valley + l.s_k);
  l.mid_left = 0.5 * (l.valley + l.s_next);
  const Point u = l.s_next - l.z_k;
  const Point v = l.s_k - l.z_k;
  l.beta1 = u.norm();
  l.beta2 = v.norm();
  l.cos_angle = u.dot(v) / (l.beta1 * l.beta2);
  return l;
}

}  // namespace marp::sawtooth
