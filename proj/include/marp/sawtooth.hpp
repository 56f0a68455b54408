#pragma once

#include "marp/geometry.hpp"

#include <vector>

namespace marp::sawtooth {

/// Tooth half-angle w, fixed by cos(4w) = 3/4 (w ~ 0.18).
double tooth_angle();

/// Height of the profile at x: zero outside (0, 1], V-shaped teeth of slope
/// +-tan(w) on (2^-(k+1), 2^-k] for k <= k_max, flat on (0, 2^-(k_max+1)].
double profile(double x, int k_max);

/// Finite vertices of the profile from left to right, starting at the origin
/// and ending at (1, 0). Flat rays extend from the two ends.
std::vector<Point> vertices(int k_max);

/// Reflector about the line through the origin at angle 2w.
Matrix reflector();

/// The mirrored companion set Phi(A).
ClosedSet reflected_companion(int k_max);

/// Nearest points on the profile polyline (ignores which side q is on).
ProjectionResult nearest_on_profile(int k_max, const Point& q);

struct Landmarks {
  Point s_k;
  Point s_next;  // s_{k+1}
  Point valley;  // tooth vertex between s_{k+1} and s_k
  Point z_k;     // Phi(s_k)
  Point mid_right;  // midpoint of [valley, s_k]
  Point mid_left;   // midpoint of [valley, s_{k+1}]
  double beta1 = 0.0;  // |z_k - s_{k+1}|
  double beta2 = 0.0;  // |z_k - s_k|
  double cos_angle = 0.0;  // cosine of the angle s_{k+1}, z_k, s_k
};

/// Requires 1 <= k <= k_max - 1.
Landmarks landmarks(const Sawtooth2D& set, int k);

}  // namespace marp::sawtooth
