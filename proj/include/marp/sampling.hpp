#pragma once

#include "marp/geometry.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace marp {

using Rng = std::mt19937_64;

Point uniform_direction(int dimension, Rng& rng);

/// Uniform point of the closed ball.
Point uniform_in_ball(const Point& center, double radius, Rng& rng);

/// Points of S obtained by projecting uniform ball samples onto S (one
/// nearest point per query, the lexicographic one).
std::vector<Point> sample_set_points(const ClosedSet& S, const Point& center, double radius,
                                     int count, Rng& rng);

}  // namespace marp
