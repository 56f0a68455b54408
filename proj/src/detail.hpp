#pragma once

#include "marp/geometry.hpp"

#include <array>
#include <charconv>
#include <string>
#include <utility>
#include <vector>

namespace marp::detail {

// Two candidate distances are a tie when they agree to this tolerance. Scaled
// by both the distance and the query norm so self-similar geometry near the
// origin resolves at every scale.
inline double tie_tolerance(double best_distance, double query_norm) {
  return 1e-12 * (best_distance + query_norm) + 1e-300;
}

// Keeps candidates within the tie tolerance of the minimum, deduplicated and
// sorted lexicographically.
ProjectionResult collect_ties(std::vector<std::pair<Point, double>> candidates,
                              const Point& q);

// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace marp::detail
