#pragma once

#include "marp/geometry.hpp"
#include "marp/schedules.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace marp {

struct MarpConfig {
  SetPtr set_a;
  SetPtr set_b;
  Schedule lambda;
  Schedule mu;
  Point start;  // y_{-1}
  TiePolicy tie_policy = TiePolicy::LexMin;
  long max_iter = 100000;
  double gap_tol = 1e-10;
  bool cycle_detect = true;
  long record_every = 1;
  std::uint64_t seed = 0;
};

void validate(const MarpConfig& cfg);

struct Step {
  long n = 0;
  double lambda = 1.0;
  double mu = 1.0;
  Point a, x, b, y;
  double g = 0.0;  // |y_n - x_n|
  double h = 0.0;  // |x_n - y_{n-1}|
};

enum class Status { Converged, MaxIter, Cycle };

const char* to_string(Status s);

struct Trajectory {
  Point start;
  std::vector<Step> steps;
  Status status = Status::MaxIter;
  long iterations = 0;
  long record_every = 1;
  Point limit;                 // set when Converged
  int period = 0;              // set when Cycle
  std::vector<Point> witness;  // the repeating (x, y) states when Cycle
};

/// Alternating relaxed projections: a_n in P_A y_{n-1}, x_n = (1-l) y_{n-1} + l a_n,
/// b_n in P_B x_n, y_n = (1-m) x_n + m b_n.
Trajectory run(const MarpConfig& cfg);

/// Closed-form orbit for A = R x {0}, B = {0} x R.
std::pair<Point, Point> closed_form_axes(const Point& start, const Schedule& lambda,
                                         const Schedule& mu, long n);

void write_csv(const Trajectory& t, std::ostream& out);

}  // namespace marp
