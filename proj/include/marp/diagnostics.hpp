#pragma once

#include "marp/solver.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace marp {

struct RateEstimate {
  double rate = 1.0;
  double fit_quality = 1.0;  // R^2 of the log-linear fit
  bool exact_convergence = false;
  int points_used = 0;
};

/// Least-squares slope of log max{g_n, h_n} over the last `window` recorded
/// iterations with a positive gap; rate = exp(slope).
RateEstimate empirical_rate(const Trajectory& t, int window = 30);

struct ContractionReport {
  double r = 0.0;
  double rho = 0.0;
  std::vector<bool> satisfied;   // one per quadruple of consecutive iterates
  std::vector<bool> applicable;  // premise max{d(u2,c), d(u3,c)} <= r held
  bool verdict = true;
  double worst_ratio = 0.0;
};

ContractionReport contraction_check(const Trajectory& t, const Point& c, double r,
                                    double rho);

/// max{|x_n - c|, |y_n - c|} <= M (1 + rho) / (1 - rho) rho^n for every recorded n.
bool tail_bound_check(const Trajectory& t, double M, double rho);

struct AbsorbingReport {
  bool absorbing = true;
  std::optional<Point> sample;  // s in S
  std::optional<Point> nearest; // a in P_A s
  std::optional<Point> escape;  // point of [s, a] outside S
};

/// Samples points of S near `center` and checks [s, a] stays in S for a in P_A s.
AbsorbingReport absorbing_sample_check(const ClosedSet& S, const ClosedSet& A, int samples,
                                       std::uint64_t seed, double radius = 10.0,
                                       const Point* center = nullptr);

}  // namespace marp
