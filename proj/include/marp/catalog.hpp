#pragma once

#include "marp/solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace marp {

struct Expectation {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tol = 0.0;
  std::string basis;  // "closed-form", "oracle" or "reference"
  bool pass = false;
};

struct ExampleResult {
  std::string id;
  std::string title;
  std::vector<Expectation> checks;
  bool pass() const;
};

struct ExampleSpec {
  std::string id;
  std::string title;
  /// Solver configurations the example runs (empty for pure geometry).
  std::function<std::vector<MarpConfig>()> configs;
  std::function<ExampleResult()> run;
};

const std::vector<ExampleSpec>& example_catalog();

/// Throws std::invalid_argument for an unknown id.
const ExampleSpec& find_example(const std::string& id);

// Configurations shared with the command line and tests.
MarpConfig two_point_config(double lambda, double mu);  // A = {-3, 2}, B = {-3, 6}, y = 0
MarpConfig two_axes_config(const Schedule& lambda, const Schedule& mu, const Point& start);
MarpConfig negative_half_line_config(const Schedule& lambda, const Schedule& mu, double start);
MarpConfig sawtooth_pair_config(const Schedule& lambda, const Schedule& mu, const Point& start);

}  // namespace marp
