#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace marp {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class ClosedSet;
using SetPtr = std::shared_ptr<const ClosedSet>;

/// A finite list of points. Projection enumerates every tie.
struct FiniteSet {
  std::vector<Point> points;
};

/// base + span(basis columns); the columns are orthonormal.
struct AffineSubspace {
  Point base;
  Matrix basis;
};

/// { x : <normal, x> <= offset } with a unit normal.
struct HalfSpace {
  Point normal;
  double offset = 0.0;
};

/// Axis-aligned box; infinite bounds are allowed (all infinite = whole space).
struct Box {
  Point lower;
  Point upper;
};

struct Ball {
  Point center;
  double radius = 1.0;
};

/// Image of `inner` under the isometry p -> q * p + t.
struct Transformed {
  SetPtr inner;
  Matrix q;
  Point t;
};

/// Hypograph of the sawtooth profile whose teeth accumulate at the origin.
/// Teeth k = 0..k_max are resolved; (0, 2^-(k_max+1)] is treated as flat.
struct Sawtooth2D {
  int k_max = 60;
};

class ClosedSet {
 public:
  using Variant = std::variant<FiniteSet, AffineSubspace, HalfSpace, Box, Ball,
                               Transformed, Sawtooth2D>;

  static ClosedSet finite(std::vector<Point> points);
  static ClosedSet affine(Point base, Matrix basis);
  static ClosedSet half_space(Point normal, double offset);
  static ClosedSet box(Point lower, Point upper);
  static ClosedSet ball(Point center, double radius);
  static ClosedSet whole_space(int dimension);
  static ClosedSet sawtooth(int k_max = 60);
  static ClosedSet transformed(const ClosedSet& inner, Matrix q, Point t);

  int dimension() const { return dimension_; }
  const Variant& variant() const { return variant_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&variant_);
  }

 private:
  ClosedSet(Variant v, int dimension)
      : variant_(std::move(v)), dimension_(dimension) {}

  Variant variant_;
  int dimension_ = 0;
};

struct ProjectionResult {
  std::vector<Point> nearest;
  double distance = 0.0;
};

enum class TiePolicy { LexMin, All, NearestToPrevious };

/// Global nearest point(s) of `q` in `set`.
ProjectionResult project(const ClosedSet& set, const Point& q);

double distance(const ClosedSet& set, const Point& q);

/// Distance from q to the topological boundary of the set (infinity when the
/// boundary is empty).
double boundary_distance(const ClosedSet& set, const Point& q);

/// True iff d_set(q) <= tol * (1 + |q|).
bool membership(const ClosedSet& set, const Point& q, double tol = 1e-9);

/// Picks one nearest point. LexMin takes the lexicographically smallest;
/// NearestToPrevious the one closest to `previous` (LexMin when absent).
const Point& select_nearest(const ProjectionResult& r, TiePolicy policy,
                            const Point* previous = nullptr);

bool lex_less(const Point& a, const Point& b);

struct RelaxedStep {
  Point x;
  Point a;
};

/// x = (1 - lambda) y + lambda a with a a nearest point of y.
/// lambda == 1 assigns x = a exactly.
RelaxedStep relaxed_project(const ClosedSet& set, const Point& y, double lambda,
                            TiePolicy policy = TiePolicy::LexMin,
                            const Point* previous = nullptr);

ClosedSet transform_set(const ClosedSet& inner, const Matrix& q, const Point& t);

void check_dimension(const ClosedSet& set, const Point& q);

}  // namespace marp
