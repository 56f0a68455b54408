#pragma once

#include "marp/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace marp {

/// A closed cone in the plane stored as disjoint closed arcs of directions.
/// No arcs means the zero cone.
class Cone2D {
 public:
  struct Arc {
    double lo = 0.0;   // start angle in [0, 2 pi)
    double len = 0.0;  // counterclockwise extent in [0, 2 pi]
  };

  static Cone2D zero() { return Cone2D(); }
  static Cone2D full();
  static Cone2D ray(double angle);
  static Cone2D ray(const Point& direction);
  /// Counterclockwise arc from `from` to `to`.
  static Cone2D arc(double from, double to);

  void add(const Arc& a);
  void merge(const Cone2D& other);

  bool empty() const { return arcs_.empty(); }
  bool is_full() const;
  bool contains(double angle, double tol = 1e-12) const;
  const std::vector<Arc>& arcs() const { return arcs_; }

  Cone2D negated() const;
  /// Image under an orthogonal 2x2 matrix.
  Cone2D transformed(const Matrix& q) const;

 private:
  void normalize();
  std::vector<Arc> arcs_;
};

double normalize_angle(double a);
double angle_of(const Point& v);
Point direction(double angle);

/// Smallest angular distance between two cones (0 on overlap, +inf if
/// either is the zero cone), with directions attaining it.
struct ConeGap {
  double gap = 0.0;
  double angle_u = 0.0;
  double angle_v = 0.0;
};
std::optional<ConeGap> min_gap(const Cone2D& u, const Cone2D& v);

/// sup <u, v> over unit-capped vectors of the two cones.
double cone_cosine(const Cone2D& u, const Cone2D& v);

struct ConeSample {
  std::vector<Point> directions;
  std::uint64_t seed = 0;
  int count = 0;
};

/// Which points b may generate normals: pn_A^R(a) = cone((R n P_A^-1 a) - a).
class Restriction {
 public:
  enum class Kind { Whole, Region, Boundary, Points };

  static Restriction whole() { return Restriction(Kind::Whole, nullptr, {}); }
  static Restriction region(SetPtr s) { return Restriction(Kind::Region, std::move(s), {}); }
  static Restriction boundary(SetPtr s) {
    return Restriction(Kind::Boundary, std::move(s), {});
  }
  static Restriction points(std::vector<Point> pts) {
    return Restriction(Kind::Points, nullptr, std::move(pts));
  }

  Kind kind() const { return kind_; }
  const SetPtr& set() const { return set_; }
  const std::vector<Point>& point_list() const { return points_; }
  std::string describe() const;

 private:
  Restriction(Kind k, SetPtr s, std::vector<Point> p)
      : kind_(k), set_(std::move(s)), points_(std::move(p)) {}
  Kind kind_;
  SetPtr set_;
  std::vector<Point> points_;
};

/// A piece of the boundary of a planar set near a point: a vertex or an edge
/// clipped to a ball, with the proximal normal cone of its (relative
/// interior) points.
struct Feature2D {
  Point p0;
  Point p1;
  bool is_vertex = true;
  Cone2D cone;
};

/// Boundary pieces of a planar set meeting ball(c, radius).
/// Throws std::domain_error for variants without a finite description.
std::vector<Feature2D> boundary_features(const ClosedSet& set, const Point& c, double radius);

/// Unrestricted proximal normal cone at a point of a planar set.
Cone2D local_pn_cone(const ClosedSet& set, const Point& a);

/// b qualifies for a when a is a nearest point of b (relative tie tolerance).
bool in_preimage(const ClosedSet& A, const Point& a, const Point& b);

using PnCone = std::variant<Cone2D, ConeSample>;

struct SampleOptions {
  int samples = 20000;
  std::uint64_t seed = 1;
};

/// Restricted proximal normal cone at a in A. Planar sets give a Cone2D
/// (exact for whole-space and point restrictions, ray-wise otherwise);
/// other dimensions a ConeSample.
PnCone restricted_pn_cone(const ClosedSet& A, const Restriction& R, const Point& a,
                          const SampleOptions& opt = {});

enum class CqMethod { Exact2D, Sampled };

const char* to_string(CqMethod m);
CqMethod parse_cq_method(const std::string& s);

struct CQReport {
  double theta = 0.0;
  double delta = 0.0;
  CqMethod method = CqMethod::Exact2D;
  Point witness_u;  // unit normal of A (or empty when theta = 0 is attained by zero vectors)
  Point witness_v;  // unit normal of B
  std::vector<std::pair<double, double>> grid;  // (delta, theta) pairs when computed on a grid
  int samples = 0;
  std::uint64_t seed = 0;
};

/// CQ-number: sup <u, v> with u in pn_A^{Bt}(a), v in -pn_B^{At}(b), |u|, |v| <= 1,
/// |a - c|, |b - c| <= delta.
CQReport cq_number(const ClosedSet& A, const Restriction& At, const ClosedSet& B,
                   const Restriction& Bt, const Point& c, double delta, CqMethod method,
                   const SampleOptions& opt = {});

struct CQCondition {
  bool holds = false;
  double theta_bar = 0.0;  // value at the smallest delta
  double trend = 0.0;      // theta(largest delta) - theta(smallest delta)
  std::vector<std::pair<double, double>> grid;
  CQReport finest;
};

/// Evaluates the CQ-number on a decreasing grid of radii; the condition holds
/// when the finest value is below 1 - margin.
CQCondition cq_condition(const ClosedSet& A, const Restriction& At, const ClosedSet& B,
                         const Restriction& Bt, const Point& c,
                         const std::vector<double>& delta_grid, CqMethod method,
                         const SampleOptions& opt = {}, double margin = 1e-6);

struct RegularityReport {
  double eps_lower = 0.0;
  bool has_witness = false;
  Point y, b, u;
  int pairs_checked = 0;
};

/// Lower bound on any eps for which B is (R, eps, delta)-regular at c.
RegularityReport regularity_probe(const ClosedSet& B, const Restriction& R, const Point& c,
                                  double delta, const SampleOptions& opt = {});

struct ThetaEstimate {
  std::optional<double> theta;  // empty: every sample was degenerate
  Point x, a, b;
};

/// max <a - x, x - b> / (|a - x| |x - b|) over samples x of the ball and all
/// nearest-point choices.
ThetaEstimate theta_estimate(const ClosedSet& A, const ClosedSet& B, const Point& center,
                             double radius, const SampleOptions& opt = {});

}  // namespace marp
