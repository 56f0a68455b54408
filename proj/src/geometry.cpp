#include "marp/geometry.hpp"

#include "marp/sawtooth.hpp"
#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace marp {

namespace {

void require_finite(const Point& p, const char* what) {
  if (!p.allFinite()) {
    throw std::invalid_argument(std::string(what) + " must have finite entries");
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ProjectionResult single(Point p, const Point& q) {
  ProjectionResult out;
  out.distance = (p - q).norm();
  out.nearest.push_back(std::move(p));
  return out;
}

}  // namespace

namespace detail {

ProjectionResult collect_ties(std::vector<std::pair<Point, double>> candidates,
                              const Point& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::min(best, c.second);
  const double tol = tie_tolerance(best, q.norm());
  ProjectionResult out;
  out.distance = best;
  for (auto& c : candidates) {
    if (c.second > best + tol) continue;
    bool duplicate = false;
    for (const auto& p : out.nearest) {
      if ((p - c.first).norm() <= tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.nearest.push_back(std::move(c.first));
  }
  std::sort(out.nearest.begin(), out.nearest.end(), lex_less);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Construction

ClosedSet ClosedSet::finite(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("finite set must be nonempty");
  const auto d = points.front().size();
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  for (const auto& p : points) {
    if (p.size() != d) throw std::invalid_argument("finite set: mixed dimensions");
    require_finite(p, "finite set point");
  }
  return ClosedSet(FiniteSet{std::move(points)}, static_cast<int>(d));
}

ClosedSet ClosedSet::affine(Point base, Matrix basis) {
  require_finite(base, "affine base");
  const auto d = base.size();
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (basis.cols() > 0 && basis.rows() != d) {
    throw std::invalid_argument("affine basis rows must match base dimension");
  }
  if (basis.cols() == 0) basis.resize(d, 0);
  if (basis.cols() > d) throw std::invalid_argument("affine basis has too many columns");
  const Matrix gram = basis.transpose() * basis;
  if (!gram.isApprox(Matrix::Identity(basis.cols(), basis.cols()), 1e-10) &&
      basis.cols() > 0) {
    throw std::invalid_argument("affine basis must be orthonormal");
  }
  return ClosedSet(AffineSubspace{std::move(base), std::move(basis)},
                   static_cast<int>(d));
}

ClosedSet ClosedSet::half_space(Point normal, double offset) {
  require_finite(normal, "half-space normal");
  if (!std::isfinite(offset)) throw std::invalid_argument("half-space offset must be finite");
  const double n = normal.norm();
  if (n == 0.0) throw std::invalid_argument("half-space normal must be nonzero");
  const auto d = normal.size();
  // Keep already-unit normals bit-exact so serialization round-trips.
  const double s = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? 1.0 : n;
  return ClosedSet(HalfSpace{normal / s, offset / s}, static_cast<int>(d));
}

ClosedSet ClosedSet::box(Point lower, Point upper) {
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw std::invalid_argument("box bounds must share a positive dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == std::numeric_limits<double>::infinity() ||
        upper[i] == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("box requires lower <= upper per coordinate");
    }
  }
  const auto d = lower.size();
  return ClosedSet(Box{std::move(lower), std::move(upper)}, static_cast<int>(d));
}

ClosedSet ClosedSet::ball(Point center, double radius) {
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  const auto d = center.size();
  return ClosedSet(Ball{std::move(center), radius}, static_cast<int>(d));
}

ClosedSet ClosedSet::whole_space(int dimension) {
  const double inf = std::numeric_limits<double>::infinity();
  return box(Point::Constant(dimension, -inf), Point::Constant(dimension, inf));
}

ClosedSet ClosedSet::sawtooth(int k_max) {
  if (k_max < 1 || k_max > 1000) throw std::invalid_argument("sawtooth k_max out of range");
  return ClosedSet(Sawtooth2D{k_max}, 2);
}

ClosedSet ClosedSet::transformed(const ClosedSet& inner, Matrix q, Point t) {
  const int d = inner.dimension();
  if (q.rows() != d || q.cols() != d || t.size() != d) {
    throw std::invalid_argument("transform dimension mismatch");
  }
  require_finite(t, "translation");
  if (!q.allFinite()) throw std::invalid_argument("transform matrix must be finite");
  const Matrix err = q.transpose() * q - Matrix::Identity(d, d);
  if (err.cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("transform matrix must be orthogonal");
  }
  return ClosedSet(Transformed{std::make_shared<const ClosedSet>(inner), std::move(q),
                               std::move(t)},
                   d);
}

ClosedSet transform_set(const ClosedSet& inner, const Matrix& q, const Point& t) {
  return ClosedSet::transformed(inner, q, t);
}

// ---------------------------------------------------------------------------
// Projection

void check_dimension(const ClosedSet& set, const Point& q) {
  if (q.size() != set.dimension()) {
    throw std::invalid_argument("dimension mismatch: point has " +
                                std::to_string(q.size()) + ", set has " +
                                std::to_string(set.dimension()));
  }
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

ProjectionResult project(const ClosedSet& set, const Point& q) {
  check_dimension(set, q);
  return std::visit(
      overloaded{
          [&](const FiniteSet& s) {
            std::vector<std::pair<Point, double>> cands;
            cands.reserve(s.points.size());
            for (const auto& p : s.points) cands.emplace_back(p, (p - q).norm());
            return detail::collect_ties(std::move(cands), q);
          },
          [&](const AffineSubspace& s) {
            if (s.basis.cols() == 0) return single(s.base, q);
            Point p = s.base + s.basis * (s.basis.transpose() * (q - s.base));
            return single(std::move(p), q);
          },
          [&](const HalfSpace& s) {
            const double excess = s.normal.dot(q) - s.offset;
            if (excess <= 0.0) return single(q, q);
            return single(q - excess * s.normal, q);
          },
          [&](const Box& s) {
            Point p = q.cwiseMax(s.lower).cwiseMin(s.upper);
            return single(std::move(p), q);
          },
          [&](const Ball& s) {
            const Point diff = q - s.center;
            const double r = diff.norm();
            if (r <= s.radius) return single(q, q);
            return single(s.center + (s.radius / r) * diff, q);
          },
          [&](const Transformed& s) {
            const Point inner_q = s.q.transpose() * (q - s.t);
            ProjectionResult r = project(*s.inner, inner_q);
            for (auto& p : r.nearest) p = s.q * p + s.t;
            std::sort(r.nearest.begin(), r.nearest.end(), lex_less);
            return r;
          },
          [&](const Sawtooth2D& s) {
            if (q[1] <= sawtooth::profile(q[0], s.k_max)) return single(q, q);
            return sawtooth::nearest_on_profile(s.k_max, q);
          },
      },
      set.variant());
}

double distance(const ClosedSet& set, const Point& q) { return project(set, q).distance; }

double boundary_distance(const ClosedSet& set, const Point& q) {
  check_dimension(set, q);
  const double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [&](const FiniteSet&) { return distance(set, q); },
          [&](const AffineSubspace& s) {
            if (s.basis.cols() == s.base.size()) return inf;
            return distance(set, q);
          },
          [&](const HalfSpace& s) { return std::abs(s.normal.dot(q) - s.offset); },
          [&](const Box& s) {
            const double outside = distance(set, q);
            if (outside > 0.0) return outside;
            double best = inf;
            for (Eigen::Index i = 0; i < q.size(); ++i) {
              if (std::isfinite(s.lower[i])) best = std::min(best, q[i] - s.lower[i]);
              if (std::isfinite(s.upper[i])) best = std::min(best, s.upper[i] - q[i]);
            }
            return best;
          },
          [&](const Ball& s) { return std::abs((q - s.center).norm() - s.radius); },
          [&](const Transformed& s) {
            return boundary_distance(*s.inner, s.q.transpose() * (q - s.t));
          },
          [&](const Sawtooth2D& s) {
            return sawtooth::nearest_on_profile(s.k_max, q).distance;
          },
      },
      set.variant());
}

bool membership(const ClosedSet& set, const Point& q, double tol) {
  if (tol < 0.0) throw std::invalid_argument("membership tolerance must be >= 0");
  return distance(set, q) <= tol * (1.0 + q.norm());
}

const Point& select_nearest(const ProjectionResult& r, TiePolicy policy,
                            const Point* previous) {
  if (r.nearest.empty()) throw std::logic_error("empty projection");
  switch (policy) {
    case TiePolicy::All:
      throw std::invalid_argument("tie policy 'all' enumerates; it cannot select one point");
    case TiePolicy::NearestToPrevious:
      if (previous != nullptr && previous->size() == r.nearest.front().size()) {
        const Point* best = &r.nearest.front();
        double best_d = (*best - *previous).norm();
        for (const auto& p : r.nearest) {
          const double d = (p - *previous).norm();
          if (d < best_d) {
            best = &p;
            best_d = d;
          }
        }
        return *best;
      }
      [[fallthrough]];
    case TiePolicy::LexMin:
      break;
  }
  return *std::min_element(r.nearest.begin(), r.nearest.end(), lex_less);
}

RelaxedStep relaxed_project(const ClosedSet& set, const Point& y, double lambda,
                            TiePolicy policy, const Point* previous) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("relaxation parameter must lie in (0, 1]");
  }
  const ProjectionResult r = project(set, y);
  RelaxedStep step;
  step.a = select_nearest(r, policy, previous);
  if (lambda == 1.0) {
    step.x = step.a;
  } else {
    step.x = (1.0 - lambda) * y + lambda * step.a;
  }
  return step;
}

}  // namespace marp
