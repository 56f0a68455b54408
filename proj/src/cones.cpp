#include "marp/cones.hpp"

#include "marp/sampling.hpp"
#include "marp/sawtooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace marp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMergeTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Point pt2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

// Outward normal of a boundary traversed with the set on the right.
Point left_normal(const Point& d) { return pt2(-d[1], d[0]).normalized(); }

double circ_dist(double a, double b) {
  const double d = normalize_angle(a - b);
  return std::min(d, kTwoPi - d);
}

}  // namespace

// ---------------------------------------------------------------------------
// Angular arithmetic

double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_of(const Point& v) { return normalize_angle(std::atan2(v[1], v[0])); }

Point direction(double angle) { return pt2(std::cos(angle), std::sin(angle)); }

Cone2D Cone2D::full() {
  Cone2D c;
  c.arcs_.push_back({0.0, kTwoPi});
  return c;
}

Cone2D Cone2D::ray(double angle) {
  Cone2D c;
  c.arcs_.push_back({normalize_angle(angle), 0.0});
  return c;
}

Cone2D Cone2D::ray(const Point& dir) {
  if (dir.size() != 2 || dir.norm() == 0.0) {
    throw std::invalid_argument("ray needs a nonzero planar direction");
  }
  return ray(angle_of(dir));
}

Cone2D Cone2D::arc(double from, double to) {
  Cone2D c;
  const double lo = normalize_angle(from);
  c.add({lo, normalize_angle(to - lo)});
  return c;
}

bool Cone2D::is_full() const {
  return arcs_.size() == 1 && arcs_.front().len >= kTwoPi - kMergeTol;
}

void Cone2D::add(const Arc& a) {
  if (a.len < 0.0) throw std::invalid_argument("arc length must be >= 0");
  arcs_.push_back({normalize_angle(a.lo), std::min(a.len, kTwoPi)});
  normalize();
}

void Cone2D::merge(const Cone2D& other) {
  arcs_.insert(arcs_.end(), other.arcs_.begin(), other.arcs_.end());
  normalize();
}

void Cone2D::normalize() {
  if (arcs_.empty()) return;
  for (const auto& a : arcs_) {
    if (a.len >= kTwoPi - kMergeTol) {
      arcs_.assign(1, {0.0, kTwoPi});
      return;
    }
  }
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  std::vector<Arc> out;
  for (const auto& a : arcs_) {
    if (!out.empty() && a.lo <= out.back().lo + out.back().len + kMergeTol) {
      const double end = std::max(out.back().lo + out.back().len, a.lo + a.len);
      out.back().len = end - out.back().lo;
    } else {
      out.push_back(a);
    }
  }
  // Wrap-around: the last arc may run past 2 pi into the first ones.
  while (out.size() > 1) {
    const double end = out.back().lo + out.back().len - kTwoPi;
    if (end + kMergeTol < out.front().lo) break;
    const double new_end = std::max(end, out.front().lo + out.front().len);
    out.back().len = new_end + kTwoPi - out.back().lo;
    out.erase(out.begin());
  }
  if (out.size() == 1 && out.front().len >= kTwoPi - kMergeTol) out.front() = {0.0, kTwoPi};
  arcs_ = std::move(out);
}

bool Cone2D::contains(double angle, double tol) const {
  for (const auto& a : arcs_) {
    const double d = normalize_angle(angle - a.lo);
    if (d <= a.len + tol || d >= kTwoPi - tol) return true;
  }
  return false;
}

Cone2D Cone2D::negated() const {
  Cone2D c;
  for (const auto& a : arcs_) c.arcs_.push_back({normalize_angle(a.lo + kPi), a.len});
  c.normalize();
  return c;
}

Cone2D Cone2D::transformed(const Matrix& q) const {
  if (q.rows() != 2 || q.cols() != 2) throw std::invalid_argument("expected a 2x2 matrix");
  Cone2D c;
  const double det = q.determinant();
  if (det > 0.0) {
    const double phi = std::atan2(q(1, 0), q(0, 0));
    for (const auto& a : arcs_) c.arcs_.push_back({normalize_angle(a.lo + phi), a.len});
  } else {
    // Reflection: angle t maps to alpha - t.
    const double alpha = std::atan2(q(1, 0), q(0, 0));
    for (const auto& a : arcs_) {
      c.arcs_.push_back({normalize_angle(alpha - a.lo - a.len), a.len});
    }
  }
  c.normalize();
  return c;
}

std::optional<ConeGap> min_gap(const Cone2D& u, const Cone2D& v) {
  if (u.empty() || v.empty()) return std::nullopt;
  ConeGap best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (const auto& a : u.arcs()) {
    for (const auto& b : v.arcs()) {
      Cone2D ca, cb;
      ca.add(a);
      cb.add(b);
      if (cb.contains(a.lo, 0.0)) return ConeGap{0.0, a.lo, a.lo};
      if (ca.contains(b.lo, 0.0)) return ConeGap{0.0, b.lo, b.lo};
      for (double ea : {a.lo, a.lo + a.len}) {
        for (double eb : {b.lo, b.lo + b.len}) {
          const double d = circ_dist(ea, eb);
          if (d < best.gap) best = {d, normalize_angle(ea), normalize_angle(eb)};
        }
      }
    }
  }
  return best;
}

double cone_cosine(const Cone2D& u, const Cone2D& v) {
  const auto g = min_gap(u, v);
  if (!g || g->gap >= kPi / 2.0) return 0.0;
  return g->gap == 0.0 ? 1.0 : std::max(0.0, std::cos(g->gap));
}

std::string Restriction::describe() const {
  switch (kind_) {
    case Kind::Whole:
      return "whole";
    case Kind::Region:
      return "region";
    case Kind::Boundary:
      return "boundary";
    case Kind::Points:
      return "points";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Boundary features of planar sets

namespace {

// Parameter range of p0 + s d (d unit, s in [smin, smax]) inside ball(c, r).
std::optional<std::pair<double, double>> clip_line(const Point& p0, const Point& d, double smin,
                                                   double smax, const Point& c, double r) {
  const Point w = p0 - c;
  const double b = d.dot(w);
  const double disc = b * b - (w.squaredNorm() - r * r);
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double lo = std::max(smin, -b - root);
  const double hi = std::min(smax, -b + root);
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

void push_edge(std::vector<Feature2D>& out, const Point& p0, const Point& d, double smin,
               double smax, const Cone2D& cone, const Point& c, double r) {
  const Point u = d.normalized();
  const double scale = d.norm();
  const auto clip = clip_line(p0, u, smin * scale, smax * scale, c, r);
  if (!clip) return;
  Feature2D f;
  f.p0 = p0 + clip->first * u;
  f.p1 = p0 + clip->second * u;
  f.is_vertex = false;
  f.cone = cone;
  out.push_back(std::move(f));
}

void push_vertex(std::vector<Feature2D>& out, const Point& v, const Cone2D& cone,
                 const Point& c, double r) {
  if ((v - c).norm() > r) return;
  out.push_back(Feature2D{v, v, true, cone});
}

// Cone at a vertex of a boundary walked with the set on the right.
Cone2D vertex_cone(const Point& d_in, const Point& d_out) {
  const Point n1 = left_normal(d_in);
  const Point n2 = left_normal(d_out);
  const double cross = d_in[0] * d_out[1] - d_in[1] * d_out[0];
  if (std::abs(cross) <= 1e-14 * d_in.norm() * d_out.norm()) return Cone2D::ray(n1);
  if (cross < 0.0) return Cone2D::arc(angle_of(n2), angle_of(n1));
  return Cone2D::zero();
}

void sawtooth_features(std::vector<Feature2D>& out, int k_max, const Point& c, double r) {
  const auto v = sawtooth::vertices(k_max);
  const double inf = std::numeric_limits<double>::infinity();
  const Point right = pt2(1.0, 0.0);
  const Point up = pt2(0.0, 1.0);
  // Left ray arrives at the origin heading right.
  push_edge(out, v.front(), pt2(-1.0, 0.0), 0.0, inf, Cone2D::ray(up), c, r);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point d_in = i == 0 ? right : Point(v[i] - v[i - 1]);
    const Point d_out = i + 1 == v.size() ? right : Point(v[i + 1] - v[i]);
    push_vertex(out, v[i], vertex_cone(d_in, d_out), c, r);
    if (i + 1 < v.size()) {
      push_edge(out, v[i], d_out, 0.0, 1.0, Cone2D::ray(left_normal(d_out)), c, r);
    }
  }
  push_edge(out, v.back(), right, 0.0, inf, Cone2D::ray(up), c, r);
}

void box_features(std::vector<Feature2D>& out, const Box& b, const Point& c, double r) {
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    for (int side = 0; side < 2; ++side) {
      const double bound = side == 0 ? b.lower[i] : b.upper[i];
      if (!std::isfinite(bound)) continue;
      Point p0 = Point::Zero(2);
      p0[i] = bound;
      Point d = Point::Zero(2);
      d[j] = 1.0;
      Point n = Point::Zero(2);
      n[i] = side == 0 ? -1.0 : 1.0;
      push_edge(out, p0, d, b.lower[j], b.upper[j], Cone2D::ray(n), c, r);
    }
  }
  for (int s0 = 0; s0 < 2; ++s0) {
    for (int s1 = 0; s1 < 2; ++s1) {
      const double x = s0 == 0 ? b.lower[0] : b.upper[0];
      const double y = s1 == 0 ? b.lower[1] : b.upper[1];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      const double a0 = s0 == 0 ? kPi : 0.0;
      const double a1 = s1 == 0 ? 1.5 * kPi : 0.5 * kPi;
      const Cone2D q = std::abs(normalize_angle(a1 - a0) - 0.5 * kPi) < 1e-9
                           ? Cone2D::arc(a0, a1)
                           : Cone2D::arc(a1, a0);
      push_vertex(out, pt2(x, y), q, c, r);
    }
  }
}

}  // namespace

std::vector<Feature2D> boundary_features(const ClosedSet& set, const Point& c, double radius) {
  if (set.dimension() != 2) throw std::domain_error("boundary features need a planar set");
  check_dimension(set, c);
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be >= 0");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Feature2D> out;
  std::visit(
      overloaded{
          [&](const FiniteSet& s) {
            for (const auto& p : s.points) push_vertex(out, p, Cone2D::full(), c, radius);
          },
          [&](const AffineSubspace& s) {
            if (s.basis.cols() == 0) {
              push_vertex(out, s.base, Cone2D::full(), c, radius);
            } else if (s.basis.cols() == 1) {
              const Point d = s.basis.col(0);
              const Point n = left_normal(d);
              Cone2D cone = Cone2D::ray(n);
              cone.merge(Cone2D::ray(Point(-n)));
              push_edge(out, s.base, d, -inf, inf, cone, c, radius);
            }
          },
          [&](const HalfSpace& s) {
            const Point p0 = s.offset * s.normal;
            const Point d = pt2(-s.normal[1], s.normal[0]);
            push_edge(out, p0, d, -inf, inf, Cone2D::ray(s.normal), c, radius);
          },
          [&](const Box& b) { box_features(out, b, c, radius); },
          [&](const Ball&) -> void {
            throw std::domain_error("ball boundaries have no finite feature list");
          },
          [&](const Transformed& s) {
            const Point inner_c = s.q.transpose() * (c - s.t);
            for (auto& f : boundary_features(*s.inner, inner_c, radius)) {
              f.p0 = s.q * f.p0 + s.t;
              f.p1 = s.q * f.p1 + s.t;
              f.cone = f.cone.transformed(s.q);
              out.push_back(std::move(f));
            }
          },
          [&](const Sawtooth2D& s) { sawtooth_features(out, s.k_max, c, radius); },
      },
      set.variant());
  return out;
}

Cone2D local_pn_cone(const ClosedSet& set, const Point& a) {
  if (!membership(set, a, 1e-12)) throw std::invalid_argument("base point is not in the set");
  const double r = 1e-12 * a.norm() + 1e-300;
  const auto feats = boundary_features(set, a, r);
  Cone2D vertex_cones, edge_cones;
  bool any_vertex = false;
  for (const auto& f : feats) {
    if (f.is_vertex) {
      any_vertex = true;
      vertex_cones.merge(f.cone);
    } else {
      edge_cones.merge(f.cone);
    }
  }
  return any_vertex ? vertex_cones : edge_cones;
}

bool in_preimage(const ClosedSet& A, const Point& a, const Point& b) {
  const double gap = (b - a).norm();
  return distance(A, b) >= gap * (1.0 - 1e-9);
}

// ---------------------------------------------------------------------------
// Ray-wise restriction tests

namespace {

// Largest t with a in P_A(a + t u); 0 when u is not a proximal normal.
double reach(const ClosedSet& A, const Point& a, const Point& u, double scale) {
  const double an = a.norm();
  auto ok = [&](double t) {
    const double d = distance(A, a + t * u);
    return d >= t - (1e-10 * t + 1e-15 * an);
  };
  double t = 1e-6 * scale;
  int shrink = 0;
  while (!ok(t)) {
    if (++shrink > 14) return 0.0;
    t *= 0.25;
  }
  const double cap = 1e6 * scale;
  double lo = t;
  double hi = 2.0 * t;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 80 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Whether a + t u meets the restriction set for some t in (0, T].
bool ray_hits(const Restriction& R, const Point& a, const Point& u, double T, double scale) {
  const ClosedSet& S = *R.set();
  auto phi = [&](const Point& p) {
    return R.kind() == Restriction::Kind::Region ? distance(S, p) : boundary_distance(S, p);
  };
  const double an = a.norm();
  const double t_end = std::isinf(T) ? 1e6 * scale : T;
  double t = 1e-9 * std::min(t_end, scale);
  for (int it = 0; it < 20000; ++it) {
    if (t > t_end) break;
    const double f = phi(a + t * u);
    if (f <= 1e-9 * t + 1e-15 * an) return true;
    t += f;
  }
  return phi(a + t_end * u) <= 1e-9 * t_end + 1e-15 * an;
}

bool direction_ok(const ClosedSet& A, const Restriction& R, const Point& a, double angle,
                  double scale) {
  const Point u = direction(angle);
  const double T = reach(A, a, u, scale);
  if (T == 0.0) return false;
  if (R.kind() == Restriction::Kind::Whole) return true;
  return ray_hits(R, a, u, T, scale);
}

// Part of `cone` (the unrestricted cone at a) realised by the restriction.
Cone2D restrict_cone(const ClosedSet& A, const Restriction& R, const Point& a,
                     const Cone2D& cone, double scale) {
  if (R.kind() == Restriction::Kind::Whole) return cone;
  Cone2D out;
  constexpr int kGrid = 24;
  for (const auto& arc : cone.arcs()) {
    if (arc.len == 0.0) {
      if (direction_ok(A, R, a, arc.lo, scale)) out.add({arc.lo, 0.0});
      continue;
    }
    std::vector<double> ang(kGrid + 1);
    std::vector<bool> ok(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
      ang[i] = arc.lo + arc.len * i / kGrid;
      ok[i] = direction_ok(A, R, a, ang[i], scale);
    }
    auto refine = [&](double in, double out_angle) {
      for (int i = 0; i < 50 && std::abs(in - out_angle) > 1e-13; ++i) {
        const double mid = 0.5 * (in + out_angle);
        (direction_ok(A, R, a, mid, scale) ? in : out_angle) = mid;
      }
      return in;
    };
    int i = 0;
    while (i <= kGrid) {
      if (!ok[i]) {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 <= kGrid && ok[j + 1]) ++j;
      const double start = i == 0 ? ang[0] : refine(ang[i], ang[i - 1]);
      const double end = j == kGrid ? ang[kGrid] : refine(ang[j], ang[j + 1]);
      out.add({start, end - start});
      i = j + 1;
    }
  }
  return out;
}

double base_scale(const Point& a, const Point& c, double delta) {
  const double s = (a - c).norm();
  return s > 0.0 ? s : delta;
}

// Union of restricted cones over base points of A within delta of c.
Cone2D exact_union(const ClosedSet& A, const Restriction& R, const Point& c, double delta) {
  Cone2D out;
  if (R.kind() == Restriction::Kind::Points) {
    for (const auto& b : R.point_list()) {
      check_dimension(A, b);
      for (const auto& a : project(A, b).nearest) {
        if ((a - c).norm() > delta * (1.0 + 1e-12)) continue;
        const Point d = b - a;
        if (d.norm() <= 1e-14 * (1.0 + b.norm())) continue;
        out.add({angle_of(d), 0.0});
      }
    }
    return out;
  }
  if (R.set()) check_dimension(*R.set(), c);
  for (const auto& f : boundary_features(A, c, delta)) {
    if (f.is_vertex || R.kind() == Restriction::Kind::Whole) {
      out.merge(restrict_cone(A, R, f.p0, f.cone, base_scale(f.p0, c, delta)));
      continue;
    }
    // Edge: try interior representatives and the point nearest c.
    const Point d = f.p1 - f.p0;
    std::vector<Point> reps;
    for (double s : {0.05, 0.25, 0.5, 0.75, 0.95}) reps.push_back(f.p0 + s * d);
    if (d.squaredNorm() > 0.0) {
      const double s = std::clamp((c - f.p0).dot(d) / d.squaredNorm(), 0.0, 1.0);
      reps.push_back(f.p0 + s * d);
    }
    for (const auto& rep : reps) {
      const Cone2D got = restrict_cone(A, R, rep, f.cone, base_scale(rep, c, delta));
      out.merge(got);
      if (got.arcs().size() == f.cone.arcs().size()) {
        bool same = true;
        for (std::size_t k = 0; k < got.arcs().size(); ++k) {
          same = same && got.arcs()[k].len == f.cone.arcs()[k].len;
        }
        if (same) break;
      }
    }
  }
  return out;
}

void require_near(const ClosedSet& S, const Point& c, double delta, const char* name) {
  if (distance(S, c) > delta) {
    throw std::domain_error(std::string("no points of ") + name + " within delta of c");
  }
}

// ---------------------------------------------------------------------------
// Sampling of restriction sets

bool has_features(const ClosedSet& S) {
  if (S.dimension() != 2) return false;
  const ClosedSet* cur = &S;
  while (const auto* t = cur->as<Transformed>()) cur = t->inner.get();
  return cur->as<Ball>() == nullptr;
}

std::vector<Point> sample_boundary(const ClosedSet& S, const Point& c, double radius, int n,
                                   Rng& rng, bool landmarks) {
  std::vector<Point> out;
  if (has_features(S)) {
    const auto feats = boundary_features(S, c, radius);
    std::vector<double> cum;
    double total = 0.0;
    for (const auto& f : feats) {
      if (f.is_vertex) {
        if (landmarks) out.push_back(f.p0);
        continue;
      }
      total += (f.p1 - f.p0).norm();
      cum.push_back(total);
    }
    std::vector<const Feature2D*> edges;
    for (const auto& f : feats) {
      if (!f.is_vertex) edges.push_back(&f);
    }
    if (total > 0.0) {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < n; ++i) {
        const double pick = unit(rng) * total;
        const auto k = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
        const Feature2D& e = *edges[std::min(k, edges.size() - 1)];
        out.push_back(e.p0 + unit(rng) * (e.p1 - e.p0));
      }
    }
    return out;
  }
  // Generic: nearest points of exterior samples lie on the boundary.
  for (int tries = 0; tries < 20 * n && static_cast<int>(out.size()) < n; ++tries) {
    const Point q = uniform_in_ball(c, radius, rng);
    const ProjectionResult r = project(S, q);
    if (r.distance > 0.0) out.push_back(r.nearest.front());
  }
  return out;
}

std::vector<Point> restriction_points(const Restriction& R, const Point& c, double radius,
                                      int n, Rng& rng) {
  switch (R.kind()) {
    case Restriction::Kind::Points:
      return R.point_list();
    case Restriction::Kind::Whole: {
      std::vector<Point> out;
      for (int i = 0; i < n; ++i) out.push_back(uniform_in_ball(c, radius, rng));
      return out;
    }
    case Restriction::Kind::Region: {
      std::vector<Point> out = sample_set_points(*R.set(), c, radius, n, rng);
      if (has_features(*R.set())) {
        for (const auto& f : boundary_features(*R.set(), c, radius)) {
          if (f.is_vertex) out.push_back(f.p0);
        }
      }
      return out;
    }
    case Restriction::Kind::Boundary:
      return sample_boundary(*R.set(), c, radius, n, rng, true);
  }
  return {};
}

struct Normal {
  double dist;  // |a - c|
  Point a;
  Point u;      // unit
};

std::vector<Normal> sampled_normals(const ClosedSet& A, const std::vector<Point>& pts,
                                    const Point& c) {
  std::vector<Normal> out;
  for (const auto& p : pts) {
    for (const auto& a : project(A, p).nearest) {
      const Point d = p - a;
      const double r = d.norm();
      if (r <= 1e-14 * (1.0 + p.norm())) continue;
      out.push_back({(a - c).norm(), a, d / r});
    }
  }
  return out;
}

struct SampledTheta {
  double theta = 0.0;
  Point u, v;
};

SampledTheta best_pair(const std::vector<Point>& us, const std::vector<Point>& vs) {
  SampledTheta best;
  if (us.empty() || vs.empty()) return best;
  const int d = static_cast<int>(us.front().size());
  if (d == 2) {
    std::vector<std::pair<double, std::size_t>> va;
    for (std::size_t i = 0; i < vs.size(); ++i) va.emplace_back(angle_of(vs[i]), i);
    std::sort(va.begin(), va.end());
    for (const auto& u : us) {
      const double au = angle_of(u);
      auto it = std::lower_bound(va.begin(), va.end(), std::make_pair(au, std::size_t{0}));
      for (auto cand : {it == va.end() ? va.begin() : it, it == va.begin() ? va.end() - 1 : it - 1}) {
        const double val = u.dot(vs[cand->second]);
        if (val > best.theta) best = {val, u, vs[cand->second]};
      }
    }
    return best;
  }
  const std::size_t cap = 3000;
  const std::size_t su = std::max<std::size_t>(1, us.size() / cap);
  const std::size_t sv = std::max<std::size_t>(1, vs.size() / cap);
  for (std::size_t i = 0; i < us.size(); i += su) {
    for (std::size_t j = 0; j < vs.size(); j += sv) {
      const double val = us[i].dot(vs[j]);
      if (val > best.theta) best = {val, us[i], vs[j]};
    }
  }
  return best;
}

std::vector<CQReport> sampled_grid(const ClosedSet& A, const Restriction& At,
                                   const ClosedSet& B, const Restriction& Bt, const Point& c,
                                   const std::vector<double>& grid, const SampleOptions& opt) {
  const double dmax = *std::max_element(grid.begin(), grid.end());
  Rng rng(opt.seed);
  const auto pts_b = restriction_points(Bt, c, 2.0 * dmax, opt.samples, rng);
  const auto pts_a = restriction_points(At, c, 2.0 * dmax, opt.samples, rng);
  const auto na = sampled_normals(A, pts_b, c);
  const auto nb = sampled_normals(B, pts_a, c);
  std::vector<CQReport> out;
  for (double delta : grid) {
    std::vector<Point> us, vs;
    for (const auto& n : na) {
      if (n.dist <= delta) us.push_back(n.u);
    }
    for (const auto& n : nb) {
      if (n.dist <= delta) vs.push_back(-n.u);
    }
    const SampledTheta st = best_pair(us, vs);
    CQReport r;
    r.theta = std::clamp(st.theta, 0.0, 1.0);
    r.delta = delta;
    r.method = CqMethod::Sampled;
    r.witness_u = st.u.size() ? st.u : Point::Zero(c.size());
    r.witness_v = st.v.size() ? st.v : Point::Zero(c.size());
    r.samples = opt.samples;
    r.seed = opt.seed;
    out.push_back(std::move(r));
  }
  return out;
}

CQReport exact_report(const ClosedSet& A, const Restriction& At, const ClosedSet& B,
                      const Restriction& Bt, const Point& c, double delta) {
  if (A.dimension() != 2) throw std::invalid_argument("exact2d needs planar sets");
  const Cone2D U = exact_union(A, Bt, c, delta);
  const Cone2D V = exact_union(B, At, c, delta).negated();
  CQReport r;
  r.delta = delta;
  r.method = CqMethod::Exact2D;
  r.theta = cone_cosine(U, V);
  r.witness_u = Point::Zero(2);
  r.witness_v = Point::Zero(2);
  if (r.theta > 0.0) {
    const auto g = min_gap(U, V);
    r.witness_u = direction(g->angle_u);
    r.witness_v = direction(g->angle_v);
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public cone queries

PnCone restricted_pn_cone(const ClosedSet& A, const Restriction& R, const Point& a,
                          const SampleOptions& opt) {
  check_dimension(A, a);
  if (!membership(A, a, 1e-9)) throw std::invalid_argument("base point is not in A");
  const bool planar = A.dimension() == 2;
  if (R.kind() == Restriction::Kind::Points) {
    Cone2D cone;
    ConeSample sample;
    for (const auto& b : R.point_list()) {
      check_dimension(A, b);
      const Point d = b - a;
      if (d.norm() <= 1e-14 * (1.0 + b.norm()) || !in_preimage(A, a, b)) continue;
      if (planar) {
        cone.add({angle_of(d), 0.0});
      } else {
        const Point u = d.normalized();
        const bool dup = std::any_of(sample.directions.begin(), sample.directions.end(),
                                     [&](const Point& v) { return (v - u).norm() < 1e-12; });
        if (!dup) sample.directions.push_back(u);
      }
    }
    if (planar) return cone;
    sample.count = static_cast<int>(sample.directions.size());
    return sample;
  }
  if (planar && has_features(A)) {
    const double scale = a.norm() > 0.0 ? a.norm() : 1.0;
    return restrict_cone(A, R, a, local_pn_cone(A, a), scale);
  }
  Rng rng(opt.seed);
  const double radius = 1.0 + a.norm();
  ConeSample sample;
  sample.seed = opt.seed;
  for (const auto& y : restriction_points(R, a, radius, opt.samples, rng)) {
    std::vector<Point> candidates{y};
    // Unrestricted: also try normals seen elsewhere, translated to a.
    if (R.kind() == Restriction::Kind::Whole) {
      for (const auto& p : project(A, y).nearest) candidates.push_back(a + (y - p));
    }
    for (const auto& b : candidates) {
      const Point d = b - a;
      if (d.norm() <= 1e-14 * (1.0 + b.norm()) || !in_preimage(A, a, b)) continue;
      sample.directions.push_back(d.normalized());
    }
  }
  sample.count = static_cast<int>(sample.directions.size());
  return sample;
}

const char* to_string(CqMethod m) { return m == CqMethod::Exact2D ? "exact2d" : "sampled"; }

CqMethod parse_cq_method(const std::string& s) {
  if (s == "exact2d") return CqMethod::Exact2D;
  if (s == "sampled") return CqMethod::Sampled;
  throw std::invalid_argument("unknown cq method '" + s + "'");
}

CQReport cq_number(const ClosedSet& A, const Restriction& At, const ClosedSet& B,
                   const Restriction& Bt, const Point& c, double delta, CqMethod method,
                   const SampleOptions& opt) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  check_dimension(A, c);
  check_dimension(B, c);
  require_near(A, c, delta, "A");
  require_near(B, c, delta, "B");
  if (method == CqMethod::Exact2D) return exact_report(A, At, B, Bt, c, delta);
  return sampled_grid(A, At, B, Bt, c, {delta}, opt).front();
}

CQCondition cq_condition(const ClosedSet& A, const Restriction& At, const ClosedSet& B,
                         const Restriction& Bt, const Point& c,
                         const std::vector<double>& delta_grid, CqMethod method,
                         const SampleOptions& opt, double margin) {
  if (delta_grid.empty()) throw std::invalid_argument("delta grid is empty");
  for (double d : delta_grid) {
    if (!(d > 0.0)) throw std::invalid_argument("delta grid entries must be > 0");
  }
  std::vector<double> grid = delta_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  require_near(A, c, grid.back(), "A");
  require_near(B, c, grid.back(), "B");
  std::vector<CQReport> reports;
  if (method == CqMethod::Exact2D) {
    for (double d : grid) reports.push_back(exact_report(A, At, B, Bt, c, d));
  } else {
    reports = sampled_grid(A, At, B, Bt, c, grid, opt);
  }
  CQCondition out;
  for (const auto& r : reports) out.grid.emplace_back(r.delta, r.theta);
  out.finest = reports.back();
  out.finest.grid = out.grid;
  out.theta_bar = reports.back().theta;
  out.trend = reports.front().theta - reports.back().theta;
  out.holds = out.theta_bar < 1.0 - margin;
  return out;
}

RegularityReport regularity_probe(const ClosedSet& B, const Restriction& R, const Point& c,
                                  double delta, const SampleOptions& opt) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  check_dimension(B, c);
  if (!membership(B, c, 1e-9)) throw std::invalid_argument("c must lie in B");
  Rng rng(opt.seed);

  struct Pair {
    Point b, u;
  };
  std::vector<Pair> normals;
  for (const auto& p : restriction_points(R, c, 2.0 * delta, opt.samples, rng)) {
    for (const auto& b : project(B, p).nearest) {
      const Point u = p - b;
      if ((b - c).norm() > delta || u.norm() <= 1e-14 * (1.0 + p.norm())) continue;
      normals.push_back({b, u});
    }
  }

  std::vector<Point> ys;
  std::size_t landmark_count = 0;
  if (has_features(B)) {
    for (const auto& f : boundary_features(B, c, delta)) {
      if (f.is_vertex) ys.push_back(f.p0);
    }
    landmark_count = ys.size();
    for (const auto& y : sample_boundary(B, c, delta, opt.samples / 2, rng, false)) {
      if ((y - c).norm() <= delta) ys.push_back(y);
    }
  }
  for (const auto& y : sample_set_points(B, c, delta, opt.samples / 2, rng)) {
    if ((y - c).norm() <= delta) ys.push_back(y);
  }

  // The pair search is quadratic, so thin both lists to a fixed budget. The
  // vertex landmarks sit at the front of `ys` and are always kept.
  constexpr std::size_t kBudget = 2500;
  const std::size_t keep = std::min(ys.size(), landmark_count);
  const std::size_t ns = std::max<std::size_t>(1, normals.size() / kBudget);
  const std::size_t ysr = std::max<std::size_t>(1, (ys.size() - keep) / kBudget);

  RegularityReport rep;
  for (std::size_t i = 0; i < normals.size(); i += ns) {
    const auto& nb = normals[i];
    const double un = nb.u.norm();
    for (std::size_t j = 0; j < ys.size(); j += j < keep ? 1 : ysr) {
      const Point& y = ys[j];
      const Point d = y - nb.b;
      const double dn = d.norm();
      if (dn <= 1e-14 * (1.0 + y.norm())) continue;
      ++rep.pairs_checked;
      const double val = nb.u.dot(d) / (un * dn);
      if (val > rep.eps_lower) {
        rep.eps_lower = val;
        rep.has_witness = true;
        rep.y = y;
        rep.b = nb.b;
        rep.u = nb.u;
      }
    }
  }
  return rep;
}

ThetaEstimate theta_estimate(const ClosedSet& A, const ClosedSet& B, const Point& center,
                             double radius, const SampleOptions& opt) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  check_dimension(A, center);
  check_dimension(B, center);
  Rng rng(opt.seed);
  ThetaEstimate out;
  for (int i = 0; i < opt.samples; ++i) {
    const Point x = uniform_in_ball(center, radius, rng);
    const double tiny = 1e-14 * (1.0 + x.norm());
    const auto pa = project(A, x).nearest;
    const auto pb = project(B, x).nearest;
    for (const auto& a : pa) {
      const Point da = a - x;
      if (da.norm() <= tiny) continue;
      for (const auto& b : pb) {
        const Point db = x - b;
        if (db.norm() <= tiny) continue;
        const double val = da.dot(db) / (da.norm() * db.norm());
        if (!out.theta || val > *out.theta) {
          out.theta = val;
          out.x = x;
          out.a = a;
          out.b = b;
        }
      }
    }
  }
  return out;
}

}  // namespace marp
