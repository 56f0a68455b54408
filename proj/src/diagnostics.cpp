#include "marp/diagnostics.hpp"

#include "marp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marp {

RateEstimate empirical_rate(const Trajectory& t, int window) {
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  std::vector<std::pair<double, double>> pts;  // (n, log gap)
  for (const auto& s : t.steps) {
    const double gap = std::max(s.g, s.h);
    if (gap > 0.0) pts.emplace_back(static_cast<double>(s.n), std::log(gap));
  }
  RateEstimate out;
  if (pts.size() < 2) {
    out.exact_convergence = true;
    out.rate = 0.0;
    out.points_used = static_cast<int>(pts.size());
    return out;
  }
  if (pts.size() > static_cast<std::size_t>(window)) {
    pts.erase(pts.begin(), pts.end() - window);
  }
  const double m = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  const double slope = sxy / sxx;
  out.rate = std::exp(slope);
  out.fit_quality = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  out.points_used = static_cast<int>(pts.size());
  return out;
}

ContractionReport contraction_check(const Trajectory& t, const Point& c, double r,
                                    double rho) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be > 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
  if (t.record_every != 1) {
    throw std::invalid_argument("contraction check needs every iterate recorded");
  }
  // u = y_{-1}, x_0, y_0, x_1, y_1, ...
  std::vector<const Point*> u;
  u.push_back(&t.start);
  for (const auto& s : t.steps) {
    u.push_back(&s.x);
    u.push_back(&s.y);
  }
  ContractionReport rep;
  rep.r = r;
  rep.rho = rho;
  for (std::size_t i = 0; i + 3 < u.size(); ++i) {
    const Point& u1 = *u[i];
    const Point& u2 = *u[i + 1];
    const Point& u3 = *u[i + 2];
    const Point& u4 = *u[i + 3];
    const bool premise = std::max((u2 - c).norm(), (u3 - c).norm()) <= r;
    const double prev = std::max((u1 - u2).norm(), (u2 - u3).norm());
    const double next = (u3 - u4).norm();
    bool ok = true;
    if (premise) {
      ok = next <= rho * prev + 1e-12;
      if (prev > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, next / prev);
    }
    rep.applicable.push_back(premise);
    rep.satisfied.push_back(ok);
    rep.verdict = rep.verdict && ok;
  }
  return rep;
}

bool tail_bound_check(const Trajectory& t, double M, double rho) {
  if (t.status != Status::Converged) {
    throw std::invalid_argument("tail bound needs a converged trajectory");
  }
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
  if (!(M >= 0.0)) throw std::invalid_argument("M must be >= 0");
  const double k = M * (1.0 + rho) / (1.0 - rho);
  for (const auto& s : t.steps) {
    const double bound = k * std::pow(rho, static_cast<double>(s.n)) + 1e-12;
    const double dist = std::max((s.x - t.limit).norm(), (s.y - t.limit).norm());
    if (dist > bound) return false;
  }
  return true;
}

AbsorbingReport absorbing_sample_check(const ClosedSet& S, const ClosedSet& A, int samples,
                                       std::uint64_t seed, double radius, const Point* center) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (S.dimension() != A.dimension()) throw std::invalid_argument("dimension mismatch");
  const Point c = center ? *center : Point::Zero(S.dimension());
  Rng rng(seed);
  AbsorbingReport rep;
  for (const auto& s : sample_set_points(S, c, radius, samples, rng)) {
    for (const auto& a : project(A, s).nearest) {
      for (int i = 0; i < 64; ++i) {
        const double tau = static_cast<double>(i) / 63.0;
        const Point p = (1.0 - tau) * s + tau * a;
        if (!membership(S, p, 1e-9)) {
          rep.absorbing = false;
          rep.sample = s;
          rep.nearest = a;
          rep.escape = p;
          return rep;
        }
      }
    }
  }
  return rep;
}

}  // namespace marp
