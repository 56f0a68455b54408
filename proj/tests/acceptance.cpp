// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "marp/catalog.hpp"
#include "marp/cones.hpp"
#include "marp/diagnostics.hpp"
#include "marp/rates.hpp"
#include "marp/sawtooth.hpp"

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

using namespace marp;
using namespace marp::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream notes;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) notes << "; ";
      notes << what;
      pass = false;
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// 1. Exact iterates of the half-relaxed two-point run.
void criterion_1(Outcome& o) {
  MarpConfig cfg = two_point_config(0.5, 0.5);
  cfg.gap_tol = 1e-14;
  cfg.max_iter = 61;
  const Trajectory t = run(cfg);
  const double want[6] = {1.0, -2.0, -5.0 / 2, -11.0 / 4, -23.0 / 8, -47.0 / 16};
  const char* names[6] = {"x0", "y0", "x1", "y1", "x2", "y2"};
  for (int i = 0; i < 6; ++i) {
    const Step& s = t.steps.at(static_cast<std::size_t>(i / 2));
    const double got = i % 2 == 0 ? s.x[0] : s.y[0];
    o.check(std::abs(got - want[i]) <= 1e-12,
            std::string(names[i]) + " = " + num(got) + ", expected " + num(want[i]));
  }
  o.check(t.status == Status::Converged && std::abs(t.limit[0] + 3.0) <= 1e-9,
          "limit -3 not reached by n = 60");
  const double rate = empirical_rate(t, 30).rate;
  o.check(std::abs(rate - 0.5) <= 0.02, "empirical rate " + num(rate) + ", expected 0.5 +- 0.02");
}

// 2. Unrelaxed projections cycle.
void criterion_2(Outcome& o) {
  const Trajectory t = run(two_point_config(1.0, 1.0));
  o.check(t.status == Status::Cycle, std::string("status ") + to_string(t.status));
  for (const auto& s : t.steps) {
    o.check(s.x[0] == 2.0 && s.y[0] == 6.0, "iterate off the 2/6 cycle");
  }
}

// 3. Constant relaxation inside the convergent window, and the unrelaxed cycle.
void criterion_3(Outcome& o) {
  for (double lam : {0.35, 0.5, 0.7}) {
    MarpConfig cfg = two_point_config(lam, lam);
    cfg.gap_tol = 1e-13;
    const Trajectory t = run(cfg);
    o.check(t.status == Status::Converged && std::abs(t.limit[0] + 3.0) <= 1e-9,
            "lambda " + num(lam) + " did not converge to -3");
    const double rate = empirical_rate(t, 30).rate;
    o.check(std::abs(rate - (1.0 - lam)) <= 0.02,
            "lambda " + num(lam) + ": empirical rate " + num(rate) + ", expected " +
                num(1.0 - lam));
  }
  const Trajectory t = run(two_point_config(1.0, 1.0));
  o.check(t.status == Status::Cycle && t.steps.back().x[0] == 2.0 && t.steps.back().y[0] == 6.0,
          "lambda 1 did not cycle between 2 and 6");
}

// 4. Summable vanishing relaxation stops outside both sets.
void criterion_4(Outcome& o) {
  MarpConfig cfg = negative_half_line_config(Schedule::dyadic_sqrt(1.0),
                                             Schedule::dyadic_sqrt(1.0), 1.0);
  cfg.gap_tol = 1e-13;
  const Trajectory t = run(cfg);
  o.check(t.status == Status::Converged, "did not converge");
  if (t.status != Status::Converged) return;
  o.check(std::abs(t.limit[0] - 0.5) <= 1e-9, "limit " + num(t.limit[0]));
  o.check(!membership(*cfg.set_a, t.limit, 1e-6) && !membership(*cfg.set_b, t.limit, 1e-6),
          "limit lies in A or B");
}

// 5. One vanishing schedule on the two axes.
void criterion_5(Outcome& o) {
  MarpConfig cfg = two_axes_config(Schedule::constant(0.5), Schedule::dyadic_ratio(), pt({1, 1}));
  cfg.gap_tol = 1e-13;
  const Trajectory t = run(cfg);
  o.check(t.status == Status::Converged, "did not converge");
  if (t.status != Status::Converged) return;
  o.check((t.limit - pt({0, 0.5})).norm() <= 1e-9,
          "limit (" + num(t.limit[0]) + ", " + num(t.limit[1]) + "), expected (0, 0.5)");
  o.check(membership(*cfg.set_b, t.limit, 1e-9), "limit not in B");
  o.check(!membership(*cfg.set_a, t.limit, 1e-6), "limit in A");
}

// 6. Closed-form orbit on the axes and both summability regimes.
void criterion_6(Outcome& o) {
  Rng rng(606);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Schedule l, m;
    switch (trial % 4) {
      case 0:
        l = Schedule::constant(u(rng));
        m = Schedule::geometric(u(rng), 0.5 + 0.49 * u(rng));
        break;
      case 1:
        l = Schedule::monotone(1.0, 0.5 * u(rng), 0.9 * u(rng));
        m = Schedule::harmonic(u(rng));
        break;
      case 2:
        l = Schedule::dyadic_sqrt(u(rng) * 4);
        m = Schedule::dyadic_ratio();
        break;
      default:
        l = Schedule::explicit_list({u(rng), u(rng), u(rng)}, TailRule::Geometric, u(rng) * 0.99);
        m = Schedule::constant(u(rng));
    }
    MarpConfig cfg = two_axes_config(l, m, gaussian(2, rng, 5.0));
    cfg.max_iter = 60;
    cfg.gap_tol = 1e-300;
    cfg.cycle_detect = false;
    for (const auto& s : run(cfg).steps) {
      const auto [x, y] = closed_form_axes(cfg.start, l, m, s.n);
      worst = std::max({worst, (x - s.x).norm(), (y - s.y).norm()});
    }
  }
  o.check(worst <= 1e-12, "closed-form deviation " + num(worst));

  MarpConfig h = two_axes_config(Schedule::harmonic(1.0), Schedule::harmonic(1.0), pt({1, 1}));
  h.max_iter = 10000;
  h.gap_tol = 1e-300;
  const Trajectory th = run(h);
  const double hn = th.steps.back().y.norm();
  o.check(hn <= 1e-6, "harmonic schedules: |y| = " + num(hn) + " at n = 10^4, expected <= 1e-6");

  MarpConfig g = two_axes_config(Schedule::geometric(0.5, 0.5), Schedule::geometric(0.5, 0.5),
                                 pt({1, 1}));
  g.gap_tol = 1e-14;
  const Trajectory tg = run(g);
  o.check(tg.status == Status::Converged && tg.limit[0] > 0.1 && tg.limit[1] > 0.1,
          "dyadic schedules: limit not bounded away from the axes");
}

// 7. Rate formulas and their upper bounds.
void criterion_7(Outcome& o) {
  for (double theta : {0.0, 0.3, 0.9}) {
    const double v = rho_hat(Schedule::constant(0.5), Schedule::constant(0.5), theta).value;
    o.check(std::abs(v - std::sqrt((1.0 + theta) / 2.0)) <= 1e-15, "rho_hat at " + num(theta));
  }
  Rng rng(707);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 20; ++i) {
    const double theta = u(rng) * 0.5, eps = u(rng) * 0.2;
    const double v = kappa_hat(Schedule(), Schedule(), theta, eps).value;
    o.check(std::abs(v - (theta + 2.0 * eps)) <= 1e-15, "kappa_hat(1, 1) at " + num(theta));
  }
  o.check(eta(Schedule::geometric(0.5, 0.9), Schedule::geometric(0.3, 0.9)).value == 0.9, "eta");
  for (int i = 0; i < 1000; ++i) {
    const double theta = u(rng) * 0.98;
    const double a0 = u(rng), b0 = u(rng);
    const Schedule l = Schedule::monotone(a0, a0 * u(rng), u(rng) * 0.9);
    const Schedule m = Schedule::monotone(b0, b0 * u(rng), u(rng) * 0.9);
    const RateCertificate r = rho_hat(l, m, theta, 500);
    o.check(r.value > 0.0 && r.value <= r.upper_bound + 1e-12 && r.upper_bound < 1.0,
            "rho_hat bound violated");
    const double ai = r.meta.alpha_inf;
    const double eps = u(rng) * (1.0 - theta) * ai / 2.0;
    const RateCertificate k = kappa_hat(l, m, theta, eps, 500);
    o.check(k.value > 0.0 && k.value <= 1.0 - ((1.0 - theta) * ai - 2.0 * eps) + 1e-12 &&
                k.value < 1.0,
            "kappa_hat bound violated");
  }
}

// 8. Sawtooth geometry.
void criterion_8(Outcome& o) {
  const SetPtr a = share(ClosedSet::sawtooth(60));
  const SetPtr b = share(sawtooth::reflected_companion(60));
  const double target = std::sqrt(7.0 / 8.0);
  for (double delta : {0.1, 0.5}) {
    const double th = cq_number(*a, Restriction::boundary(a), *b, Restriction::boundary(b),
                                pt({0, 0}), delta, CqMethod::Exact2D)
                          .theta;
    o.check(std::abs(th - target) <= 1e-6, "exact CQ-number " + num(th) + " at " + num(delta));
    const double ts = cq_number(*a, Restriction::boundary(a), *b, Restriction::boundary(b),
                                pt({0, 0}), delta, CqMethod::Sampled, {100000, 1})
                          .theta;
    o.check(std::abs(ts - target) <= 5e-3, "sampled CQ-number " + num(ts) + " at " + num(delta));
  }
  const RegularityReport reg =
      regularity_probe(*a, Restriction::boundary(b), pt({0, 0}), 0.5, {20000, 1});
  o.check(reg.eps_lower > 0.17 &&
              reg.eps_lower >= std::sin(std::acos(0.75) / 4.0) - 1e-4,
          "regularity lower bound " + num(reg.eps_lower));

  // Dense polyline oracle for the two-point projections.
  const auto v = sawtooth::vertices(60);
  std::vector<Point> dense;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const int m = std::max(2, static_cast<int>(1e6 * (v[i + 1] - v[i]).norm() / 3.0));
    for (int j = 0; j < m; ++j) dense.push_back(v[i] + (v[i + 1] - v[i]) * (j / double(m - 1)));
  }
  for (int k = 1; k <= 10; ++k) {
    const auto l = sawtooth::landmarks(*a->as<Sawtooth2D>(), k);
    const double d = std::ldexp(1.0, -(k + 1));
    o.check(std::abs(l.beta1 - d * std::sqrt(2.0)) <= 1e-12 &&
                std::abs(l.beta2 - d * std::sqrt(2.0)) <= 1e-12,
            "landmark distances at k = " + std::to_string(k));
    o.check(std::abs(l.cos_angle - 0.75) <= 1e-12, "landmark angle at k = " + std::to_string(k));
    const ProjectionResult r = project(*a, l.z_k);
    o.check(r.nearest.size() == 2, "projection of z_k is not two points at k = " +
                                       std::to_string(k));
    if (r.nearest.size() != 2) continue;
    o.check((r.nearest[0] - l.mid_left).norm() <= 1e-9 &&
                (r.nearest[1] - l.mid_right).norm() <= 1e-9,
            "projection of z_k is not the midpoints at k = " + std::to_string(k));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : dense) best = std::min(best, (p - l.z_k).norm());
    const double spacing = 3.0 / 1e6;
    o.check(r.distance <= best + 1e-12 && best - r.distance <= spacing,
            "dense oracle disagrees at k = " + std::to_string(k));
  }
}

// 9. Geometric vanishing schedules on the sawtooth pair.
void criterion_9(Outcome& o) {
  Rng rng(909);
  std::uniform_real_distribution<double> ux(0.05, 0.9), uy(-0.05, 0.2);
  const ClosedSet a = ClosedSet::sawtooth(60);
  const ClosedSet b = sawtooth::reflected_companion(60);
  for (int trial = 0; trial < 5; ++trial) {
    const Point start = pt({ux(rng), uy(rng)});
    MarpConfig cfg = sawtooth_pair_config(Schedule::geometric(0.9, 0.9),
                                          Schedule::geometric(0.9, 0.9), start);
    cfg.gap_tol = 1e-13;
    cfg.max_iter = 400;
    const Trajectory t = run(cfg);
    const double m = std::max(t.steps[0].g, t.steps[0].h);
    bool gaps_ok = true;
    for (const auto& s : t.steps) {
      gaps_ok = gaps_ok && std::max(s.g, s.h) <= m * std::pow(0.9, s.n) * (1.0 + 1e-9);
    }
    o.check(gaps_ok, "gap bound fails from start " + std::to_string(trial));
    o.check(t.status == Status::Converged, "no convergence from start " + std::to_string(trial));
    if (t.status != Status::Converged) continue;
    const double bound =
        vanishing_limit_bound(0.9, 0.9, distance(a, start), distance(b, start));
    o.check((t.limit - start).norm() <= bound, "limit-distance bound fails");
    const double rate = empirical_rate(t, 30).rate;
    o.check(rate <= 0.92, "empirical rate " + num(rate));
  }
}

// 10. Property suites.
void criterion_10(Outcome& o) {
  Rng rng(1010);
  std::uniform_real_distribution<double> lam(1e-3, 1.0 - 1e-3);
  int triples = 0;
  for (int round = 0; triples < 1000; ++round) {
    const int d = 1 + round % 3;
    for (const auto& [kind, set] : random_sets(d, rng)) {
      const bool saw = kind.rfind("sawtooth", 0) == 0;
      const Point y = gaussian(d, rng, saw ? 0.4 : 3.0);
      const double l = lam(rng);
      const RelaxedStep s = relaxed_project(set, y, l);
      const ProjectionResult again = project(set, s.x);
      o.check(again.nearest.size() == 1 &&
                  (again.nearest.front() - s.a).norm() <= 1e-12 * (1.0 + s.a.norm()),
              "re-projection differs for " + kind);
      const double dy = distance(set, y);
      o.check(std::abs((s.x - y).norm() - l * dy) <= 1e-12 * (1.0 + dy), "step length " + kind);
      o.check((l * (s.x - s.a) - (1.0 - l) * (y - s.x)).norm() <= 1e-12 * (1.0 + y.norm()),
              "collinearity " + kind);
      const Point q = gaussian(d, rng, saw ? 0.4 : 3.0);
      o.check(project(set, s.a).distance <= 1e-12 * (1.0 + s.a.norm()), "idempotence " + kind);
      o.check(std::abs(distance(set, y) - distance(set, q)) <= (y - q).norm() + 1e-12,
              "distance not nonexpansive for " + kind);
      ++triples;
    }
  }

  // Orbit containment: the lower half-plane absorbs projections onto both axes.
  const ClosedSet s = ClosedSet::half_space(pt({0, 1}), 0.0);
  MarpConfig cfg = two_axes_config(Schedule::constant(0.4), Schedule::constant(0.8), pt({0, 0}));
  o.check(absorbing_sample_check(s, *cfg.set_a, 500, 1).absorbing &&
              absorbing_sample_check(s, *cfg.set_b, 500, 2).absorbing,
          "half-plane not absorbing");
  for (int i = 0; i < 20; ++i) {
    Point start = gaussian(2, rng, 4.0);
    start[1] = -std::abs(start[1]);
    cfg.start = start;
    for (const auto& st : run(cfg).steps) {
      o.check(membership(s, st.x) && membership(s, st.y), "orbit left the absorbing set");
    }
  }

  // CQ-number monotone in delta and invariant under isometries.
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586), rad(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Point c = gaussian(2, rng, 0.3);
    Matrix dir(2, 1);
    const double t0 = ang(rng);
    dir << std::cos(t0), std::sin(t0);
    const ClosedSet a = trial % 2 == 0 ? ClosedSet::box(c - pt({rad(rng), rad(rng)}), c)
                                       : ClosedSet::affine(c, dir);
    const ClosedSet b = ClosedSet::transformed(
        ClosedSet::box(pt({0, 0}), pt({rad(rng), rad(rng)})), random_orthogonal(2, rng), c);
    const double d1 = rad(rng) * 0.5, d2 = d1 + rad(rng);
    auto theta = [](const ClosedSet& x, const ClosedSet& y, const Point& cc, double d) {
      return cq_number(x, Restriction::whole(), y, Restriction::whole(), cc, d,
                       CqMethod::Exact2D)
          .theta;
    };
    const double t1 = theta(a, b, c, d1), t2 = theta(a, b, c, d2);
    o.check(t1 <= t2 + 1e-12, "CQ-number decreased with delta");
    const Matrix q = random_orthogonal(2, rng);
    const Point t = gaussian(2, rng);
    const ClosedSet qa = ClosedSet::transformed(a, q, t), qb = ClosedSet::transformed(b, q, t);
    o.check(std::abs(theta(qa, qb, q * c + t, d1) - t1) <= 1e-9 &&
                std::abs(theta(qa, qb, q * c + t, d2) - t2) <= 1e-9,
            "CQ-number changed under an isometry");
  }
}

// 11. Global convergence on orthogonal lines.
void criterion_11(Outcome& o) {
  Rng rng(1111);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const double bound = rho_hat(Schedule::constant(0.5), Schedule::constant(0.5), 0.0).value;
  for (int i = 0; i < 50; ++i) {
    MarpConfig cfg =
        two_axes_config(Schedule::constant(0.5), Schedule::constant(0.5), pt({u(rng), u(rng)}));
    cfg.gap_tol = 1e-13;
    const Trajectory t = run(cfg);
    o.check(t.status == Status::Converged && t.limit.norm() <= 1e-8,
            "start " + std::to_string(i) + " did not reach the origin");
    const double rate = empirical_rate(t, 30).rate;
    o.check(rate <= bound + 0.02, "empirical rate " + num(rate));
  }
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"1  half-relaxed two-point iterates, limit and rate", criterion_1},
      {"2  unrelaxed two-point cycle", criterion_2},
      {"3  constant-relaxation window and rates", criterion_3},
      {"4  summable vanishing relaxation limit", criterion_4},
      {"5  one vanishing schedule on the axes", criterion_5},
      {"6  axes closed form and summability regimes", criterion_6},
      {"7  rate formulas and bounds", criterion_7},
      {"8  sawtooth CQ-number, regularity, landmarks", criterion_8},
      {"9  geometric vanishing schedules on the sawtooth pair", criterion_9},
      {"10 property suites", criterion_10},
      {"11 global convergence on orthogonal lines", criterion_11},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < 5.0, "took " + num(secs) + " s");
    std::printf("%s criterion %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", name, secs,
                o.pass ? "" : ": ", o.notes.str().c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
