#include "marp/catalog.hpp"

#include "marp/cones.hpp"
#include "marp/diagnostics.hpp"
#include "marp/sawtooth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marp {

namespace {

Point p1(double v) {
  Point p(1);
  p << v;
  return p;
}

Point p2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

SetPtr share(ClosedSet s) { return std::make_shared<const ClosedSet>(std::move(s)); }

double coord(const Trajectory& t, Eigen::Index i) {
  return t.limit.size() > i ? t.limit[i] : std::nan("");
}

Matrix column(double x, double y) {
  Matrix m(2, 1);
  m << x, y;
  return m;
}

class Checker {
 public:
  Checker(std::string id, std::string title) {
    res_.id = std::move(id);
    res_.title = std::move(title);
  }
  void near(const std::string& name, double expected, double actual, double tol,
            const std::string& basis) {
    res_.checks.push_back(
        {name, expected, actual, tol, basis, std::abs(expected - actual) <= tol});
  }
  void below(const std::string& name, double bound, double actual, const std::string& basis) {
    res_.checks.push_back({name, bound, actual, 0.0, basis, actual <= bound});
  }
  void above(const std::string& name, double bound, double actual, const std::string& basis) {
    res_.checks.push_back({name, bound, actual, 0.0, basis, actual > bound});
  }
  void truth(const std::string& name, bool value, const std::string& basis) {
    res_.checks.push_back({name, 1.0, value ? 1.0 : 0.0, 0.0, basis, value});
  }
  ExampleResult done() { return std::move(res_); }

 private:
  ExampleResult res_;
};

ExampleResult run_ex11() {
  Checker c("ex-1.1", "unrelaxed projections cycle between two-point sets");
  const Trajectory t = run(two_point_config(1.0, 1.0));
  c.truth("status is cycle", t.status == Status::Cycle, "reference");
  c.near("period", 1.0, t.period, 0.0, "reference");
  bool constant = true;
  for (const auto& s : t.steps) constant = constant && s.x[0] == 2.0 && s.y[0] == 6.0;
  c.truth("x_n = 2 and y_n = 6 for every n", constant, "reference");
  return c.done();
}

ExampleResult run_ex12() {
  Checker c("ex-1.2", "half-relaxed projections reach the common point -3");
  MarpConfig cfg = two_point_config(0.5, 0.5);
  cfg.gap_tol = 1e-14;
  const Trajectory t = run(cfg);
  // x_n = -3 + 4^(1-n), y_n = -3 + 2 * 4^-n.
  double worst = 0.0;
  for (const auto& s : t.steps) {
    const double q = std::ldexp(1.0, -2 * static_cast<int>(s.n));
    worst = std::max({worst, std::abs(s.x[0] - (-3.0 + 4.0 * q)),
                      std::abs(s.y[0] - (-3.0 + 2.0 * q))});
  }
  c.near("x_0", 1.0, t.steps.at(0).x[0], 1e-12, "closed-form");
  c.near("y_0", -1.0, t.steps.at(0).y[0], 1e-12, "closed-form");
  c.near("x_2", -11.0 / 4, t.steps.at(2).x[0], 1e-12, "closed-form");
  c.near("y_2", -23.0 / 8, t.steps.at(2).y[0], 1e-12, "closed-form");
  c.below("max deviation from closed form", 1e-12, worst, "closed-form");
  c.truth("converged", t.status == Status::Converged, "reference");
  c.near("limit", -3.0, coord(t, 0), 1e-9, "reference");
  const RateEstimate r = empirical_rate(t, 30);
  c.near("rate per projection step", 0.5, std::sqrt(r.rate), 0.02, "closed-form");
  return c.done();
}

ExampleResult run_ex61() {
  Checker c("ex-6.1", "vanishing summable relaxation stops outside both sets");
  MarpConfig cfg = negative_half_line_config(Schedule::dyadic_sqrt(1.0),
                                             Schedule::dyadic_sqrt(1.0), 1.0);
  cfg.gap_tol = 1e-13;
  const Trajectory t = run(cfg);
  c.truth("converged", t.status == Status::Converged, "reference");
  c.near("limit delta y / (delta + 1)", 0.5, coord(t, 0), 1e-9, "reference");
  c.truth("limit outside A", !membership(*cfg.set_a, t.limit, 1e-6), "reference");
  c.truth("limit outside B", !membership(*cfg.set_b, t.limit, 1e-6), "reference");
  double worst = 0.0;
  for (const auto& s : t.steps) {
    const double want = (1.0 + std::ldexp(1.0, -static_cast<int>(s.n) - 1)) / 2.0;
    worst = std::max(worst, std::abs(s.y[0] - want));
  }
  c.below("max |y_n - (1 + 2^-(n+1)) / 2|", 1e-12, worst, "closed-form");
  return c.done();
}

ExampleResult run_ex62() {
  Checker c("ex-6.2", "vanishing nonsummable relaxation reaches the intersection");
  MarpConfig cfg = negative_half_line_config(Schedule::harmonic(1.0), Schedule::harmonic(1.0), 1.0);
  cfg.gap_tol = 1e-300;
  cfg.max_iter = 10000;
  const Trajectory t = run(cfg);
  const Step& last = t.steps.back();
  const double n2 = static_cast<double>(last.n) + 2.0;
  c.near("y_n = 1 / (n + 2)^2", 1.0 / (n2 * n2), last.y[0], 1e-15, "closed-form");
  c.below("|y_n| at n = 9999", 1e-6, std::abs(last.y[0]), "reference");
  return c.done();
}

ExampleResult run_ex63() {
  Checker c("ex-6.3", "one vanishing schedule: the limit lies in B but not in A");
  MarpConfig cfg = two_axes_config(Schedule::dyadic_ratio(), Schedule::constant(0.5), p2(1.0, 1.0));
  cfg.gap_tol = 1e-13;
  const Trajectory t = run(cfg);
  c.truth("converged", t.status == Status::Converged, "reference");
  c.near("limit x-coordinate", 0.0, coord(t, 0), 1e-9, "reference");
  c.near("limit y-coordinate", 0.5, coord(t, 1), 1e-9, "reference");
  c.truth("limit in B", membership(*cfg.set_b, t.limit, 1e-9), "reference");
  c.truth("limit not in A", !membership(*cfg.set_a, t.limit, 1e-6), "reference");
  return c.done();
}

ExampleResult run_ex84() {
  Checker c("ex-8.4", "orthogonal axes: closed-form orbit and summability regimes");
  {
    const Trajectory t = run(two_axes_config(Schedule(), Schedule(), p2(3.0, -2.0)));
    c.near("unrelaxed y_0 norm", 0.0, t.steps.front().y.norm(), 0.0, "reference");
    c.near("unrelaxed: iterations until the zero gap shows", 2.0,
           static_cast<double>(t.iterations), 0.0, "reference");
  }
  {
    const Schedule l = Schedule::geometric(0.6, 0.8);
    const Schedule m = Schedule::explicit_list({0.9, 0.3, 0.5}, TailRule::Constant);
    MarpConfig cfg = two_axes_config(l, m, p2(1.5, -0.7));
    cfg.max_iter = 40;
    cfg.gap_tol = 1e-300;
    const Trajectory t = run(cfg);
    double worst = 0.0;
    for (const auto& s : t.steps) {
      const auto [x, y] = closed_form_axes(cfg.start, l, m, s.n);
      worst = std::max({worst, (x - s.x).norm(), (y - s.y).norm()});
    }
    c.below("max deviation from closed form", 1e-12, worst, "closed-form");
  }
  {
    MarpConfig cfg = two_axes_config(Schedule::geometric(0.5, 0.5), Schedule::geometric(0.5, 0.5),
                                     p2(1.0, 1.0));
    cfg.gap_tol = 1e-14;
    const Trajectory t = run(cfg);
    c.truth("summable: converged", t.status == Status::Converged, "reference");
    c.above("summable: limit x-coordinate", 0.1, coord(t, 0), "reference");
    c.above("summable: limit y-coordinate", 0.1, coord(t, 1), "reference");
  }
  {
    MarpConfig cfg = two_axes_config(Schedule::harmonic(1.0), Schedule::harmonic(1.0),
                                     p2(1.0, 1.0));
    cfg.max_iter = 10000;
    cfg.gap_tol = 1e-300;
    const Trajectory t = run(cfg);
    const Step& last = t.steps.back();
    // Both coordinates shrink like 1 / (n + 2).
    const double want = 1.0 / (static_cast<double>(last.n) + 2.0);
    c.near("nonsummable: y_n x-coordinate", want, last.y[0], 1e-15, "closed-form");
    c.near("nonsummable: y_n y-coordinate", want, last.y[1], 1e-15, "closed-form");
  }
  return c.done();
}

ExampleResult run_prop81() {
  Checker c("prop-8.1", "constant relaxation on {2, -3} and {6, -3} from 0");
  for (double lam : {0.35, 0.5, 0.7}) {
    MarpConfig cfg = two_point_config(lam, lam);
    cfg.gap_tol = 1e-13;
    const Trajectory t = run(cfg);
    const std::string tag = "lambda " + std::to_string(lam).substr(0, 4) + ": ";
    c.truth(tag + "converged", t.status == Status::Converged, "reference");
    c.near(tag + "limit", -3.0, coord(t, 0), 1e-9, "reference");
    const RateEstimate r = empirical_rate(t, 30);
    c.near(tag + "rate per projection step", 1.0 - lam, std::sqrt(r.rate), 0.02, "reference");
  }
  const Trajectory t = run(two_point_config(1.0, 1.0));
  c.truth("lambda 1: cycle", t.status == Status::Cycle, "reference");
  c.truth("lambda 1: cycle between 2 and 6",
          t.steps.back().x[0] == 2.0 && t.steps.back().y[0] == 6.0, "reference");
  return c.done();
}

ExampleResult run_sawtooth() {
  Checker c("sawtooth-9", "sawtooth pair: landmarks, two-point projection, CQ-number, regularity");
  const ClosedSet A = ClosedSet::sawtooth(60);
  const ClosedSet B = sawtooth::reflected_companion(60);
  const Sawtooth2D& st = *A.as<Sawtooth2D>();
  double worst_beta = 0.0, worst_cos = 0.0, worst_mid = 0.0;
  bool two_points = true;
  for (int k = 1; k <= 10; ++k) {
    const auto l = sawtooth::landmarks(st, k);
    const double d = std::ldexp(1.0, -(k + 1));
    worst_beta = std::max({worst_beta, std::abs(l.beta1 - d * std::sqrt(2.0)),
                           std::abs(l.beta2 - d * std::sqrt(2.0))});
    worst_cos = std::max(worst_cos, std::abs(l.cos_angle - 0.75));
    const auto r = project(A, l.z_k);
    two_points = two_points && r.nearest.size() == 2;
    if (r.nearest.size() == 2) {
      worst_mid = std::max(worst_mid, std::min((r.nearest[0] - l.mid_left).norm() +
                                                   (r.nearest[1] - l.mid_right).norm(),
                                               (r.nearest[0] - l.mid_right).norm() +
                                                   (r.nearest[1] - l.mid_left).norm()));
    }
  }
  c.below("landmark distances vs d sqrt 2", 1e-12, worst_beta, "reference");
  c.below("landmark angle cosine vs 3/4", 1e-12, worst_cos, "reference");
  c.truth("P_A(z_k) has two points, k = 1..10", two_points, "reference");
  c.below("P_A(z_k) vs segment midpoints", 1e-9, worst_mid, "oracle");

  const SetPtr pa = std::make_shared<const ClosedSet>(A);
  const SetPtr pb = std::make_shared<const ClosedSet>(B);
  const Point origin = Point::Zero(2);
  for (double delta : {0.1, 0.5}) {
    const CQReport r = cq_number(A, Restriction::boundary(pa), B, Restriction::boundary(pb),
                                 origin, delta, CqMethod::Exact2D);
    c.near("exact CQ-number at delta " + std::to_string(delta).substr(0, 3), std::sqrt(7.0 / 8.0),
           r.theta, 1e-6, "reference");
  }
  const RegularityReport reg =
      regularity_probe(A, Restriction::boundary(pb), origin, 0.5, SampleOptions{2000, 7});
  c.above("regularity lower bound", 0.17, reg.eps_lower, "reference");
  return c.done();
}

}  // namespace

bool ExampleResult::pass() const {
  for (const auto& e : checks) {
    if (!e.pass) return false;
  }
  return !checks.empty();
}

MarpConfig two_point_config(double lambda, double mu) {
  MarpConfig cfg;
  cfg.set_a = share(ClosedSet::finite({p1(-3.0), p1(2.0)}));
  cfg.set_b = share(ClosedSet::finite({p1(-3.0), p1(6.0)}));
  cfg.lambda = Schedule::constant(lambda);
  cfg.mu = Schedule::constant(mu);
  cfg.start = p1(0.0);
  return cfg;
}

MarpConfig two_axes_config(const Schedule& lambda, const Schedule& mu, const Point& start) {
  MarpConfig cfg;
  cfg.set_a = share(ClosedSet::affine(p2(0.0, 0.0), column(1.0, 0.0)));
  cfg.set_b = share(ClosedSet::affine(p2(0.0, 0.0), column(0.0, 1.0)));
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.start = start;
  return cfg;
}

MarpConfig negative_half_line_config(const Schedule& lambda, const Schedule& mu, double start) {
  MarpConfig cfg;
  cfg.set_a = share(ClosedSet::half_space(p1(1.0), 0.0));
  cfg.set_b = cfg.set_a;
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.start = p1(start);
  return cfg;
}

MarpConfig sawtooth_pair_config(const Schedule& lambda, const Schedule& mu, const Point& start) {
  MarpConfig cfg;
  cfg.set_a = share(ClosedSet::sawtooth(60));
  cfg.set_b = share(sawtooth::reflected_companion(60));
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.start = start;
  return cfg;
}

const std::vector<ExampleSpec>& example_catalog() {
  static const std::vector<ExampleSpec> catalog = [] {
    std::vector<ExampleSpec> v;
    v.push_back({"ex-1.1", "unrelaxed projections cycle",
                 [] { return std::vector<MarpConfig>{two_point_config(1.0, 1.0)}; }, run_ex11});
    v.push_back({"ex-1.2", "half-relaxed projections converge",
                 [] { return std::vector<MarpConfig>{two_point_config(0.5, 0.5)}; }, run_ex12});
    v.push_back({"ex-6.1", "limit outside both sets",
                 [] {
                   return std::vector<MarpConfig>{negative_half_line_config(
                       Schedule::dyadic_sqrt(1.0), Schedule::dyadic_sqrt(1.0), 1.0)};
                 },
                 run_ex61});
    v.push_back({"ex-6.2", "limit in the intersection",
                 [] {
                   return std::vector<MarpConfig>{negative_half_line_config(
                       Schedule::harmonic(1.0), Schedule::harmonic(1.0), 1.0)};
                 },
                 run_ex62});
    v.push_back({"ex-6.3", "limit in B only",
                 [] {
                   return std::vector<MarpConfig>{two_axes_config(
                       Schedule::dyadic_ratio(), Schedule::constant(0.5), p2(1.0, 1.0))};
                 },
                 run_ex63});
    v.push_back({"ex-8.4", "orthogonal axes",
                 [] {
                   return std::vector<MarpConfig>{
                       two_axes_config(Schedule(), Schedule(), p2(3.0, -2.0)),
                       two_axes_config(Schedule::geometric(0.5, 0.5),
                                       Schedule::geometric(0.5, 0.5), p2(1.0, 1.0))};
                 },
                 run_ex84});
    v.push_back({"prop-8.1", "relaxation rescues a cycling pair",
                 [] {
                   std::vector<MarpConfig> out;
                   for (double l : {0.35, 0.5, 0.7, 1.0}) out.push_back(two_point_config(l, l));
                   return out;
                 },
                 run_prop81});
    v.push_back({"sawtooth-9", "sawtooth pair geometry",
                 [] { return std::vector<MarpConfig>{}; }, run_sawtooth});
    return v;
  }();
  return catalog;
}

const ExampleSpec& find_example(const std::string& id) {
  for (const auto& e : example_catalog()) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument("unknown example id '" + id + "'");
}

}  // namespace marp
