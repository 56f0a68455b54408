#include "marp/solver.hpp"

#include "detail.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <stdexcept>

namespace marp {

namespace {

constexpr int kMaxPeriod = 32;
constexpr double kCycleTol = 1e-12;

bool same_state(const Point& p, const Point& q) {
  return (p - q).norm() <= kCycleTol * (1.0 + p.norm());
}

// A repeat only counts as a cycle when the iterates still move by much more
// than the mismatch; otherwise a slowly converging orbit looks periodic.
bool repeats(const Point& x, const Point& y, const Point& ox, const Point& oy, double motion) {
  if (!same_state(x, ox) || !same_state(y, oy)) return false;
  return (x - ox).norm() + (y - oy).norm() <= 1e-6 * motion;
}

struct State {
  Point x, y;
};

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Converged:
      return "converged";
    case Status::MaxIter:
      return "max_iter";
    case Status::Cycle:
      return "cycle";
  }
  return "unknown";
}

void validate(const MarpConfig& cfg) {
  if (!cfg.set_a || !cfg.set_b) throw std::invalid_argument("both sets are required");
  if (cfg.set_a->dimension() != cfg.set_b->dimension()) {
    throw std::invalid_argument("sets A and B have different dimensions");
  }
  check_dimension(*cfg.set_a, cfg.start);
  if (!cfg.start.allFinite()) throw std::invalid_argument("start must be finite");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(cfg.gap_tol > 0.0)) throw std::invalid_argument("gap_tol must be > 0");
  if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (cfg.tie_policy == TiePolicy::All) {
    throw std::invalid_argument("tie policy 'all' cannot drive an iteration");
  }
}

Trajectory run(const MarpConfig& cfg) {
  validate(cfg);
  Trajectory t;
  t.start = cfg.start;
  t.record_every = cfg.record_every;

  std::deque<State> recent;
  Point y_prev = cfg.start;
  Point a_prev, b_prev;

  for (long n = 0; n < cfg.max_iter; ++n) {
    Step s;
    s.n = n;
    s.lambda = cfg.lambda.value(n);
    s.mu = cfg.mu.value(n);
    RelaxedStep ra = relaxed_project(*cfg.set_a, y_prev, s.lambda, cfg.tie_policy,
                                     n > 0 ? &a_prev : nullptr);
    RelaxedStep rb = relaxed_project(*cfg.set_b, ra.x, s.mu, cfg.tie_policy,
                                     n > 0 ? &b_prev : nullptr);
    s.a = std::move(ra.a);
    s.x = std::move(ra.x);
    s.b = std::move(rb.a);
    s.y = std::move(rb.x);
    s.g = (s.y - s.x).norm();
    s.h = (s.x - y_prev).norm();
    t.iterations = n + 1;

    bool done = false;
    if (std::max(s.g, s.h) <= cfg.gap_tol * (1.0 + s.y.norm())) {
      t.status = Status::Converged;
      t.limit = s.y;
      done = true;
    } else if (cfg.cycle_detect) {
      for (int p = 1; p <= static_cast<int>(recent.size()); ++p) {
        const State& old = recent[recent.size() - static_cast<std::size_t>(p)];
        if (repeats(s.x, s.y, old.x, old.y, std::max(s.g, s.h))) {
          t.status = Status::Cycle;
          t.period = p;
          for (int i = p - 1; i >= 1; --i) {
            const State& w = recent[recent.size() - static_cast<std::size_t>(i)];
            t.witness.push_back(w.x);
            t.witness.push_back(w.y);
          }
          t.witness.push_back(s.x);
          t.witness.push_back(s.y);
          done = true;
          break;
        }
      }
    }

    y_prev = s.y;
    a_prev = s.a;
    b_prev = s.b;
    if (cfg.cycle_detect) {
      recent.push_back(State{s.x, s.y});
      if (recent.size() > kMaxPeriod) recent.pop_front();
    }
    const bool keep = (n % cfg.record_every == 0) || done || n + 1 == cfg.max_iter;
    if (keep) t.steps.push_back(std::move(s));
    if (done) return t;
  }
  t.status = Status::MaxIter;
  return t;
}

std::pair<Point, Point> closed_form_axes(const Point& start, const Schedule& lambda,
                                         const Schedule& mu, long n) {
  if (start.size() != 2) throw std::invalid_argument("two-axes start must be 2-dimensional");
  if (n < 0) throw std::invalid_argument("index must be >= 0");
  double pm = start[0];  // eta1 * prod_{i<n} (1 - mu_i)
  double pl = start[1];  // eta2 * prod_{i<=n} (1 - lambda_i)
  for (long i = 0; i < n; ++i) pm *= 1.0 - mu.value(i);
  for (long i = 0; i <= n; ++i) pl *= 1.0 - lambda.value(i);
  Point x(2), y(2);
  x << pm, pl;
  y << pm * (1.0 - mu.value(n)), pl;
  return {x, y};
}

void write_csv(const Trajectory& t, std::ostream& out) {
  using detail::format_double;
  const Eigen::Index d = t.start.size();
  out << "n";
  for (const char* name : {"a", "x", "b", "y"}) {
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << name << '[' << i << ']';
  }
  out << ",gap_yx,gap_xy_prev\n";
  for (const Step& s : t.steps) {
    out << s.n;
    for (const Point* p : {&s.a, &s.x, &s.b, &s.y}) {
      for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_double((*p)[i]);
    }
    out << ',' << format_double(s.g) << ',' << format_double(s.h) << '\n';
  }
}

}  // namespace marp
