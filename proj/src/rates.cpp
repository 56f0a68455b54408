#include "marp/rates.hpp"

#include <algorithm>
#include <cmath>

namespace marp {

namespace {

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in [0, 1)");
}

struct Sup {
  double value = 0.0;
  bool analytic = true;
  int horizon = 0;
};

bool is_constant(const Schedule& s) {
  return std::holds_alternative<ConstantSchedule>(s.variant());
}

// sup_n term(n) over indices where the schedule is representable.
template <class Term>
Sup numeric_sup(const Schedule& s, int horizon, Term term) {
  Sup out{0.0, false, horizon};
  long last = s.last_index();
  long stop = last >= 0 ? std::min<long>(horizon, last) : horizon;
  if (const auto* e = std::get_if<ExplicitSchedule>(&s.variant())) {
    if (e->tail == TailRule::Constant) {
      stop = static_cast<long>(e->values.size()) + 1;
      out.analytic = true;
      out.horizon = 0;
    }
    if (last >= 0) {
      out.analytic = true;
      out.horizon = 0;
    }
  }
  for (long n = 0; n < stop; ++n) {
    double cur = 0.0;
    double next = 0.0;
    try {
      cur = s.value(n);
      next = s.value(n + 1);
    } catch (const std::underflow_error&) {
      break;
    }
    out.value = std::max(out.value, term(cur, next));
  }
  return out;
}

double quad(double s, double theta) {
  return s * s + (1.0 - s) * (1.0 - s) + 2.0 * theta * s * (1.0 - s);
}

Sup rho_sq_sup(const Schedule& s, double theta, int horizon) {
  if (is_constant(s)) return {quad(s.initial(), theta), true, 0};
  if (const auto* g = std::get_if<GeometricSchedule>(&s.variant())) {
    // The quadratic factor tends to 1 as the values vanish.
    return {g->ratio * g->ratio, true, 0};
  }
  return numeric_sup(s, horizon, [&](double cur, double next) {
    const double r = next / cur;
    return r * r * quad(cur, theta);
  });
}

Sup kappa_sup(const Schedule& s, double theta, double eps, int horizon) {
  auto term = [&](double cur) { return theta * cur + 2.0 * eps + (1.0 - cur); };
  if (is_constant(s)) return {term(s.initial()), true, 0};
  return numeric_sup(s, horizon,
                     [&](double cur, double next) { return (next / cur) * term(cur); });
}

}  // namespace

const char* to_string(RateKind k) {
  switch (k) {
    case RateKind::RhoHat:
      return "rho_hat";
    case RateKind::KappaHat:
      return "kappa_hat";
    case RateKind::Eta:
      return "eta";
  }
  return "unknown";
}

RateCertificate rho_hat(const Schedule& lambda, const Schedule& mu, double theta, int horizon) {
  check_theta(theta);
  RateCertificate c;
  c.kind = RateKind::RhoHat;
  c.theta = theta;
  c.meta = pair_meta(lambda, mu, horizon);
  const Sup a = rho_sq_sup(lambda, theta, horizon);
  const Sup b = rho_sq_sup(mu, theta, horizon);
  c.value = std::sqrt(std::max(a.value, b.value));
  c.analytic = a.analytic && b.analytic;
  c.horizon = c.analytic ? 0 : horizon;
  const double a0 = c.meta.alpha0;
  const double ai = c.meta.alpha_inf;
  c.upper_bound = std::sqrt(1.0 - 2.0 * (1.0 - theta) * std::min(a0 * (1.0 - a0), ai * (1.0 - ai)));
  c.valid = c.value < 1.0;
  return c;
}

RateCertificate kappa_hat(const Schedule& lambda, const Schedule& mu, double theta, double eps,
                          int horizon) {
  check_theta(theta);
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  RateCertificate c;
  c.kind = RateKind::KappaHat;
  c.theta = theta;
  c.eps = eps;
  c.meta = pair_meta(lambda, mu, horizon);
  const double margin = (1.0 - theta) * c.meta.alpha_inf - 2.0 * eps;
  if (!(margin > 0.0)) {
    throw RegularityMarginError("(1 - theta) * alpha_inf = " +
                                std::to_string((1.0 - theta) * c.meta.alpha_inf) +
                                " does not exceed 2 * eps = " + std::to_string(2.0 * eps));
  }
  const Sup a = kappa_sup(lambda, theta, eps, horizon);
  const Sup b = kappa_sup(mu, theta, eps, horizon);
  c.value = std::max(a.value, b.value);
  c.analytic = a.analytic && b.analytic;
  c.horizon = c.analytic ? 0 : horizon;
  c.upper_bound = 1.0 - margin;
  c.valid = c.value < 1.0;
  return c;
}

RateCertificate eta(const Schedule& lambda, const Schedule& mu, int horizon) {
  RateCertificate c;
  c.kind = RateKind::Eta;
  c.meta = pair_meta(lambda, mu, horizon);
  c.value = c.meta.sup_ratio;
  c.upper_bound = c.value;
  c.analytic = c.meta.analytic;
  c.horizon = c.meta.horizon;
  c.valid = c.value < 1.0;
  return c;
}

CqDelta cq_delta(double eps_slack, double rho, double alpha0) {
  if (!(eps_slack > 0.0)) throw std::invalid_argument("eps slack must be > 0");
  if (!(rho < 1.0)) throw std::domain_error("rho must be < 1");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("alpha0 must lie in (0, 1]");
  const double k = 2.0 * alpha0 * (1.0 + alpha0);
  CqDelta out;
  out.delta = eps_slack * (1.0 - rho) / (1.0 - rho + k);
  out.r = out.delta * k / (1.0 - rho);
  return out;
}

double RegularityBall::bound(long n) const {
  return coefficient * std::pow(kappa, static_cast<double>(n));
}

double RegularityBall::unrelaxed_bound(long n) const {
  return unrelaxed_coefficient * std::pow(kappa, 2.0 * static_cast<double>(n));
}

RegularityBall regularity_ball(double delta, double kappa, double alpha0) {
  if (!(kappa < 1.0)) throw std::domain_error("kappa must be < 1");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("alpha0 must lie in (0, 1]");
  const double k = 2.0 * alpha0 * (1.0 + alpha0);
  RegularityBall b;
  b.kappa = kappa;
  b.start_radius = delta * (1.0 - kappa) / (1.0 - kappa + k);
  b.coefficient = delta * alpha0 * (1.0 + alpha0) * (1.0 + kappa) / (1.0 - kappa + k);
  b.unrelaxed_coefficient =
      2.0 * delta * (1.0 + kappa * kappa) / ((1.0 + kappa) * (5.0 - kappa));
  return b;
}

double vanishing_limit_bound(double alpha0, double eta_value, double dA, double dB) {
  if (!(eta_value < 1.0)) throw std::domain_error("eta must be < 1");
  if (!(eta_value > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (!(dA >= 0.0 && dB >= 0.0)) throw std::invalid_argument("distances must be >= 0");
  return 2.0 * alpha0 * (1.0 + alpha0) / (1.0 - eta_value) * std::max(dA, dB);
}

}  // namespace marp
