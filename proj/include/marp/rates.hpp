#pragma once

#include "marp/schedules.hpp"

#include <stdexcept>
#include <string>

namespace marp {

/// Raised when (1 - theta) alpha_inf <= 2 eps, so no kappa certificate exists.
class RegularityMarginError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class RateKind { RhoHat, KappaHat, Eta };

const char* to_string(RateKind k);

struct RateCertificate {
  RateKind kind = RateKind::RhoHat;
  double value = 1.0;
  double upper_bound = 1.0;
  double theta = 0.0;
  double eps = 0.0;
  SchedulePairMeta meta;
  bool analytic = true;
  int horizon = 0;
  bool valid = true;  // for Eta: value < 1
};

/// rho^2 = sup_n (s_{n+1}/s_n)^2 (s_n^2 + (1-s_n)^2 + 2 theta s_n (1-s_n)) over both schedules.
RateCertificate rho_hat(const Schedule& lambda, const Schedule& mu, double theta,
                        int horizon = 10000);

/// kappa = sup_n (s_{n+1}/s_n)(theta s_n + 2 eps + 1 - s_n) over both schedules.
RateCertificate kappa_hat(const Schedule& lambda, const Schedule& mu, double theta, double eps,
                          int horizon = 10000);

RateCertificate eta(const Schedule& lambda, const Schedule& mu, int horizon = 10000);

struct CqDelta {
  double delta = 0.0;
  double r = 0.0;
};

/// delta = eps (1 - rho) / (1 - rho + 2 a0 (1 + a0)), r = 2 delta a0 (1 + a0) / (1 - rho).
CqDelta cq_delta(double eps_slack, double rho, double alpha0);

struct RegularityBall {
  double start_radius = 0.0;
  double coefficient = 0.0;            // bound(n) = coefficient * kappa^n
  double kappa = 0.0;
  double unrelaxed_coefficient = 0.0;  // bound(n) = this * kappa^(2n) when alpha0 = 1
  double bound(long n) const;
  double unrelaxed_bound(long n) const;
};

RegularityBall regularity_ball(double delta, double kappa, double alpha0);

/// 2 a0 (1 + a0) / (1 - eta) * max{dA, dB}.
double vanishing_limit_bound(double alpha0, double eta, double dA, double dB);

}  // namespace marp
