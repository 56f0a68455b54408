#pragma once

#include <string>
#include <variant>
#include <vector>

namespace marp {

struct ConstantSchedule {
  double value = 1.0;
};

/// lambda_n = initial * ratio^n.
struct GeometricSchedule {
  double initial = 1.0;
  double ratio = 0.5;
};

/// lambda_n = limit + (initial - limit) * decay^n.
struct MonotoneSchedule {
  double initial = 1.0;
  double limit = 0.5;
  double decay = 0.5;
};

/// lambda_n = 1 - sqrt((delta + 2^-(n+1)) / (delta + 2^-n)).
struct DyadicSqrtSchedule {
  double delta = 1.0;
};

/// lambda_n = 1 - (1 + 2^-(n+1)) / (1 + 2^-n).
struct DyadicRatioSchedule {};

/// lambda_n = c / (n + 2).
struct HarmonicSchedule {
  double c = 1.0;
};

enum class TailRule { None, Constant, Geometric };

/// A finite list continued by a tail rule: Constant repeats the last value,
/// Geometric multiplies it by `tail_ratio` per step.
struct ExplicitSchedule {
  std::vector<double> values;
  TailRule tail = TailRule::None;
  double tail_ratio = 0.5;
};

/// Supremum of successive ratios lambda_{n+1} / lambda_n.
struct RatioSup {
  double value = 1.0;
  bool analytic = true;
  int horizon = 0;  // meaningful when !analytic
};

class Schedule {
 public:
  using Variant = std::variant<ConstantSchedule, GeometricSchedule, MonotoneSchedule,
                               DyadicSqrtSchedule, DyadicRatioSchedule, HarmonicSchedule,
                               ExplicitSchedule>;

  /// Constant 1 (unrelaxed projections).
  Schedule() : variant_(ConstantSchedule{1.0}) {}

  static Schedule constant(double value);
  static Schedule geometric(double initial, double ratio);
  static Schedule monotone(double initial, double limit, double decay);
  static Schedule dyadic_sqrt(double delta);
  static Schedule dyadic_ratio();
  static Schedule harmonic(double c);
  static Schedule explicit_list(std::vector<double> values, TailRule tail = TailRule::None,
                                double tail_ratio = 0.5);

  /// Parses the compact flag form, e.g. "const:0.5", "geom:0.5:0.9",
  /// "mono:1:0.5:0.8", "dsqrt:1", "dratio", "harm:1",
  /// "explicit:0.8,0.4,0.3:geom:0.5" or "explicit:0.8,0.4:const".
  static Schedule parse(const std::string& spec);
  std::string to_string() const;

  /// Throws std::out_of_range for an exhausted explicit list and
  /// std::underflow_error when the closed form rounds to zero.
  double value(long n) const;

  double initial() const { return value(0); }
  double limit() const;
  bool monotone() const;
  RatioSup sup_ratio(int horizon = 10000) const;

  /// Last defined index for an explicit list without tail, else -1.
  long last_index() const;

  const Variant& variant() const { return variant_; }
  bool operator==(const Schedule& other) const { return to_string() == other.to_string(); }

 private:
  explicit Schedule(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

struct SchedulePairMeta {
  double alpha0 = 1.0;
  double alpha_inf = 1.0;
  double sup_ratio = 1.0;
  bool analytic = true;
  int horizon = 0;
};

SchedulePairMeta pair_meta(const Schedule& lambda, const Schedule& mu, int horizon = 10000);

}  // namespace marp
