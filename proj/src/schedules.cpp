#include "marp/schedules.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace marp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_unit(double v) { return v > 0.0 && v <= 1.0; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_num(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

double checked(double v, long n) {
  if (v == 0.0) {
    throw std::underflow_error("schedule value underflows double precision at n = " +
                               std::to_string(n));
  }
  return v;
}

}  // namespace

Schedule Schedule::constant(double value) {
  require(in_unit(value), "constant schedule value must lie in (0, 1]");
  return Schedule(ConstantSchedule{value});
}

Schedule Schedule::geometric(double initial, double ratio) {
  require(in_unit(initial), "geometric initial value must lie in (0, 1]");
  require(ratio > 0.0 && ratio < 1.0, "geometric ratio must lie in (0, 1)");
  return Schedule(GeometricSchedule{initial, ratio});
}

Schedule Schedule::monotone(double initial, double limit, double decay) {
  require(in_unit(initial), "monotone initial value must lie in (0, 1]");
  require(limit >= 0.0 && limit <= initial, "monotone limit must lie in [0, initial]");
  require(decay >= 0.0 && decay < 1.0, "monotone decay must lie in [0, 1)");
  require(limit > 0.0 || decay > 0.0, "monotone schedule must stay positive");
  return Schedule(MonotoneSchedule{initial, limit, decay});
}

Schedule Schedule::dyadic_sqrt(double delta) {
  require(delta >= 0.0 && std::isfinite(delta), "dyadic_sqrt delta must be >= 0");
  return Schedule(DyadicSqrtSchedule{delta});
}

Schedule Schedule::dyadic_ratio() { return Schedule(DyadicRatioSchedule{}); }

Schedule Schedule::harmonic(double c) {
  require(in_unit(c), "harmonic constant must lie in (0, 1]");
  return Schedule(HarmonicSchedule{c});
}

Schedule Schedule::explicit_list(std::vector<double> values, TailRule tail,
                                 double tail_ratio) {
  require(!values.empty(), "explicit schedule needs at least one value");
  for (double v : values) require(in_unit(v), "explicit schedule values must lie in (0, 1]");
  if (tail == TailRule::Geometric) {
    require(tail_ratio > 0.0 && tail_ratio < 1.0, "explicit tail ratio must lie in (0, 1)");
  }
  return Schedule(ExplicitSchedule{std::move(values), tail, tail_ratio});
}

double Schedule::value(long n) const {
  if (n < 0) throw std::invalid_argument("schedule index must be >= 0");
  return std::visit(
      overloaded{
          [&](const ConstantSchedule& s) { return s.value; },
          [&](const GeometricSchedule& s) {
            return checked(s.initial * std::pow(s.ratio, static_cast<double>(n)), n);
          },
          [&](const MonotoneSchedule& s) {
            return checked(
                s.limit + (s.initial - s.limit) * std::pow(s.decay, static_cast<double>(n)),
                n);
          },
          [&](const DyadicSqrtSchedule& s) {
            // 1 - sqrt(r) = (1 - r) / (1 + sqrt(r)) avoids cancellation as r -> 1.
            const double p = std::ldexp(1.0, static_cast<int>(-std::min(n, 2000L)));
            const double q = std::ldexp(1.0, static_cast<int>(-std::min(n + 1, 2000L)));
            const double r = (s.delta + q) / (s.delta + p);
            return checked(q / (s.delta + p) / (1.0 + std::sqrt(r)), n);
          },
          [&](const DyadicRatioSchedule&) {
            const double p = std::ldexp(1.0, static_cast<int>(-std::min(n, 2000L)));
            const double q = std::ldexp(1.0, static_cast<int>(-std::min(n + 1, 2000L)));
            return checked(q / (1.0 + p), n);
          },
          [&](const HarmonicSchedule& s) { return s.c / (static_cast<double>(n) + 2.0); },
          [&](const ExplicitSchedule& s) {
            const long len = static_cast<long>(s.values.size());
            if (n < len) return s.values[static_cast<std::size_t>(n)];
            switch (s.tail) {
              case TailRule::Constant:
                return s.values.back();
              case TailRule::Geometric:
                return checked(
                    s.values.back() * std::pow(s.tail_ratio, static_cast<double>(n - len + 1)),
                    n);
              case TailRule::None:
                break;
            }
            throw std::out_of_range("explicit schedule exhausted at n = " + std::to_string(n));
          },
      },
      variant_);
}

double Schedule::limit() const {
  return std::visit(overloaded{
                        [](const ConstantSchedule& s) { return s.value; },
                        [](const GeometricSchedule&) { return 0.0; },
                        [](const MonotoneSchedule& s) { return s.limit; },
                        [](const DyadicSqrtSchedule&) { return 0.0; },
                        [](const DyadicRatioSchedule&) { return 0.0; },
                        [](const HarmonicSchedule&) { return 0.0; },
                        [](const ExplicitSchedule& s) {
                          return s.tail == TailRule::Geometric ? 0.0 : s.values.back();
                        },
                    },
                    variant_);
}

bool Schedule::monotone() const {
  if (const auto* e = std::get_if<ExplicitSchedule>(&variant_)) {
    for (std::size_t i = 1; i < e->values.size(); ++i) {
      if (e->values[i] > e->values[i - 1]) return false;
    }
    return true;
  }
  return true;
}

long Schedule::last_index() const {
  if (const auto* e = std::get_if<ExplicitSchedule>(&variant_)) {
    if (e->tail == TailRule::None) return static_cast<long>(e->values.size()) - 1;
  }
  return -1;
}

RatioSup Schedule::sup_ratio(int horizon) const {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  return std::visit(
      overloaded{
          [](const ConstantSchedule&) { return RatioSup{1.0, true, 0}; },
          [](const GeometricSchedule& s) { return RatioSup{s.ratio, true, 0}; },
          [](const MonotoneSchedule& s) {
            // Ratios increase toward 1 when the limit is positive.
            if (s.limit > 0.0 || s.initial == s.limit) return RatioSup{1.0, true, 0};
            return RatioSup{s.decay, true, 0};
          },
          [this](const DyadicSqrtSchedule&) {
            // Ratios decrease toward 1/2, so the first one is the largest.
            return RatioSup{value(1) / value(0), true, 0};
          },
          [](const DyadicRatioSchedule&) { return RatioSup{2.0 / 3.0, true, 0}; },
          [horizon](const HarmonicSchedule&) {
            const double h = static_cast<double>(horizon);
            return RatioSup{(h + 2.0) / (h + 3.0), false, horizon};
          },
          [](const ExplicitSchedule& s) {
            double best = 0.0;
            for (std::size_t i = 1; i < s.values.size(); ++i) {
              best = std::max(best, s.values[i] / s.values[i - 1]);
            }
            switch (s.tail) {
              case TailRule::Constant:
                best = std::max(best, 1.0);
                break;
              case TailRule::Geometric:
                best = std::max(best, s.tail_ratio);
                break;
              case TailRule::None:
                if (s.values.size() == 1) best = 1.0;
                break;
            }
            return RatioSup{best, true, 0};
          },
      },
      variant_);
}

std::string Schedule::to_string() const {
  using detail::format_double;
  return std::visit(
      overloaded{
          [](const ConstantSchedule& s) { return "const:" + format_double(s.value); },
          [](const GeometricSchedule& s) {
            return "geom:" + format_double(s.initial) + ":" + format_double(s.ratio);
          },
          [](const MonotoneSchedule& s) {
            return "mono:" + format_double(s.initial) + ":" + format_double(s.limit) + ":" +
                   format_double(s.decay);
          },
          [](const DyadicSqrtSchedule& s) { return "dsqrt:" + format_double(s.delta); },
          [](const DyadicRatioSchedule&) { return std::string("dratio"); },
          [](const HarmonicSchedule& s) { return "harm:" + format_double(s.c); },
          [](const ExplicitSchedule& s) {
            std::string out = "explicit:";
            for (std::size_t i = 0; i < s.values.size(); ++i) {
              if (i) out += ",";
              out += format_double(s.values[i]);
            }
            if (s.tail == TailRule::Constant) out += ":const";
            if (s.tail == TailRule::Geometric) out += ":geom:" + format_double(s.tail_ratio);
            return out;
          },
      },
      variant_);
}

Schedule Schedule::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty schedule spec");
  const std::string& kind = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) {
      throw std::invalid_argument("schedule '" + spec + "' expects " + std::to_string(n - 1) +
                                  " parameter(s)");
    }
  };
  if (kind == "const") {
    need(2);
    return constant(to_num(parts[1]));
  }
  if (kind == "geom") {
    need(3);
    return geometric(to_num(parts[1]), to_num(parts[2]));
  }
  if (kind == "mono") {
    need(4);
    return monotone(to_num(parts[1]), to_num(parts[2]), to_num(parts[3]));
  }
  if (kind == "dsqrt") {
    need(2);
    return dyadic_sqrt(to_num(parts[1]));
  }
  if (kind == "dratio") {
    need(1);
    return dyadic_ratio();
  }
  if (kind == "harm") {
    need(2);
    return harmonic(to_num(parts[1]));
  }
  if (kind == "explicit") {
    if (parts.size() < 2) throw std::invalid_argument("explicit schedule needs values");
    std::vector<double> values;
    for (const auto& v : split(parts[1], ',')) values.push_back(to_num(v));
    if (parts.size() == 2) return explicit_list(std::move(values));
    if (parts[2] == "const" && parts.size() == 3) {
      return explicit_list(std::move(values), TailRule::Constant);
    }
    if (parts[2] == "geom" && parts.size() == 4) {
      return explicit_list(std::move(values), TailRule::Geometric, to_num(parts[3]));
    }
    throw std::invalid_argument("bad explicit tail in '" + spec + "'");
  }
  throw std::invalid_argument("unknown schedule kind '" + kind + "'");
}

SchedulePairMeta pair_meta(const Schedule& lambda, const Schedule& mu, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  SchedulePairMeta m;
  m.alpha0 = std::max(lambda.initial(), mu.initial());
  m.alpha_inf = std::min(lambda.limit(), mu.limit());
  const RatioSup a = lambda.sup_ratio(horizon);
  const RatioSup b = mu.sup_ratio(horizon);
  m.sup_ratio = std::max(a.value, b.value);
  m.analytic = a.analytic && b.analytic;
  m.horizon = m.analytic ? 0 : horizon;
  return m;
}

}  // namespace marp
