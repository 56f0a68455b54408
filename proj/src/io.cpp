#include "marp/io.hpp"

#include "marp/sawtooth.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace marp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ptr + "/" + key, "missing required field");
  return *it;
}

double number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  return j.get<double>();
}

long integer(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  return j.get<long>();
}

std::string text(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  return j.get<std::string>();
}

// Bound with null meaning unbounded in the given direction.
double bound(const Json& j, const std::string& ptr, double if_null) {
  if (j.is_null()) return if_null;
  return number(j, ptr);
}

Json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

template <class F>
auto wrap(const std::string& ptr, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
}

}  // namespace

Point point_from_json(const Json& j, const std::string& ptr) {
  if (j.is_number()) {
    Point p(1);
    p[0] = j.get<double>();
    return p;
  }
  if (!j.is_array() || j.empty()) throw ConfigError(ptr, "expected a nonempty array of numbers");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    p[static_cast<Eigen::Index>(i)] = number(j[i], ptr + "/" + std::to_string(i));
  }
  return p;
}

Json point_to_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p[i]);
  return out;
}

ClosedSet set_from_json(const Json& j, const std::string& ptr) {
  const std::string type = text(field(j, ptr, "type"), ptr + "/type");
  return wrap(ptr, [&]() -> ClosedSet {
    if (type == "finite") {
      const Json& pts = field(j, ptr, "points");
      if (!pts.is_array()) throw ConfigError(ptr + "/points", "expected an array");
      std::vector<Point> v;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        v.push_back(point_from_json(pts[i], ptr + "/points/" + std::to_string(i)));
      }
      return ClosedSet::finite(std::move(v));
    }
    if (type == "affine") {
      const Point base = point_from_json(field(j, ptr, "base"), ptr + "/base");
      Matrix basis(base.size(), 0);
      if (j.contains("basis")) {
        const Json& b = j["basis"];
        if (!b.is_array()) throw ConfigError(ptr + "/basis", "expected an array of vectors");
        basis.resize(base.size(), static_cast<Eigen::Index>(b.size()));
        for (std::size_t i = 0; i < b.size(); ++i) {
          const std::string p = ptr + "/basis/" + std::to_string(i);
          const Point col = point_from_json(b[i], p);
          if (col.size() != base.size()) throw ConfigError(p, "dimension mismatch");
          basis.col(static_cast<Eigen::Index>(i)) = col;
        }
      }
      return ClosedSet::affine(base, basis);
    }
    if (type == "halfspace") {
      return ClosedSet::half_space(point_from_json(field(j, ptr, "normal"), ptr + "/normal"),
                                   number(field(j, ptr, "offset"), ptr + "/offset"));
    }
    if (type == "box") {
      const Json& lo = field(j, ptr, "lower");
      const Json& hi = field(j, ptr, "upper");
      if (!lo.is_array() || !hi.is_array() || lo.size() != hi.size() || lo.empty()) {
        throw ConfigError(ptr, "lower and upper must be arrays of equal positive length");
      }
      const double inf = std::numeric_limits<double>::infinity();
      Point l(static_cast<Eigen::Index>(lo.size())), u(static_cast<Eigen::Index>(hi.size()));
      for (std::size_t i = 0; i < lo.size(); ++i) {
        l[static_cast<Eigen::Index>(i)] = bound(lo[i], ptr + "/lower/" + std::to_string(i), -inf);
        u[static_cast<Eigen::Index>(i)] = bound(hi[i], ptr + "/upper/" + std::to_string(i), inf);
      }
      return ClosedSet::box(l, u);
    }
    if (type == "ball") {
      return ClosedSet::ball(point_from_json(field(j, ptr, "center"), ptr + "/center"),
                             number(field(j, ptr, "radius"), ptr + "/radius"));
    }
    if (type == "transformed") {
      const ClosedSet inner = set_from_json(field(j, ptr, "inner"), ptr + "/inner");
      const Json& m = field(j, ptr, "matrix");
      const auto d = static_cast<Eigen::Index>(inner.dimension());
      if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != d) {
        throw ConfigError(ptr + "/matrix", "expected " + std::to_string(d) + " rows");
      }
      Matrix q(d, d);
      for (Eigen::Index r = 0; r < d; ++r) {
        const std::string p = ptr + "/matrix/" + std::to_string(r);
        const Point row = point_from_json(m[static_cast<std::size_t>(r)], p);
        if (row.size() != d) throw ConfigError(p, "row length mismatch");
        q.row(r) = row.transpose();
      }
      Point t = Point::Zero(d);
      if (j.contains("translation")) t = point_from_json(j["translation"], ptr + "/translation");
      return ClosedSet::transformed(inner, q, t);
    }
    if (type == "sawtooth") {
      const long k = j.contains("k_max") ? integer(j["k_max"], ptr + "/k_max") : 60;
      return ClosedSet::sawtooth(static_cast<int>(k));
    }
    if (type == "sawtooth_reflected") {
      const long k = j.contains("k_max") ? integer(j["k_max"], ptr + "/k_max") : 60;
      return sawtooth::reflected_companion(static_cast<int>(k));
    }
    throw ConfigError(ptr + "/type", "unknown set type '" + type + "'");
  });
}

Json set_to_json(const ClosedSet& s) {
  return std::visit(
      overloaded{
          [](const FiniteSet& f) {
            Json pts = Json::array();
            for (const auto& p : f.points) pts.push_back(point_to_json(p));
            return Json{{"type", "finite"}, {"points", pts}};
          },
          [](const AffineSubspace& a) {
            Json basis = Json::array();
            for (Eigen::Index i = 0; i < a.basis.cols(); ++i) {
              basis.push_back(point_to_json(a.basis.col(i)));
            }
            return Json{{"type", "affine"}, {"base", point_to_json(a.base)}, {"basis", basis}};
          },
          [](const HalfSpace& h) {
            return Json{{"type", "halfspace"},
                        {"normal", point_to_json(h.normal)},
                        {"offset", h.offset}};
          },
          [](const Box& b) {
            Json lo = Json::array(), hi = Json::array();
            for (Eigen::Index i = 0; i < b.lower.size(); ++i) {
              lo.push_back(bound_to_json(b.lower[i]));
              hi.push_back(bound_to_json(b.upper[i]));
            }
            return Json{{"type", "box"}, {"lower", lo}, {"upper", hi}};
          },
          [](const Ball& b) {
            return Json{{"type", "ball"}, {"center", point_to_json(b.center)}, {"radius", b.radius}};
          },
          [](const Transformed& t) {
            Json rows = Json::array();
            for (Eigen::Index r = 0; r < t.q.rows(); ++r) {
              rows.push_back(point_to_json(t.q.row(r).transpose()));
            }
            return Json{{"type", "transformed"},
                        {"inner", set_to_json(*t.inner)},
                        {"matrix", rows},
                        {"translation", point_to_json(t.t)}};
          },
          [](const Sawtooth2D& s) { return Json{{"type", "sawtooth"}, {"k_max", s.k_max}}; },
      },
      s.variant());
}

Schedule schedule_from_json(const Json& j, const std::string& ptr) {
  if (j.is_string()) {
    return wrap(ptr, [&] { return Schedule::parse(j.get<std::string>()); });
  }
  const std::string type = text(field(j, ptr, "type"), ptr + "/type");
  auto num = [&](const char* key) { return number(field(j, ptr, key), ptr + "/" + key); };
  return wrap(ptr, [&]() -> Schedule {
    if (type == "constant") return Schedule::constant(num("value"));
    if (type == "geometric") return Schedule::geometric(num("initial"), num("ratio"));
    if (type == "monotone") return Schedule::monotone(num("initial"), num("limit"), num("decay"));
    if (type == "dyadic_sqrt") return Schedule::dyadic_sqrt(num("delta"));
    if (type == "dyadic_ratio") return Schedule::dyadic_ratio();
    if (type == "harmonic") return Schedule::harmonic(num("c"));
    if (type == "explicit") {
      const Json& vals = field(j, ptr, "values");
      if (!vals.is_array()) throw ConfigError(ptr + "/values", "expected an array");
      std::vector<double> v;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        v.push_back(number(vals[i], ptr + "/values/" + std::to_string(i)));
      }
      const std::string tail = j.contains("tail") ? text(j["tail"], ptr + "/tail") : "none";
      if (tail == "none") return Schedule::explicit_list(v);
      if (tail == "constant") return Schedule::explicit_list(v, TailRule::Constant);
      if (tail == "geometric") {
        return Schedule::explicit_list(v, TailRule::Geometric, num("tail_ratio"));
      }
      throw ConfigError(ptr + "/tail", "unknown tail rule '" + tail + "'");
    }
    throw ConfigError(ptr + "/type", "unknown schedule type '" + type + "'");
  });
}

Json schedule_to_json(const Schedule& s) {
  return std::visit(
      overloaded{
          [](const ConstantSchedule& c) { return Json{{"type", "constant"}, {"value", c.value}}; },
          [](const GeometricSchedule& g) {
            return Json{{"type", "geometric"}, {"initial", g.initial}, {"ratio", g.ratio}};
          },
          [](const MonotoneSchedule& m) {
            return Json{{"type", "monotone"},
                        {"initial", m.initial},
                        {"limit", m.limit},
                        {"decay", m.decay}};
          },
          [](const DyadicSqrtSchedule& d) {
            return Json{{"type", "dyadic_sqrt"}, {"delta", d.delta}};
          },
          [](const DyadicRatioSchedule&) { return Json{{"type", "dyadic_ratio"}}; },
          [](const HarmonicSchedule& h) { return Json{{"type", "harmonic"}, {"c", h.c}}; },
          [](const ExplicitSchedule& e) {
            Json out{{"type", "explicit"}, {"values", e.values}};
            switch (e.tail) {
              case TailRule::None:
                out["tail"] = "none";
                break;
              case TailRule::Constant:
                out["tail"] = "constant";
                break;
              case TailRule::Geometric:
                out["tail"] = "geometric";
                out["tail_ratio"] = e.tail_ratio;
                break;
            }
            return out;
          },
      },
      s.variant());
}

TiePolicy parse_tie_policy(const std::string& s) {
  if (s == "lexmin") return TiePolicy::LexMin;
  if (s == "nearest_to_previous") return TiePolicy::NearestToPrevious;
  if (s == "all") return TiePolicy::All;
  throw std::invalid_argument("unknown tie policy '" + s + "'");
}

const char* to_string(TiePolicy p) {
  switch (p) {
    case TiePolicy::LexMin:
      return "lexmin";
    case TiePolicy::All:
      return "all";
    case TiePolicy::NearestToPrevious:
      return "nearest_to_previous";
  }
  return "unknown";
}

MarpConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("", "expected a JSON object");
  static const char* known[] = {"dimension", "setA",      "setB",         "lambda",
                                "mu",        "start",     "tie_policy",   "max_iter",
                                "gap_tol",   "record_every", "seed",      "cycle_detect"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("/" + it.key(), "unknown field");
  }
  MarpConfig cfg;
  cfg.set_a = std::make_shared<const ClosedSet>(set_from_json(field(j, "", "setA"), "/setA"));
  cfg.set_b = std::make_shared<const ClosedSet>(set_from_json(field(j, "", "setB"), "/setB"));
  cfg.lambda = schedule_from_json(field(j, "", "lambda"), "/lambda");
  cfg.mu = schedule_from_json(field(j, "", "mu"), "/mu");
  cfg.start = point_from_json(field(j, "", "start"), "/start");
  if (j.contains("dimension")) {
    const long d = integer(j["dimension"], "/dimension");
    if (d < 1) throw ConfigError("/dimension", "must be >= 1");
    if (cfg.set_a->dimension() != d) throw ConfigError("/setA", "dimension mismatch");
    if (cfg.set_b->dimension() != d) throw ConfigError("/setB", "dimension mismatch");
    if (cfg.start.size() != d) throw ConfigError("/start", "dimension mismatch");
  }
  if (cfg.set_b->dimension() != cfg.set_a->dimension()) {
    throw ConfigError("/setB", "dimension differs from setA");
  }
  if (cfg.start.size() != cfg.set_a->dimension()) {
    throw ConfigError("/start", "dimension differs from the sets");
  }
  if (j.contains("tie_policy")) {
    const std::string s = text(j["tie_policy"], "/tie_policy");
    cfg.tie_policy = wrap("/tie_policy", [&] { return parse_tie_policy(s); });
    if (cfg.tie_policy == TiePolicy::All) {
      throw ConfigError("/tie_policy", "'all' cannot drive an iteration");
    }
  }
  if (j.contains("max_iter")) {
    cfg.max_iter = integer(j["max_iter"], "/max_iter");
    if (cfg.max_iter < 1) throw ConfigError("/max_iter", "must be >= 1");
  }
  if (j.contains("gap_tol")) {
    cfg.gap_tol = number(j["gap_tol"], "/gap_tol");
    if (!(cfg.gap_tol > 0.0)) throw ConfigError("/gap_tol", "must be > 0");
  }
  if (j.contains("record_every")) {
    cfg.record_every = integer(j["record_every"], "/record_every");
    if (cfg.record_every < 1) throw ConfigError("/record_every", "must be >= 1");
  }
  if (j.contains("cycle_detect")) {
    if (!j["cycle_detect"].is_boolean()) throw ConfigError("/cycle_detect", "expected a boolean");
    cfg.cycle_detect = j["cycle_detect"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw ConfigError("/seed", "expected a nonnegative integer");
    }
    const long long s = j["seed"].get<long long>();
    if (s < 0) throw ConfigError("/seed", "expected a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  return cfg;
}

Json config_to_json(const MarpConfig& cfg) {
  return Json{{"dimension", cfg.set_a->dimension()},
              {"setA", set_to_json(*cfg.set_a)},
              {"setB", set_to_json(*cfg.set_b)},
              {"lambda", schedule_to_json(cfg.lambda)},
              {"mu", schedule_to_json(cfg.mu)},
              {"start", point_to_json(cfg.start)},
              {"tie_policy", to_string(cfg.tie_policy)},
              {"max_iter", cfg.max_iter},
              {"gap_tol", cfg.gap_tol},
              {"record_every", cfg.record_every},
              {"cycle_detect", cfg.cycle_detect},
              {"seed", cfg.seed}};
}

MarpConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

Json summary_json(const Trajectory& t, int window) {
  Json out{{"status", to_string(t.status)}, {"iterations", t.iterations}};
  out["limit"] = t.status == Status::Converged ? point_to_json(t.limit) : Json(nullptr);
  const RateEstimate r = empirical_rate(t, window);
  if (r.exact_convergence) {
    out["empirical_rate"] = nullptr;
    out["exact_convergence"] = true;
  } else {
    out["empirical_rate"] = r.rate;
    out["fit_quality"] = r.fit_quality;
    out["exact_convergence"] = false;
  }
  if (t.status == Status::Cycle) {
    out["period"] = t.period;
    Json w = Json::array();
    for (const auto& p : t.witness) w.push_back(point_to_json(p));
    out["witness"] = w;
  }
  return out;
}

Json certificate_json(const RateCertificate& c) {
  return Json{{"kind", to_string(c.kind)},
              {"value", c.value},
              {"upper_bound", c.upper_bound},
              {"inputs",
               {{"theta", c.theta},
                {"eps", c.eps},
                {"alpha0", c.meta.alpha0},
                {"alpha_inf", c.meta.alpha_inf},
                {"sup_ratio", c.meta.sup_ratio}}},
              {"exact", c.analytic},
              {"horizon", c.horizon},
              {"valid", c.valid}};
}

Json cq_report_json(const CQReport& r) {
  Json grid = Json::array();
  for (const auto& [d, th] : r.grid) grid.push_back({{"delta", d}, {"theta", th}});
  Json out{{"theta_delta", r.theta},
           {"delta", r.delta},
           {"method", to_string(r.method)},
           {"witness_u", point_to_json(r.witness_u)},
           {"witness_v", point_to_json(r.witness_v)},
           {"grid", grid}};
  if (r.method == CqMethod::Sampled) {
    out["samples"] = r.samples;
    out["seed"] = r.seed;
  }
  return out;
}

Json regularity_json(const RegularityReport& r) {
  Json out{{"eps_lower", r.eps_lower}, {"pairs_checked", r.pairs_checked}};
  if (r.has_witness) {
    out["witness"] = {{"y", point_to_json(r.y)}, {"b", point_to_json(r.b)}, {"u", point_to_json(r.u)}};
  }
  return out;
}

}  // namespace marp
