#include "marp/commands.hpp"

#include "detail.hpp"
#include "marp/catalog.hpp"
#include "marp/sawtooth.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <thread>

namespace marp {

namespace {

SetPtr share(ClosedSet s) { return std::make_shared<const ClosedSet>(std::move(s)); }

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

ClosedSet line_through_origin(double angle) {
  Matrix basis(2, 1);
  basis << std::cos(angle), std::sin(angle);
  return ClosedSet::affine(Point::Zero(2), basis);
}

struct Scenario {
  SetPtr a, b;
  Restriction at = Restriction::whole();
  Restriction bt = Restriction::whole();
  Point center;
  bool sawtooth = false;
};

Scenario make_scenario(const std::string& name) {
  Scenario s;
  if (name == "sawtooth") {
    s.a = share(ClosedSet::sawtooth(60));
    s.b = share(sawtooth::reflected_companion(60));
    s.at = Restriction::boundary(s.a);
    s.bt = Restriction::boundary(s.b);
    s.center = Point::Zero(2);
    s.sawtooth = true;
    return s;
  }
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (kind == "two-lines") {
    double angle = 0.0;
    try {
      std::size_t used = 0;
      angle = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("two-lines needs an angle in radians, e.g. two-lines:1.0472");
    }
    s.a = share(line_through_origin(0.0));
    s.b = share(line_through_origin(angle));
    s.center = Point::Zero(2);
    return s;
  }
  if (kind == "finite-sets") {
    if (arg.empty()) throw std::invalid_argument("finite-sets needs a file, e.g. finite-sets:sets.json");
    const Json j = read_json(arg);
    if (!j.is_object()) throw ConfigError("", "expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "setA" && it.key() != "setB" && it.key() != "center") {
        throw ConfigError("/" + it.key(), "unknown field");
      }
    }
    for (const char* k : {"setA", "setB", "center"}) {
      if (!j.contains(k)) throw ConfigError(std::string("/") + k, "missing required field");
    }
    s.a = share(set_from_json(j["setA"], "/setA"));
    s.b = share(set_from_json(j["setB"], "/setB"));
    if (!s.a->as<FiniteSet>()) throw ConfigError("/setA", "expected a finite set");
    if (!s.b->as<FiniteSet>()) throw ConfigError("/setB", "expected a finite set");
    s.center = point_from_json(j["center"], "/center");
    return s;
  }
  if (kind == "config") {
    if (arg.empty()) throw std::invalid_argument("config needs a file, e.g. config:run.json");
    const MarpConfig cfg = load_config(arg);
    s.a = cfg.set_a;
    s.b = cfg.set_b;
    s.center = cfg.start;
    return s;
  }
  // A bare path is read as an experiment configuration.
  if (std::filesystem::exists(name)) return make_scenario("config:" + name);
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (sawtooth, two-lines:ANGLE, finite-sets:FILE or a config file)");
}

std::string format_optional(const std::optional<double>& v) {
  return v ? detail::format_double(*v) : std::string();
}

}  // namespace

int exit_code(Status s) {
  switch (s) {
    case Status::Converged:
      return kExitConverged;
    case Status::Cycle:
      return kExitCycle;
    case Status::MaxIter:
      return kExitMaxIter;
  }
  return kExitError;
}

void apply_seed_override(MarpConfig& cfg) {
  const char* env = std::getenv("MARP_SEED");
  if (env == nullptr || *env == '\0') return;
  const std::string s(env);
  std::uint64_t value = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("/seed", "MARP_SEED is not a nonnegative integer");
  }
  cfg.seed = value;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out,
            std::ostream& err) {
  MarpConfig cfg;
  try {
    cfg = load_config(config_path);
    apply_seed_override(cfg);
  } catch (const ConfigError& e) {
    err << "config error at '" << e.pointer() << "': " << e.what() << '\n';
    return kExitError;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream csv(std::filesystem::path(out_dir) / "trajectory.csv");
  std::ofstream summary(std::filesystem::path(out_dir) / "summary.json");
  if (!csv || !summary) {
    err << "cannot write to '" << out_dir << "'\n";
    return kExitError;
  }
  Trajectory t;
  try {
    t = run(cfg);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitError;
  }
  write_csv(t, csv);
  const Json s = summary_json(t);
  summary << s.dump(2) << '\n';
  out << s.dump(2) << '\n';
  return exit_code(t.status);
}

int cmd_examples(const std::string& id, std::ostream& out, std::ostream& err) {
  std::vector<const ExampleSpec*> chosen;
  if (id.empty()) {
    for (const auto& e : example_catalog()) chosen.push_back(&e);
  } else {
    try {
      chosen.push_back(&find_example(id));
    } catch (const std::invalid_argument& e) {
      err << e.what() << "; known ids:";
      for (const auto& k : example_catalog()) err << ' ' << k.id;
      err << '\n';
      return kExitError;
    }
  }
  bool all = true;
  for (const ExampleSpec* spec : chosen) {
    const ExampleResult r = spec->run();
    out << (r.pass() ? "PASS " : "FAIL ") << r.id << "  " << r.title << '\n';
    for (const auto& c : r.checks) {
      out << "  [" << (c.pass ? "ok" : "xx") << "] " << std::left << std::setw(48) << c.name
          << " expected " << detail::format_double(c.expected) << " got "
          << detail::format_double(c.actual);
      if (c.tol > 0.0) out << " tol " << detail::format_double(c.tol);
      out << " (" << c.basis << ")\n";
    }
    all = all && r.pass();
  }
  return all ? 0 : kExitError;
}

Json rates_json(const RatesOptions& opt) {
  const Schedule lambda = Schedule::parse(opt.lambda);
  const Schedule mu = Schedule::parse(opt.mu);
  Json out;
  const RateCertificate rho = rho_hat(lambda, mu, opt.theta, opt.horizon);
  out["rho_hat"] = certificate_json(rho);
  out["rho_hat"]["value_squared"] = rho.value * rho.value;

  std::optional<RateCertificate> kappa;
  if (opt.eps) {
    try {
      kappa = kappa_hat(lambda, mu, opt.theta, *opt.eps, opt.horizon);
      out["kappa_hat"] = certificate_json(*kappa);
      out["kappa_hat"]["value_squared"] = kappa->value * kappa->value;
    } catch (const RegularityMarginError& e) {
      out["kappa_hat"] = {{"error", e.what()}};
    }
  } else {
    out["kappa_hat"] = {{"error", "no eps given"}};
  }

  const RateCertificate et = eta(lambda, mu, opt.horizon);
  out["eta"] = certificate_json(et);

  Json radii = Json::object();
  const double a0 = rho.meta.alpha0;
  if (rho.value < 1.0) {
    const CqDelta d = cq_delta(opt.radius, rho.value, a0);
    radii["cq"] = {{"radius", opt.radius}, {"delta", d.delta}, {"r", d.r}};
  }
  if (kappa && kappa->value < 1.0 && kappa->value > 0.0) {
    const RegularityBall b = regularity_ball(opt.radius, kappa->value, a0);
    radii["regularity"] = {{"radius", opt.radius},
                           {"start_radius", b.start_radius},
                           {"coefficient", b.coefficient},
                           {"unrelaxed_coefficient", b.unrelaxed_coefficient}};
  }
  if (et.valid) {
    radii["vanishing"] = {{"limit_bound_per_unit_distance",
                           vanishing_limit_bound(a0, et.value, 1.0, 1.0)}};
  }
  out["radii"] = radii;
  return out;
}

int cmd_rates(const RatesOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    out << rates_json(opt).dump(2) << '\n';
  } catch (const std::exception& e) {
    err << "rates: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}

Json cq_json(const CqOptions& opt) {
  const Scenario s = make_scenario(opt.scenario);
  const CqMethod method = parse_cq_method(opt.method);
  const SampleOptions so{opt.samples, opt.seed};
  Json out = cq_report_json(cq_number(*s.a, s.at, *s.b, s.bt, s.center, opt.delta, method, so));
  out["scenario"] = opt.scenario;
  if (s.sawtooth || opt.probe_regularity) {
    out["regularity"] =
        regularity_json(regularity_probe(*s.a, s.bt, s.center, opt.delta, so));
  }
  return out;
}

int cmd_cq(const CqOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    out << cq_json(opt).dump(2) << '\n';
  } catch (const ConfigError& e) {
    err << "config error at '" << e.pointer() << "': " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "cq: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}

SweepParam parse_sweep_param(const std::string& s) {
  if (s == "lambda-const") return SweepParam::LambdaConst;
  if (s == "mu-const") return SweepParam::MuConst;
  if (s == "eta") return SweepParam::Eta;
  if (s == "start-coordinate") return SweepParam::StartCoordinate;
  throw std::invalid_argument("unknown sweep parameter '" + s +
                              "' (lambda-const, mu-const, eta, start-coordinate)");
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::LambdaConst:
      return "lambda-const";
    case SweepParam::MuConst:
      return "mu-const";
    case SweepParam::Eta:
      return "eta";
    case SweepParam::StartCoordinate:
      return "start-coordinate";
  }
  return "unknown";
}

MarpConfig sweep_config(const MarpConfig& base, SweepParam p, double value, int coordinate) {
  MarpConfig cfg = base;
  switch (p) {
    case SweepParam::LambdaConst:
      cfg.lambda = Schedule::constant(value);
      break;
    case SweepParam::MuConst:
      cfg.mu = Schedule::constant(value);
      break;
    case SweepParam::Eta:
      cfg.lambda = Schedule::geometric(base.lambda.initial(), value);
      cfg.mu = Schedule::geometric(base.mu.initial(), value);
      break;
    case SweepParam::StartCoordinate:
      if (coordinate < 0 || coordinate >= cfg.start.size()) {
        throw std::invalid_argument("start coordinate index out of range");
      }
      cfg.start[coordinate] = value;
      break;
  }
  validate(cfg);
  return cfg;
}

std::vector<double> sweep_grid(double from, double to, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i) {
    grid.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return grid;
}

std::vector<SweepRow> sweep(const MarpConfig& base, SweepParam p, const std::vector<double>& grid,
                            int coordinate, int threads) {
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  std::vector<MarpConfig> configs;
  for (double v : sorted) configs.push_back(sweep_config(base, p, v, coordinate));

  auto one = [](const MarpConfig& cfg, double v) {
    const Trajectory t = run(cfg);
    SweepRow row;
    row.value = v;
    row.status = t.status;
    row.iterations = t.iterations;
    const RateEstimate r = empirical_rate(t, 30);
    if (!r.exact_convergence) row.rate = r.rate;
    if (t.status == Status::Converged) row.limit = t.limit;
    return row;
  };

  const std::size_t workers =
      threads > 0 ? static_cast<std::size_t>(threads)
                  : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(sorted.size());
  for (std::size_t begin = 0; begin < sorted.size(); begin += workers) {
    const std::size_t end = std::min(sorted.size(), begin + workers);
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, one, std::cref(configs[i]), sorted[i]));
    }
    for (std::size_t i = begin; i < end; ++i) rows[i] = batch[i - begin].get();
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, SweepParam p, std::ostream& out) {
  Eigen::Index d = 0;
  for (const auto& r : rows) d = std::max(d, r.limit.size());
  out << to_string(p) << ",status,iterations,empirical_rate";
  for (Eigen::Index i = 0; i < d; ++i) out << ",limit[" << i << ']';
  out << '\n';
  for (const auto& r : rows) {
    out << detail::format_double(r.value) << ',' << to_string(r.status) << ',' << r.iterations
        << ',' << format_optional(r.rate);
    for (Eigen::Index i = 0; i < d; ++i) {
      out << ',';
      if (i < r.limit.size()) out << detail::format_double(r.limit[i]);
    }
    out << '\n';
  }
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  MarpConfig base;
  try {
    base = load_config(opt.config_path);
    apply_seed_override(base);
  } catch (const ConfigError& e) {
    err << "config error at '" << e.pointer() << "': " << e.what() << '\n';
    return kExitError;
  }
  std::vector<SweepRow> rows;
  SweepParam p{};
  try {
    p = parse_sweep_param(opt.param);
    rows = sweep(base, p, sweep_grid(opt.from, opt.to, opt.steps), opt.coordinate, opt.threads);
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << '\n';
    return kExitError;
  }
  std::ofstream csv(opt.out_path);
  if (!csv) {
    err << "cannot write '" << opt.out_path << "'\n";
    return kExitError;
  }
  write_sweep_csv(rows, p, csv);
  out << "wrote " << rows.size() << " rows to " << opt.out_path << '\n';
  return 0;
}

}  // namespace marp
