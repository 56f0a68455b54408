#include "marp/catalog.hpp"
#include "marp/commands.hpp"
#include "marp/io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace marp;

namespace {

Matrix stack(const std::vector<Step>& steps, Point Step::*field) {
  if (steps.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(steps.size()), (steps.front().*field).size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = (steps[i].*field).transpose();
  }
  return m;
}

Eigen::VectorXd column(const std::vector<Step>& steps, double Step::*field) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(steps.size()));
  for (std::size_t i = 0; i < steps.size(); ++i) v[static_cast<Eigen::Index>(i)] = steps[i].*field;
  return v;
}

py::tuple run_config(const std::string& config) {
  MarpConfig cfg = config_from_json(Json::parse(config));
  apply_seed_override(cfg);
  Trajectory t;
  {
    py::gil_scoped_release release;
    t = run(cfg);
  }
  std::vector<long> n;
  for (const auto& s : t.steps) n.push_back(s.n);
  py::dict arrays;
  arrays["n"] = n;
  arrays["a"] = stack(t.steps, &Step::a);
  arrays["x"] = stack(t.steps, &Step::x);
  arrays["b"] = stack(t.steps, &Step::b);
  arrays["y"] = stack(t.steps, &Step::y);
  arrays["gap_yx"] = column(t.steps, &Step::g);
  arrays["gap_xy_prev"] = column(t.steps, &Step::h);
  return py::make_tuple(summary_json(t).dump(), arrays);
}

py::tuple project_point(const std::string& set, const Point& q) {
  const ClosedSet s = set_from_json(Json::parse(set));
  const ProjectionResult r = project(s, q);
  return py::make_tuple(r.nearest, r.distance);
}

std::string rates(double theta, std::optional<double> eps, const std::string& lambda,
                  const std::string& mu, int horizon, double radius) {
  RatesOptions o;
  o.theta = theta;
  o.eps = eps;
  o.lambda = lambda;
  o.mu = mu;
  o.horizon = horizon;
  o.radius = radius;
  return rates_json(o).dump();
}

std::string cq(const std::string& scenario, double delta, const std::string& method, int samples,
               std::uint64_t seed, bool probe_regularity) {
  CqOptions o{scenario, delta, method, samples, seed, probe_regularity};
  py::gil_scoped_release release;
  return cq_json(o).dump();
}

std::string examples(const std::string& id) {
  Json out = Json::array();
  for (const auto& spec : example_catalog()) {
    if (!id.empty() && spec.id != id) continue;
    const ExampleResult r = spec.run();
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"expected", c.expected},
                        {"actual", c.actual},
                        {"tol", c.tol},
                        {"basis", c.basis},
                        {"pass", c.pass}});
    }
    out.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass()}, {"checks", checks}});
  }
  if (!id.empty() && out.empty()) find_example(id);
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Alternating relaxed projections";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  m.def("run_config", &run_config, py::arg("config"));
  m.def("project", &project_point, py::arg("set"), py::arg("point"));
  m.def("rates", &rates, py::arg("theta"), py::arg("eps") = py::none(),
        py::arg("lambda_") = "const:1", py::arg("mu") = "const:1", py::arg("horizon") = 10000,
        py::arg("radius") = 1.0);
  m.def("cq", &cq, py::arg("scenario") = "sawtooth", py::arg("delta") = 0.5,
        py::arg("method") = "exact2d", py::arg("samples") = 20000, py::arg("seed") = 1,
        py::arg("probe_regularity") = false);
  m.def("examples", &examples, py::arg("id") = "");
}
