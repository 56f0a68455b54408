#include "marp/catalog.hpp"
#include "marp/commands.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace marp;
using namespace marp::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("marp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const MarpConfig& cfg) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << config_to_json(cfg).dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(CmdRun, ExitCodesFollowStatus) {
  const fs::path dir = scratch("run");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(write_config(dir, two_point_config(0.5, 0.5)).string(), (dir / "a").string(),
                    out, err),
            0);
  const Json s = Json::parse(slurp(dir / "a" / "summary.json"));
  EXPECT_NEAR(s["limit"][0].get<double>(), -3.0, 1e-9);
  EXPECT_TRUE(fs::exists(dir / "a" / "trajectory.csv"));

  EXPECT_EQ(cmd_run(write_config(dir, two_point_config(1.0, 1.0)).string(), (dir / "b").string(),
                    out, err),
            2);
  EXPECT_EQ(Json::parse(slurp(dir / "b" / "summary.json"))["period"], 1);

  MarpConfig slow = two_point_config(0.5, 0.5);
  slow.max_iter = 3;
  EXPECT_EQ(cmd_run(write_config(dir, slow).string(), (dir / "c").string(), out, err), 3);
}

TEST(CmdRun, MalformedConfigReportsPointer) {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "bad.json") << R"({"setA": {"type": "finite", "points": [[1]]}, "x": 1})";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run((dir / "bad.json").string(), dir.string(), out, err), 1);
  EXPECT_NE(err.str().find("'/x'"), std::string::npos) << err.str();

  std::ofstream(dir / "broken.json") << "{";
  std::ostringstream err2;
  EXPECT_EQ(cmd_run((dir / "broken.json").string(), dir.string(), out, err2), 1);
  EXPECT_NE(err2.str().find("config error at ''"), std::string::npos);
}

TEST(CmdRun, OutputsAreByteIdenticalAcrossRuns) {
  const fs::path dir = scratch("det");
  const fs::path cfg = write_config(
      dir, sawtooth_pair_config(Schedule::geometric(0.9, 0.9), Schedule::geometric(0.9, 0.9),
                                pt({0.4, 0.3})));
  std::ostringstream out, err;
  cmd_run(cfg.string(), (dir / "1").string(), out, err);
  cmd_run(cfg.string(), (dir / "2").string(), out, err);
  EXPECT_EQ(slurp(dir / "1" / "trajectory.csv"), slurp(dir / "2" / "trajectory.csv"));
  EXPECT_EQ(slurp(dir / "1" / "summary.json"), slurp(dir / "2" / "summary.json"));
}

TEST(CmdRun, SeedOverride) {
  MarpConfig cfg = two_point_config(0.5, 0.5);
  ::setenv("MARP_SEED", "1234", 1);
  apply_seed_override(cfg);
  EXPECT_EQ(cfg.seed, 1234u);
  ::setenv("MARP_SEED", "nope", 1);
  EXPECT_THROW(apply_seed_override(cfg), ConfigError);
  ::unsetenv("MARP_SEED");
}

TEST(CmdExamples, SingleAndUnknown) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_examples("ex-1.1", out, err), 0);
  EXPECT_EQ(out.str().rfind("PASS ex-1.1", 0), 0u);
  EXPECT_EQ(cmd_examples("ex-9.9", out, err), 1);
  EXPECT_NE(err.str().find("unknown example id"), std::string::npos);
}

TEST(CmdExamples, CatalogPasses) {
  for (const auto& spec : example_catalog()) {
    const ExampleResult r = spec.run();
    for (const auto& c : r.checks) {
      EXPECT_TRUE(c.pass) << spec.id << ": " << c.name << " expected " << c.expected << " got "
                          << c.actual;
      EXPECT_FALSE(c.basis.empty());
    }
  }
}

TEST(CmdRates, CertificatesAndErrors) {
  RatesOptions o;
  o.lambda = o.mu = "const:0.5";
  Json j = rates_json(o);
  EXPECT_NEAR(j["rho_hat"]["value"].get<double>(), std::sqrt(0.5), 1e-15);
  EXPECT_TRUE(j["kappa_hat"].contains("error"));

  o = RatesOptions{};
  o.theta = 0.2;
  o.eps = 0.05;
  j = rates_json(o);
  EXPECT_NEAR(j["kappa_hat"]["value"].get<double>(), 0.3, 1e-15);
  EXPECT_NEAR(j["kappa_hat"]["value_squared"].get<double>(), 0.09, 1e-15);
  EXPECT_TRUE(j["radii"].contains("regularity"));

  o = RatesOptions{};
  o.lambda = "geom:0.5:0.9";
  o.mu = "geom:0.3:0.9";
  j = rates_json(o);
  EXPECT_DOUBLE_EQ(j["eta"]["value"].get<double>(), 0.9);

  o = RatesOptions{};
  o.theta = 0.5;
  o.eps = 0.4;
  j = rates_json(o);
  EXPECT_TRUE(j["kappa_hat"].contains("error"));
}

TEST(CmdCq, Scenarios) {
  CqOptions o;
  o.scenario = "two-lines:1.0472";
  EXPECT_NEAR(cq_json(o)["theta_delta"].get<double>(), 0.5, 1e-4);
  EXPECT_NEAR(cq_json(o)["theta_delta"].get<double>(), std::cos(1.0472), 1e-9);

  o = CqOptions{};
  o.scenario = "sawtooth";
  o.samples = 4000;
  const Json s = cq_json(o);
  EXPECT_NEAR(s["theta_delta"].get<double>(), 0.935414, 1e-6);
  EXPECT_GT(s["regularity"]["eps_lower"].get<double>(), 0.17);

  const fs::path dir = scratch("cq");
  std::ofstream(dir / "sets.json") << R"({
    "setA": {"type": "finite", "points": [[0, 0], [1, 0]]},
    "setB": {"type": "finite", "points": [[0, 0], [0, 1]]},
    "center": [0, 0]})";
  o = CqOptions{};
  o.scenario = "finite-sets:" + (dir / "sets.json").string();
  EXPECT_EQ(cq_json(o)["theta_delta"].get<double>(), 1.0);

  std::ostringstream out, err;
  o.scenario = "moebius";
  EXPECT_EQ(cmd_cq(o, out, err), 1);
  EXPECT_NE(err.str().find("unknown scenario"), std::string::npos);
}

TEST(CmdSweep, LambdaRegimesOnTwoPointSets) {
  const auto rows =
      sweep(two_point_config(0.5, 0.5), SweepParam::LambdaConst, sweep_grid(0.2, 0.9, 15));
  ASSERT_EQ(rows.size(), 15u);
  const double lo = (std::sqrt(5.0) - 1.0) / 4.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      EXPECT_LT(rows[i - 1].value, rows[i].value);
    }
    if (rows[i].value > lo && rows[i].value < 0.75) {
      ASSERT_EQ(rows[i].status, Status::Converged) << rows[i].value;
      EXPECT_NEAR(rows[i].limit[0], -3.0, 1e-9);
    }
  }
  const auto one = sweep(two_point_config(0.5, 0.5), SweepParam::LambdaConst, {1.0});
  EXPECT_EQ(one.front().status, Status::Cycle);
}

TEST(CmdSweep, TwoAxesRateIsOneMinusLambda) {
  MarpConfig base = two_axes_config(Schedule::constant(0.5), Schedule::constant(0.5), pt({1, 1}));
  base.gap_tol = 1e-13;
  for (double l : sweep_grid(0.2, 0.8, 7)) {
    MarpConfig cfg = sweep_config(base, SweepParam::LambdaConst, l);
    cfg.mu = Schedule::constant(l);
    const Trajectory t = run(cfg);
    EXPECT_NEAR(empirical_rate(t, 30).rate, 1.0 - l, 0.02) << l;
  }
}

TEST(CmdSweep, SingleStepMatchesRun) {
  const MarpConfig base = two_point_config(0.5, 0.5);
  const auto rows = sweep(base, SweepParam::LambdaConst, sweep_grid(0.5, 0.9, 1));
  ASSERT_EQ(rows.size(), 1u);
  const Trajectory t = run(base);
  EXPECT_EQ(rows[0].iterations, t.iterations);
  EXPECT_EQ(rows[0].limit, t.limit);
}

TEST(CmdSweep, CsvIsDeterministicAcrossThreadCounts) {
  const MarpConfig base = two_point_config(0.5, 0.5);
  std::ostringstream a, b;
  write_sweep_csv(sweep(base, SweepParam::LambdaConst, sweep_grid(0.2, 0.9, 9), 0, 1),
                  SweepParam::LambdaConst, a);
  write_sweep_csv(sweep(base, SweepParam::LambdaConst, sweep_grid(0.2, 0.9, 9), 0, 4),
                  SweepParam::LambdaConst, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "lambda-const,status,iterations,empirical_rate,limit[0]");
}

TEST(CmdSweep, OtherParameters) {
  MarpConfig base = two_axes_config(Schedule::constant(0.5), Schedule::constant(0.5), pt({1, 1}));
  const auto eta_rows = sweep(base, SweepParam::Eta, {0.5, 0.9});
  EXPECT_EQ(eta_rows.size(), 2u);
  const auto start_rows = sweep(base, SweepParam::StartCoordinate, {-2.0, 2.0}, 1);
  EXPECT_EQ(start_rows[0].status, Status::Converged);
  EXPECT_THROW(sweep(base, SweepParam::StartCoordinate, {1.0}, 5), std::invalid_argument);
  EXPECT_THROW(parse_sweep_param("gamma"), std::invalid_argument);
}
