#include "marp/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Alternating relaxed projections between two closed sets"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  auto* run = app.add_subcommand("run", "Run the solver on a JSON configuration");
  run->add_option("config", config_path, "Experiment configuration")->required();
  run->add_option("-o,--out", out_dir, "Directory for trajectory.csv and summary.json");

  std::string example_id;
  auto* examples = app.add_subcommand("examples", "Reproduce the worked examples");
  examples->add_option("id", example_id, "Example id (all when omitted)");

  marp::RatesOptions rates_opt;
  double eps = 0.0;
  auto* rates = app.add_subcommand("rates", "Print rate certificates as JSON");
  rates->add_option("--theta", rates_opt.theta, "CQ-number")->check(CLI::Range(0.0, 1.0));
  auto* eps_opt = rates->add_option("--eps", eps, "Regularity constant")->check(CLI::NonNegativeNumber);
  rates->add_option("--lambda", rates_opt.lambda, "Schedule for lambda, e.g. const:0.5");
  rates->add_option("--mu", rates_opt.mu, "Schedule for mu, e.g. geom:0.5:0.9");
  rates->add_option("--horizon", rates_opt.horizon, "Horizon for numeric suprema")
      ->check(CLI::PositiveNumber);
  rates->add_option("--radius", rates_opt.radius, "Radius used for the derived radii")
      ->check(CLI::PositiveNumber);

  marp::CqOptions cq_opt;
  auto* cq = app.add_subcommand("cq", "CQ-number of a two-set scenario as JSON");
  cq->add_option("--scenario", cq_opt.scenario,
                 "sawtooth, two-lines:ANGLE, finite-sets:FILE or a config file");
  cq->add_option("--delta", cq_opt.delta, "Radius around the reference point")
      ->check(CLI::PositiveNumber);
  cq->add_option("--method", cq_opt.method, "exact2d or sampled");
  cq->add_option("--samples", cq_opt.samples, "Samples for the sampled method")
      ->check(CLI::PositiveNumber);
  cq->add_option("--seed", cq_opt.seed, "Sampling seed");
  cq->add_flag("--probe-regularity", cq_opt.probe_regularity, "Also run the regularity probe");

  marp::SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write a CSV");
  sweep->add_option("config", sweep_opt.config_path, "Base configuration")->required();
  sweep->add_option("--param", sweep_opt.param, "lambda-const, mu-const, eta or start-coordinate");
  sweep->add_option("--from", sweep_opt.from);
  sweep->add_option("--to", sweep_opt.to);
  sweep->add_option("--steps", sweep_opt.steps)->check(CLI::PositiveNumber);
  sweep->add_option("--coordinate", sweep_opt.coordinate, "Index swept by start-coordinate");
  sweep->add_option("-o,--out", sweep_opt.out_path, "Output CSV");
  sweep->add_option("--threads", sweep_opt.threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  if (*run) return marp::cmd_run(config_path, out_dir, std::cout, std::cerr);
  if (*examples) return marp::cmd_examples(example_id, std::cout, std::cerr);
  if (*rates) {
    if (*eps_opt) rates_opt.eps = eps;
    return marp::cmd_rates(rates_opt, std::cout, std::cerr);
  }
  if (*cq) return marp::cmd_cq(cq_opt, std::cout, std::cerr);
  if (*sweep) return marp::cmd_sweep(sweep_opt, std::cout, std::cerr);
  return 1;
}
