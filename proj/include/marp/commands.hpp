#pragma once

#include "marp/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace marp {

// Exit codes of `marp run`.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCycle = 2;
inline constexpr int kExitMaxIter = 3;

int exit_code(Status s);

/// Applies MARP_SEED when set; throws ConfigError("/seed") on a bad value.
void apply_seed_override(MarpConfig& cfg);

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out,
            std::ostream& err);

/// Runs one example (or all when id is empty) and prints a pass/fail table.
int cmd_examples(const std::string& id, std::ostream& out, std::ostream& err);

struct RatesOptions {
  double theta = 0.0;
  std::optional<double> eps;
  std::string lambda = "const:1";
  std::string mu = "const:1";
  int horizon = 10000;
  double radius = 1.0;  // CQ / regularity radius feeding the derived radii
};

Json rates_json(const RatesOptions& opt);
int cmd_rates(const RatesOptions& opt, std::ostream& out, std::ostream& err);

struct CqOptions {
  std::string scenario = "sawtooth";
  double delta = 0.5;
  std::string method = "exact2d";
  int samples = 20000;
  std::uint64_t seed = 1;
  bool probe_regularity = false;
};

Json cq_json(const CqOptions& opt);
int cmd_cq(const CqOptions& opt, std::ostream& out, std::ostream& err);

enum class SweepParam { LambdaConst, MuConst, Eta, StartCoordinate };

SweepParam parse_sweep_param(const std::string& s);
const char* to_string(SweepParam p);

struct SweepOptions {
  std::string config_path;
  std::string param = "lambda-const";
  double from = 0.0;
  double to = 1.0;
  int steps = 10;
  int coordinate = 0;  // for start-coordinate
  std::string out_path = "sweep.csv";
  int threads = 0;     // 0: hardware concurrency
};

struct SweepRow {
  double value = 0.0;
  Status status = Status::MaxIter;
  long iterations = 0;
  std::optional<double> rate;
  Point limit;  // empty unless converged
};

/// Applies the swept parameter to a copy of the base configuration.
MarpConfig sweep_config(const MarpConfig& base, SweepParam p, double value, int coordinate = 0);

std::vector<SweepRow> sweep(const MarpConfig& base, SweepParam p, const std::vector<double>& grid,
                            int coordinate = 0, int threads = 0);

/// Grid from..to with `steps` points; a single step yields {from}.
std::vector<double> sweep_grid(double from, double to, int steps);

void write_sweep_csv(const std::vector<SweepRow>& rows, SweepParam p, std::ostream& out);

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace marp
