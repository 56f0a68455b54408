#pragma once

#include "marp/cones.hpp"
#include "marp/diagnostics.hpp"
#include "marp/rates.hpp"
#include "marp/solver.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace marp {

using Json = nlohmann::json;

/// Schema violation; `pointer` is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& msg)
      : std::runtime_error(pointer + ": " + msg), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

Point point_from_json(const Json& j, const std::string& ptr);
Json point_to_json(const Point& p);

ClosedSet set_from_json(const Json& j, const std::string& ptr = "");
Json set_to_json(const ClosedSet& s);

/// Accepts an object {"type": ..., ...} or the compact string form.
Schedule schedule_from_json(const Json& j, const std::string& ptr = "");
Json schedule_to_json(const Schedule& s);

TiePolicy parse_tie_policy(const std::string& s);
const char* to_string(TiePolicy p);

MarpConfig config_from_json(const Json& j);
Json config_to_json(const MarpConfig& cfg);

/// Reads and parses a config file; parse errors map to pointer "".
MarpConfig load_config(const std::string& path);

Json summary_json(const Trajectory& t, int window = 30);
Json certificate_json(const RateCertificate& c);
Json cq_report_json(const CQReport& r);
Json regularity_json(const RegularityReport& r);

}  // namespace marp
