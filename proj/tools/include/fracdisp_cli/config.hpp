#pragma once

#include <map>
#include <string>
#include <vector>

#include "fracdisp/dispersive.hpp"
#include "fracdisp/grid.hpp"
#include "fracdisp/potential.hpp"

namespace fracdisp::cli {

enum class Subcommand { Resolvent, Bounds, Lap, Threshold, Evolve, Sweep };
std::string to_string(Subcommand s);
Subcommand parse_subcommand(const std::string& name);
const std::vector<std::string>& subcommand_names();

/// Everything one experiment needs. Defaults are listed by config_keys().
struct ExperimentConfig {
  Subcommand subcommand = Subcommand::Resolvent;
  double alpha = 1.0;
  int n = 3;
  // grid
  double extent = 6.0;
  int points = 48;
  GridMode grid_mode = GridMode::FullTensor;
  // potential
  PotentialSpec potential{PotentialKind::Bump, 0.0, 1.0, 10.0};
  // resolvent
  double lambda = 1.0;
  double epsilon = 0.0;
  Sign sign = Sign::Plus;
  ResolventMethod resolvent_method = ResolventMethod::EpsilonLadder;
  double r_min = 0.1;
  double r_max = 20.0;
  int r_count = 40;
  // bounds
  int order_max = 2;
  double rho_min = 1e-2;
  double rho_max = 1e2;
  int samples_per_decade = 24;
  // lap
  double lambda_min = 2.0;
  double lambda_max = 64.0;
  int lambda_count = 6;
  double sigma = 1.0;
  int derivative = 0;
  double lambda_spacing = 1.0;
  // threshold and sweep
  double tol = 1e-3;
  double coupling_min = -4.0;
  double coupling_max = -0.25;
  int coupling_count = 16;
  // evolve
  bool free = false;
  EvolutionMethod evolve_method = EvolutionMethod::Stone;
  bool smoothing = false;
  double t_min = 10.0;
  double t_max = 1000.0;
  int t_count = 8;
  double L = 2.0;
  bool double_L = false;
  int columns = 3;
  // output
  std::string output = "fracdisp_out";

  bool operator==(const ExperimentConfig&) const = default;
};

using KeyValues = std::map<std::string, std::string>;

struct ConfigKey {
  std::string key;
  std::string help;
  bool is_flag = false;  ///< boolean switch on the command line
};

/// All keys in file order, with the default value rendered into the help.
const std::vector<ConfigKey>& config_keys();

/// "key = value" lines; '#' starts a comment; blank lines ignored.
KeyValues parse_key_values(const std::string& text);
std::string serialize_key_values(const KeyValues& kv);

/// Overlays kv onto the defaults. Unknown keys and malformed values throw
/// ValidationError.
ExperimentConfig config_from_key_values(const KeyValues& kv);
KeyValues to_key_values(const ExperimentConfig& config);

std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& text);

/// Cross-field checks that do not need a computation.
void validate(const ExperimentConfig& config);

}  // namespace fracdisp::cli
