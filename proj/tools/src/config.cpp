#include "fracdisp_cli/config.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "fracdisp/errors.hpp"

namespace fracdisp::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("config key '" + key + "': not a number: '" + s + "'");
  return x;
}

int to_int(const std::string& key, const std::string& s) {
  int x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("config key '" + key + "': not an integer: '" + s + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ValidationError("config key '" + key + "': not a boolean: '" + s + "'");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

GridMode to_grid_mode(const std::string& s) {
  if (s == "tensor") return GridMode::FullTensor;
  if (s == "radial") return GridMode::Radial;
  throw ValidationError("config key 'grid_mode': expected tensor or radial, got '" + s + "'");
}

Sign to_sign(const std::string& s) {
  if (s == "plus" || s == "+") return Sign::Plus;
  if (s == "minus" || s == "-") return Sign::Minus;
  throw ValidationError("config key 'sign': expected plus or minus, got '" + s + "'");
}

ResolventMethod to_resolvent_method(const std::string& s) {
  if (s == "ladder") return ResolventMethod::EpsilonLadder;
  if (s == "split") return ResolventMethod::LaplacianSplit;
  throw ValidationError("config key 'resolvent_method': expected ladder or split, got '" + s + "'");
}

struct Field {
  std::string key;
  std::string help;
  bool is_flag;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define FRACDISP_DOUBLE(name, help)                                         \
  Field{#name, help, false, [](const ExperimentConfig& c) { return fmt(c.name); }, \
        [](ExperimentConfig& c, const std::string& v) { c.name = to_double(#name, v); }}
#define FRACDISP_INT(name, help)                                                          \
  Field{#name, help, false, [](const ExperimentConfig& c) { return std::to_string(c.name); }, \
        [](ExperimentConfig& c, const std::string& v) { c.name = to_int(#name, v); }}
#define FRACDISP_BOOL(name, help)                                              \
  Field{#name, help, true, [](const ExperimentConfig& c) { return bool_str(c.name); }, \
        [](ExperimentConfig& c, const std::string& v) { c.name = to_bool(#name, v); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"subcommand", "resolvent | bounds | lap | threshold | evolve | sweep", false,
            [](const ExperimentConfig& c) { return to_string(c.subcommand); },
            [](ExperimentConfig& c, const std::string& v) { c.subcommand = parse_subcommand(v); }},
      FRACDISP_DOUBLE(alpha, "order alpha of (-Delta)^alpha"),
      FRACDISP_INT(n, "spatial dimension"),
      FRACDISP_DOUBLE(extent, "grid half-width (tensor) or radius (radial)"),
      FRACDISP_INT(points, "grid points per axis (even, >= 8)"),
      Field{"grid_mode", "tensor | radial", false,
            [](const ExperimentConfig& c) {
              return std::string(c.grid_mode == GridMode::Radial ? "radial" : "tensor");
            },
            [](ExperimentConfig& c, const std::string& v) { c.grid_mode = to_grid_mode(v); }},
      Field{"potential", "gaussian-well | bump | polynomial-decay", false,
            [](const ExperimentConfig& c) { return to_string(c.potential.kind); },
            [](ExperimentConfig& c, const std::string& v) {
              c.potential.kind = parse_potential_kind(v);
            }},
      Field{"amplitude", "potential amplitude (0 = free)", false,
            [](const ExperimentConfig& c) { return fmt(c.potential.amplitude); },
            [](ExperimentConfig& c, const std::string& v) {
              c.potential.amplitude = to_double("amplitude", v);
            }},
      Field{"width", "potential width", false,
            [](const ExperimentConfig& c) { return fmt(c.potential.width); },
            [](ExperimentConfig& c, const std::string& v) {
              c.potential.width = to_double("width", v);
            }},
      Field{"beta", "potential decay exponent", false,
            [](const ExperimentConfig& c) { return fmt(c.potential.beta); },
            [](ExperimentConfig& c, const std::string& v) {
              c.potential.beta = to_double("beta", v);
            }},
      FRACDISP_DOUBLE(lambda, "resolvent: spectral parameter lambda"),
      FRACDISP_DOUBLE(epsilon, "resolvent: imaginary offset (0 = boundary value)"),
      Field{"sign", "resolvent: plus | minus", false,
            [](const ExperimentConfig& c) {
              return std::string(c.sign == Sign::Plus ? "plus" : "minus");
            },
            [](ExperimentConfig& c, const std::string& v) { c.sign = to_sign(v); }},
      Field{"resolvent_method", "resolvent: ladder | split", false,
            [](const ExperimentConfig& c) {
              return std::string(c.resolvent_method == ResolventMethod::EpsilonLadder ? "ladder"
                                                                                      : "split");
            },
            [](ExperimentConfig& c, const std::string& v) {
              c.resolvent_method = to_resolvent_method(v);
            }},
      FRACDISP_DOUBLE(r_min, "resolvent: smallest radius"),
      FRACDISP_DOUBLE(r_max, "resolvent: largest radius"),
      FRACDISP_INT(r_count, "resolvent: number of geometric radii"),
      FRACDISP_INT(order_max, "bounds: largest derivative order for F (F+- use <= 1)"),
      FRACDISP_DOUBLE(rho_min, "bounds: smallest lambda r"),
      FRACDISP_DOUBLE(rho_max, "bounds: largest lambda r"),
      FRACDISP_INT(samples_per_decade, "bounds: coarse sampling density"),
      FRACDISP_DOUBLE(lambda_min, "lap: smallest lambda"),
      FRACDISP_DOUBLE(lambda_max, "lap: largest lambda"),
      FRACDISP_INT(lambda_count, "lap: number of geometric lambdas"),
      FRACDISP_DOUBLE(sigma, "lap: weight exponent of <x>^{-sigma}"),
      FRACDISP_INT(derivative, "lap: lambda-derivative order j"),
      FRACDISP_DOUBLE(lambda_spacing, "lap: target lambda * grid spacing"),
      FRACDISP_DOUBLE(tol, "threshold/sweep: sigma_min tolerance"),
      FRACDISP_DOUBLE(coupling_min, "sweep: first amplitude"),
      FRACDISP_DOUBLE(coupling_max, "sweep: last amplitude"),
      FRACDISP_INT(coupling_count, "sweep: number of amplitudes"),
      FRACDISP_BOOL(free, "evolve: ignore the potential"),
      Field{"evolve_method", "evolve: stone | eigenbasis | both", false,
            [](const ExperimentConfig& c) { return to_string(c.evolve_method); },
            [](ExperimentConfig& c, const std::string& v) {
              c.evolve_method = parse_evolution_method(v);
            }},
      FRACDISP_BOOL(smoothing, "evolve: smoothed estimate (n = 2, alpha < 1)"),
      FRACDISP_DOUBLE(t_min, "evolve: first time"),
      FRACDISP_DOUBLE(t_max, "evolve: last time"),
      FRACDISP_INT(t_count, "evolve: number of geometric times (>= 8)"),
      FRACDISP_DOUBLE(L, "evolve: frequency cutoff L"),
      FRACDISP_BOOL(double_L, "evolve: repeat the Stone run with 2L"),
      FRACDISP_INT(columns, "evolve: kernel columns used for the sup"),
      Field{"output", "output directory", false,
            [](const ExperimentConfig& c) { return c.output; },
            [](ExperimentConfig& c, const std::string& v) { c.output = v; }},
  };
  return table;
}

#undef FRACDISP_DOUBLE
#undef FRACDISP_INT
#undef FRACDISP_BOOL

}  // namespace

std::string to_string(Subcommand s) {
  return subcommand_names()[static_cast<std::size_t>(s)];
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"resolvent", "bounds", "lap",
                                                 "threshold", "evolve", "sweep"};
  return names;
}

Subcommand parse_subcommand(const std::string& name) {
  const auto& names = subcommand_names();
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return static_cast<Subcommand>(k);
  throw ValidationError("unknown subcommand '" + name + "'");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    const ExperimentConfig defaults;
    for (const Field& f : fields())
      out.push_back({f.key, f.help + " [default: " + f.get(defaults) + "]", f.is_flag});
    return out;
  }();
  return keys;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                            "'");
    kv[key] = value;
  }
  return kv;
}

std::string serialize_key_values(const KeyValues& kv) {
  std::string out;
  for (const Field& f : fields()) {
    const auto it = kv.find(f.key);
    if (it != kv.end()) out += f.key + " = " + it->second + "\n";
  }
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (const Field& f : fields()) known = known || f.key == k;
    if (!known) out += k + " = " + v + "\n";
  }
  return out;
}

ExperimentConfig config_from_key_values(const KeyValues& kv) {
  ExperimentConfig c;
  for (const auto& [key, value] : kv) {
    const Field* field = nullptr;
    for (const Field& f : fields())
      if (f.key == key) field = &f;
    if (!field) throw ValidationError("unknown config key '" + key + "'");
    field->set(c, value);
  }
  return c;
}

KeyValues to_key_values(const ExperimentConfig& config) {
  KeyValues kv;
  for (const Field& f : fields()) kv[f.key] = f.get(config);
  return kv;
}

std::string serialize_config(const ExperimentConfig& config) {
  return serialize_key_values(to_key_values(config));
}

ExperimentConfig parse_config(const std::string& text) {
  return config_from_key_values(parse_key_values(text));
}

void validate(const ExperimentConfig& c) {
  const FracParams params(c.alpha, c.n);
  require(c.output.size() > 0, "output directory must be non-empty");
  switch (c.subcommand) {
    case Subcommand::Resolvent:
      require(c.lambda > 0.0, "resolvent: lambda must be positive");
      require(c.epsilon >= 0.0, "resolvent: epsilon must be >= 0");
      require(c.r_min > 0.0 && c.r_max > c.r_min, "resolvent: need 0 < r_min < r_max");
      require(c.r_count >= 2, "resolvent: r_count must be >= 2");
      break;
    case Subcommand::Bounds:
      require(c.order_max >= 0, "bounds: order_max must be >= 0");
      require(c.rho_min > 0.0 && c.rho_max > c.rho_min, "bounds: need 0 < rho_min < rho_max");
      require(c.samples_per_decade >= 4, "bounds: samples_per_decade must be >= 4");
      break;
    case Subcommand::Lap:
      require(c.lambda_min > 0.0 && c.lambda_max > c.lambda_min,
              "lap: need 0 < lambda_min < lambda_max");
      require(c.lambda_count >= 2, "lap: lambda_count must be >= 2");
      require(c.derivative >= 0, "lap: derivative must be >= 0");
      require(c.lambda_spacing > 0.0, "lap: lambda_spacing must be positive");
      break;
    case Subcommand::Threshold:
      require(c.tol > 0.0, "threshold: tol must be positive");
      require(c.potential.amplitude != 0.0, "threshold: amplitude must be nonzero");
      break;
    case Subcommand::Sweep:
      require(c.tol > 0.0, "sweep: tol must be positive");
      require(c.coupling_count >= 3, "sweep: coupling_count must be >= 3");
      require(c.coupling_min < c.coupling_max, "sweep: need coupling_min < coupling_max");
      break;
    case Subcommand::Evolve:
      require(c.t_min > 0.0 && c.t_max > c.t_min, "evolve: need 0 < t_min < t_max");
      require(c.t_count >= 8, "evolve: t_count must be >= 8");
      require(c.L > 0.0, "evolve: L must be positive");
      require(c.columns >= 1, "evolve: columns must be >= 1");
      require(c.free || c.potential.amplitude == 0.0 || c.evolve_method == EvolutionMethod::Eigenbasis ||
                  c.grid_mode == GridMode::FullTensor,
              "evolve: perturbed Stone kernels need grid_mode = tensor");
      break;
  }
}

}  // namespace fracdisp::cli
