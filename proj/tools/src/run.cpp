#include "fracdisp_cli/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "fracdisp/dispersive.hpp"
#include "fracdisp/errors.hpp"
#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/perturbed.hpp"
#include "fracdisp/threshold.hpp"

namespace fracdisp::cli {
namespace {

using nlohmann::json;

std::vector<double> geometric(double a, double b, int count) {
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k)
    out[k] = a * std::pow(b / a, static_cast<double>(k) / (count - 1));
  return out;
}

json fit_json(const DecayFit& f) {
  return {{"exponent", f.exponent},
          {"prefactor", f.prefactor},
          {"residual", f.residual},
          {"t_min", f.t_min},
          {"t_max", f.t_max}};
}

std::string cell(const std::vector<double>& v, std::size_t k) {
  return k < v.size() ? format_number(v[k]) : std::string("nan");
}

SpatialGrid grid_of(const ExperimentConfig& c) {
  return make_grid(c.n, c.extent, c.points, c.grid_mode);
}

OutputSet run_resolvent(const ExperimentConfig& c) {
  const FracParams params(c.alpha, c.n);
  const SpectralPoint pt{c.lambda, c.epsilon, c.sign};
  const std::vector<double> radii = geometric(c.r_min, c.r_max, c.r_count);
  const KernelProfile prof = free_resolvent_kernel(pt, params, radii, c.resolvent_method);
  CsvTable csv({"r", "re", "im", "abs"});
  for (std::size_t k = 0; k < radii.size(); ++k)
    csv.add_numbers({radii[k], prof.values[k].real(), prof.values[k].imag(),
                     std::abs(prof.values[k])});
  OutputSet out;
  out.add("resolvent.csv", csv.text());
  out.add_json("resolvent.json", {{"alpha", c.alpha},
                                  {"n", c.n},
                                  {"lambda", c.lambda},
                                  {"epsilon", c.epsilon},
                                  {"sign", to_key_values(c).at("sign")},
                                  {"kind", to_string(prof.kind)},
                                  {"method", to_key_values(c).at("resolvent_method")},
                                  {"samples", radii.size()}});
  return out;
}

OutputSet run_bounds(const ExperimentConfig& c) {
  const FracParams params(c.alpha, c.n);
  BoundSampling sampling;
  sampling.rho_min = c.rho_min;
  sampling.rho_max = c.rho_max;
  sampling.samples_per_decade = c.samples_per_decade;
  CsvTable csv({"amplitude", "order", "sup_coarse", "sup_fine", "drift", "small_drift", "pass"});
  json failures = json::array();
  bool all_pass = true;
  auto record = [&](AmplitudeKind kind, const char* name, int N) {
    const BoundReport r = verify_derivative_bounds(kind, N, params, sampling);
    csv.add_row({name, std::to_string(N), format_number(r.sup_coarse), format_number(r.sup_fine),
                  format_number(r.drift), format_number(r.small_drift), r.pass ? "1" : "0"});
    all_pass = all_pass && r.pass;
    for (const auto& f : r.failures) failures.push_back(std::string(name) + " N=" + std::to_string(N) + ": " + f);
  };
  for (int N = 0; N <= c.order_max; ++N) record(AmplitudeKind::F, "F", N);
  for (int N = 0; N <= std::min(1, c.order_max); ++N) {
    record(AmplitudeKind::FPlus, "F+", N);
    record(AmplitudeKind::FMinus, "F-", N);
  }
  OutputSet out;
  out.add("bounds.csv", csv.text());
  out.add_json("bounds.json", {{"all_pass", all_pass},
                               {"regime", to_string(low_energy_regime(params))},
                               {"failures", failures}});
  return out;
}

OutputSet run_lap(const ExperimentConfig& c) {
  const FracParams params(c.alpha, c.n);
  const SpatialGrid grid = grid_of(c);
  LapOptions opt;
  opt.lambda_spacing = c.lambda_spacing;
  opt.sign = c.sign;
  const std::vector<double> lambdas = geometric(c.lambda_min, c.lambda_max, c.lambda_count);
  const LapScalingResult r = lap_scaling(lambdas, c.sigma, c.derivative, c.potential, grid, params, opt);
  CsvTable csv({"lambda", "norm", "grid_points"});
  for (std::size_t k = 0; k < r.lambdas.size(); ++k)
    csv.add_row({format_number(r.lambdas[k]), format_number(r.norms[k]),
                 std::to_string(r.grid_points[k])});
  OutputSet out;
  out.add("lap.csv", csv.text());
  out.add_json("lap.json", {{"exponent", r.exponent},
                            {"target", 1.0 - 2.0 * c.alpha},
                            {"fit", fit_json(r.fit)},
                            {"residual_flag", r.residual_flag}});
  return out;
}

OutputSet run_threshold(const ExperimentConfig& c) {
  const FracParams params(c.alpha, c.n);
  const SpatialGrid grid = grid_of(c);
  const ThresholdReport r = classify_threshold(c.potential, params, grid, c.tol);
  json j = {{"coupling", r.coupling},
            {"tol", r.tol},
            {"sigma_min", r.sigma_min},
            {"sigma_min_refined", r.sigma_min_refined},
            {"refinement_consistency", r.refinement_consistency},
            {"nearest_eigenvalue", r.nearest_eigenvalue},
            {"sign_changes", r.sign_changes},
            {"classification", to_string(r.classification)},
            {"null_dimension", r.null_vectors.cols()}};
  if (r.null_vectors.cols() > 0) {
    const ResonanceFunction psi =
        resonance_function(r.null_vectors.col(0), c.potential, params, grid);
    j["resonance"] = {{"norm_weighted", psi.norm_weighted},
                      {"norm_l2", psi.norm_l2},
                      {"norm_linf", psi.norm_linf},
                      {"residual", psi.residual},
                      {"reconstruction_error", psi.reconstruction_error},
                      {"flagged_nonresonant", psi.flagged_nonresonant}};
  }
  std::vector<std::string> header = {"x0"};
  if (grid.mode() == GridMode::FullTensor)
    for (int d = 1; d < grid.dim(); ++d) header.push_back("x" + std::to_string(d));
  header.push_back("least_vector");
  CsvTable csv(header);
  const int coords = grid.mode() == GridMode::FullTensor ? grid.dim() : 1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row;
    for (int d = 0; d < coords; ++d) row.push_back(grid.node(i)[d]);
    row.push_back(r.least_vector.size() ? r.least_vector(static_cast<Eigen::Index>(i)) : 0.0);
    csv.add_numbers(row);
  }
  OutputSet out;
  out.add_json("threshold.json", j);
  out.add("threshold_vector.csv", csv.text());
  return out;
}

OutputSet run_sweep(const ExperimentConfig& c) {
  const FracParams params(c.alpha, c.n);
  const SpatialGrid grid = grid_of(c);
  std::vector<double> couplings(c.coupling_count);
  for (int k = 0; k < c.coupling_count; ++k)
    couplings[k] = c.coupling_min + (c.coupling_max - c.coupling_min) * k / (c.coupling_count - 1);
  const ThresholdSweep s = threshold_sweep(c.potential, couplings, params, grid, c.tol);
  CsvTable csv({"coupling", "sigma_min", "sigma_min_refined", "nearest_eigenvalue",
                "sign_changes", "lowest_eigenvalue", "classification"});
  for (std::size_t k = 0; k < s.couplings.size(); ++k) {
    const ThresholdReport& r = s.reports[k];
    csv.add_row({format_number(s.couplings[k]), format_number(r.sigma_min),
                 format_number(r.sigma_min_refined), format_number(r.nearest_eigenvalue),
                 std::to_string(r.sign_changes), format_number(s.lowest_eigenvalue[k]),
                 to_string(r.classification)});
  }
  auto num = [](double x) { return std::isnan(x) ? json(nullptr) : json(x); };
  OutputSet out;
  out.add("sweep.csv", csv.text());
  out.add_json("sweep.json", {{"resolution", s.resolution},
                              {"sigma_crossing", num(s.sigma_crossing)},
                              {"hamiltonian_crossing", num(s.hamiltonian_crossing)},
                              {"regular_drift", s.regular_drift}});
  return out;
}

OutputSet run_evolve(const ExperimentConfig& c, bool& partial) {
  DispersiveConfig d;
  d.alpha = c.alpha;
  d.n = c.n;
  d.potential = c.potential;
  if (c.free) d.potential.amplitude = 0.0;
  d.extent = c.extent;
  d.points = c.points;
  d.mode = c.grid_mode;
  d.t_min = c.t_min;
  d.t_max = c.t_max;
  d.t_count = c.t_count;
  d.method = c.evolve_method;
  d.smoothing = c.smoothing;
  d.L = c.L;
  d.double_L = c.double_L;
  d.columns = c.columns;
  const DispersiveReport r = dispersive_experiment(d);
  partial = !r.errors.empty();
  CsvTable csv({"t", "sup_stone", "sup_eigen", "sup_low", "sup_high", "sup_stone_2L",
                "cross_difference"});
  for (std::size_t k = 0; k < r.t.size(); ++k)
    csv.add_row({format_number(r.t[k]), cell(r.sup_stone, k), cell(r.sup_eigen, k),
                 cell(r.sup_low, k), cell(r.sup_high, k), cell(r.sup_stone_2L, k),
                 cell(r.cross_difference, k)});
  json j = {{"target", r.target},
            {"threshold_flag", r.threshold_flag},
            {"threshold_sigma_min", r.threshold_sigma_min},
            {"errors", r.errors}};
  if (r.fit_stone) j["fit_stone"] = fit_json(*r.fit_stone);
  if (r.fit_eigen) j["fit_eigen"] = fit_json(*r.fit_eigen);
  if (r.fit_stone_2L) j["fit_stone_2L"] = fit_json(*r.fit_stone_2L);
  OutputSet out;
  out.add("evolve.csv", csv.text());
  out.add_json("evolve.json", j);
  return out;
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (char& ch : s)
    if (ch == '_') ch = '-';
  return "--" + s;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

OutputSet execute(const ExperimentConfig& c, bool& partial_failure) {
  partial_failure = false;
  validate(c);
  switch (c.subcommand) {
    case Subcommand::Resolvent: return run_resolvent(c);
    case Subcommand::Bounds: return run_bounds(c);
    case Subcommand::Lap: return run_lap(c);
    case Subcommand::Threshold: return run_threshold(c);
    case Subcommand::Evolve: return run_evolve(c, partial_failure);
    case Subcommand::Sweep: return run_sweep(c);
  }
  throw ValidationError("unhandled subcommand");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Resolvent, threshold and dispersive-decay experiments for (-Delta)^alpha + V",
               "fracdisp");
  app.require_subcommand(1, 1);
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::vector<CLI::App*> subs;
  for (const std::string& name : subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "key = value config file; flags override it");
    for (const ConfigKey& k : config_keys()) {
      if (k.key == "subcommand") continue;
      if (k.is_flag)
        options[name + ":" + k.key] = sub->add_flag(flag_name(k.key), flags[k.key], k.help);
      else
        options[name + ":" + k.key] = sub->add_option(flag_name(k.key), values[k.key], k.help);
    }
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  std::string subname;
  for (CLI::App* s : subs)
    if (s->parsed()) subname = s->get_name();

  try {
    KeyValues kv;
    if (!config_path.empty()) kv = parse_key_values(read_file(config_path));
    for (const ConfigKey& k : config_keys()) {
      const auto it = options.find(subname + ":" + k.key);
      if (it == options.end() || it->second->count() == 0) continue;
      kv[k.key] = k.is_flag ? (flags[k.key] ? "true" : "false") : values[k.key];
    }
    kv["subcommand"] = subname;
    const ExperimentConfig config = config_from_key_values(kv);

    const auto start = std::chrono::steady_clock::now();
    bool partial = false;
    const OutputSet files = execute(config, partial);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    files.write(config.output, to_key_values(config), wall, subname);
    out << subname << ": wrote " << files.files().size() + 1 << " files to " << config.output
        << " in " << wall << " s\n";
    if (partial) {
      err << "error: some stages failed; partial results written\n";
      return kExitConvergence;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

}  // namespace fracdisp::cli
