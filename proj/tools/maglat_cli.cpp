// Command-line front end: polarizability tables, magic fields, coherence
// spectra, ensemble simulations, model fits, and the one-shot report
// pipeline.  All heavy lifting lives in the library; this file is argument
// plumbing and printing.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "maglat/csv.hpp"
#include "maglat/errors.hpp"
#include "maglat/fitting.hpp"
#include "maglat/polarizability.hpp"
#include "maglat/report.hpp"
#include "maglat/storage.hpp"

namespace {

using namespace maglat;

struct GlobalOpts {
  std::string data_dir;
  std::string species_path, lattice_path, sample_path;
  std::uint64_t seed = 1;
  bool json = false;

  std::string resolve(const std::string& explicit_path,
                      const char* default_name) const {
    if (!explicit_path.empty()) return explicit_path;
    std::string dir = data_dir;
    if (dir.empty())
      if (const char* env = std::getenv("MAGLAT_DATA_DIR")) dir = env;
    if (dir.empty()) dir = "data";
    return (std::filesystem::path(dir) / default_name).string();
  }
  SpeciesData species() const {
    return load_species(resolve(species_path, "species_rb87.cfg"));
  }
  LatticeConfig lattice() const {
    return load_lattice(resolve(lattice_path, "lattice_1064.cfg"));
  }
  SampleConfig sample() const {
    return load_sample(resolve(sample_path, "sample_default.cfg"));
  }
};

std::vector<double> parse_grid(const std::string& spec) {
  // "lo:hi:n" inclusive grid
  double lo = 0, hi = 0;
  int n = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2)
    throw ConfigError("bad grid spec '" + spec + "' (want lo:hi:n, n >= 2)");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

nlohmann::json fit_to_json(const FitResult& fr) {
  nlohmann::json j;
  for (std::size_t i = 0; i < fr.param_names.size(); ++i) {
    j["params"][fr.param_names[i]] = fr.params[i];
    j["sigmas"][fr.param_names[i]] = fr.sigmas[i];
  }
  j["r_squared"] = fr.r_squared;
  j["residual_norm"] = fr.residual_norm;
  j["iterations"] = fr.iterations;
  j["converged"] = fr.converged;
  j["warnings"] = fr.warnings;
  return j;
}

int cmd_polarizability(const GlobalOpts& g, double A_override, bool has_A) {
  const SpeciesData species = g.species();
  LatticeConfig lattice = g.lattice();
  if (has_A) lattice.circ_degree_A = A_override;
  const PolarizabilitySet p = decompose_stark(
      stark_operator_unit(species, lattice.wavelength_nm,
                          lattice.circ_degree_A,
                          lattice.include_counter_rotating),
      1.0, lattice.wavelength_nm);
  const double I = trap_depth_to_intensity(species, lattice);
  if (g.json) {
    nlohmann::json j;
    j["wavelength_nm"] = p.wavelength_nm;
    j["circ_degree_A"] = lattice.circ_degree_A;
    j["units"] = "Hz per W/cm^2";
    for (int F : {1, 2}) {
      const std::string key = "F" + std::to_string(F);
      j["alpha0"][key] = p.alpha0.at(F);
      j["alpha1"][key] = p.alpha1.at(F);
      j["alpha2"][key] = p.alpha2.at(F);
    }
    j["alpha12_vector"] = p.alpha12_vector;
    j["alpha12_tensor"] = p.alpha12_tensor;
    j["alpha12_rank3"] = p.alpha12_rank3;
    j["trap_intensity_W_cm2"] = I;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "polarizabilities at " << p.wavelength_nm << " nm, A = "
            << lattice.circ_degree_A << " [Hz per W/cm^2]\n";
  for (int F : {1, 2})
    std::cout << "  F=" << F << ": alpha0 = " << p.alpha0.at(F)
              << ", alpha1 = " << p.alpha1.at(F)
              << ", alpha2 = " << p.alpha2.at(F) << "\n";
  std::cout << "  F-coupling: vector = " << p.alpha12_vector
            << ", tensor = " << p.alpha12_tensor
            << ", rank3 = " << p.alpha12_rank3 << "\n";
  std::cout << "  trap intensity " << I << " W/cm^2 at depth "
            << lattice.trap_depth_uK << " uK\n";
  return 0;
}

int cmd_magic(const GlobalOpts& g, const std::string& coh_arg,
              const std::string& method, std::pair<double, double> bracket,
              double A_override, bool has_A) {
  const SpeciesData species = g.species();
  LatticeConfig lattice = g.lattice();
  if (has_A) lattice.circ_degree_A = A_override;
  const ManifoldEngine engine(species, lattice);
  const PolarizabilitySet pset = decompose_stark(
      stark_operator_unit(species, lattice.wavelength_nm,
                          lattice.circ_degree_A,
                          lattice.include_counter_rotating),
      1.0, lattice.wavelength_nm);

  std::vector<Coherence> cohs;
  if (coh_arg == "all")
    cohs = {Coherence::clock, Coherence::plus, Coherence::minus};
  else
    cohs = {coherence_from_string(coh_arg)};

  nlohmann::json out = nlohmann::json::array();
  for (Coherence c : cohs) {
    for (const std::string m : {"numeric", "closed_form"}) {
      if (m == "numeric" && method == "closed") continue;
      if (m == "closed_form" && method == "numeric") continue;
      const MagicFieldResult r =
          m == "numeric" ? magic_field_numeric(engine, c, bracket)
                         : magic_field_closed_form(pset, species, c);
      if (g.json) {
        out.push_back({{"coherence", to_string(c)},
                       {"method", r.method},
                       {"b0_G", r.b0},
                       {"slope_residual", r.slope_residual},
                       {"iterations", r.iterations}});
      } else {
        std::cout << to_string(c) << " (" << r.method << "): B0 = " << r.b0
                  << " G";
        if (m == "numeric")
          std::cout << "  [slope residual " << r.slope_residual << ", "
                    << r.iterations << " iterations]";
        std::cout << "\n";
      }
    }
  }
  if (g.json) std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_spectrum(const GlobalOpts& g, const std::string& coh_arg,
                 const std::string& grid_spec, const std::string& out_path) {
  const SpeciesData species = g.species();
  const LatticeConfig lattice = g.lattice();
  const ManifoldEngine engine(species, lattice);
  const Coherence coh = coherence_from_string(coh_arg);
  const std::vector<double> grid = parse_grid(grid_spec);
  std::vector<double> d_exact, d_pert, mu;
  for (double B : grid) {
    d_exact.push_back(engine.diff_shift_exact(coh, B, engine.intensity()));
    d_pert.push_back(
        engine.diff_shift_perturbative(coh, B, engine.intensity()));
    mu.push_back(engine.effective_moment(coh, B, engine.intensity()));
  }
  csv::write_columns(out_path,
                     {"B_G", "delta_Hz", "delta_pert_Hz", "mu_prime_Hz_per_G"},
                     {grid, d_exact, d_pert, mu});
  std::cout << "wrote " << out_path << " (" << grid.size() << " rows)\n";
  return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& mode,
                 const std::string& coh_arg, double B, bool has_B,
                 const std::string& times_spec, const std::string& grid_spec,
                 double fixed_t, double eta0, const std::string& out_path) {
  const SpeciesData species = g.species();
  const LatticeConfig lattice = g.lattice();
  const SampleConfig sample = g.sample();
  const ManifoldEngine engine(species, lattice);
  const Coherence coh = coherence_from_string(coh_arg);

  if (mode == "decay") {
    const double bias =
        has_B ? B : magic_field_numeric(engine, coh).b0;
    const DecayCurve c = retrieval_curve(engine, coh, bias, sample,
                                         parse_grid(times_spec), g.seed, eta0);
    csv::write_columns(out_path, {"t_s", "efficiency", "stderr"},
                       {c.t_s, c.efficiency, c.stderr_estimate});
    for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << out_path << " (decay at B = " << bias << " G)\n";
  } else if (mode == "scan") {
    std::vector<double> grid;
    if (!grid_spec.empty()) {
      grid = parse_grid(grid_spec);
    } else {
      const double b0 = has_B ? B : magic_field_numeric(engine, coh).b0;
      grid = parse_grid(std::to_string(b0 - 0.6) + ":" +
                        std::to_string(b0 + 0.6) + ":25");
    }
    const ScanCurve c =
        field_scan(engine, coh, sample, fixed_t, grid, g.seed, eta0);
    csv::write_columns(out_path, {"B_G", "efficiency", "stderr"},
                       {c.B_G, c.efficiency, c.stderr_estimate});
    std::cout << "wrote " << out_path << " (scan at t = " << fixed_t
              << " s)\n";
  } else if (mode == "depth-sweep") {
    const std::vector<double> depths = {16.0, 32.0, 48.0, 64.0};
    std::vector<double> magic;
    for (double d : depths) {
      LatticeConfig lat = lattice;
      lat.trap_depth_uK = d;
      magic.push_back(
          magic_field_numeric(ManifoldEngine(species, lat), coh).b0);
    }
    const auto rows =
        depth_sweep(species, lattice, coh, sample, depths, magic, g.seed);
    std::vector<double> d, tau;
    for (const auto& r : rows) {
      d.push_back(r.depth_uK);
      tau.push_back(r.tau_1e_s);
    }
    csv::write_columns(out_path, {"depth_uK", "tau_s"}, {d, tau});
    std::cout << "wrote " << out_path << " (depth sweep)\n";
  } else {
    throw ConfigError("unknown simulate mode '" + mode + "'");
  }
  return 0;
}

int cmd_fit(const std::string& model, const std::string& in_path,
            bool baseline) {
  FitResult fr;
  if (model == "gaussian") {
    const auto curve = ingest_csv(in_path);
    if (!std::holds_alternative<ScanCurve>(curve))
      throw ConfigError(in_path + ": gaussian fit expects a B_G scan curve");
    fr = fit_gaussian_peak(std::get<ScanCurve>(curve), baseline);
  } else if (model == "exp") {
    const auto curve = ingest_csv(in_path);
    if (!std::holds_alternative<DecayCurve>(curve))
      throw ConfigError(in_path + ": exp fit expects a t_s decay curve");
    fr = fit_exponential(std::get<DecayCurve>(curve));
  } else if (model == "linear-origin") {
    // Generic two-column numeric CSV (header row allowed and skipped).
    std::ifstream in(in_path);
    if (!in) throw ConfigError("cannot open " + in_path);
    std::vector<double> x, y;
    std::string line;
    while (std::getline(in, line)) {
      double a = 0, b = 0;
      if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2) {
        x.push_back(a);
        y.push_back(b);
      }
    }
    fr = fit_linear_origin(x, y);
  } else {
    throw ConfigError("unknown fit model '" + model + "'");
  }
  nlohmann::json j = fit_to_json(fr);
  j["model"] = model;
  if (model == "gaussian") j["baseline_used"] = baseline;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_report(const GlobalOpts& g, const std::string& out_dir) {
  const ReportBundle bundle = run_report(
      g.resolve(g.species_path, "species_rb87.cfg"),
      g.resolve(g.lattice_path, "lattice_1064.cfg"),
      g.resolve(g.sample_path, "sample_default.cfg"), g.seed, out_dir);
  print_report(bundle, std::cout);
  const int failed = failed_assertions(bundle);
  std::cout << "\n"
            << (failed == 0 ? "all asserted bands PASS"
                            : std::to_string(failed) + " asserted band(s) FAIL")
            << "; outputs in " << out_dir << "\n";
  return failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magnetically dressed optical-lattice coherence toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--data-dir", g.data_dir,
                 "config directory (else $MAGLAT_DATA_DIR, else ./data)");
  app.add_option("--species", g.species_path, "species config file");
  app.add_option("--lattice", g.lattice_path, "lattice config file");
  app.add_option("--sample", g.sample_path, "sample config file");
  app.add_option("--seed", g.seed, "ensemble RNG seed");
  app.add_flag("--json", g.json, "JSON output where supported");

  double A_override = 1.0;
  auto* pol = app.add_subcommand("polarizability",
                                 "irreducible light-shift components");
  auto* pol_A = pol->add_option("--A", A_override, "override circularity");

  std::string coh = "all", method = "both", bracket_spec;
  auto* mag = app.add_subcommand("magic-field", "magic bias fields");
  mag->add_option("--coherence", coh, "clock|plus|minus|all");
  mag->add_option("--method", method, "numeric|closed|both");
  mag->add_option("--bracket", bracket_spec, "search bracket LO,HI in G");
  auto* mag_A = mag->add_option("--A", A_override, "override circularity");

  std::string spec_coh = "clock", grid_spec = "0.5:8:40",
              out_path = "spectrum.csv";
  auto* spec = app.add_subcommand("spectrum",
                                  "differential shift vs bias field");
  spec->add_option("--coherence", spec_coh, "clock|plus|minus");
  spec->add_option("--B", grid_spec, "field grid lo:hi:n in G");
  spec->add_option("--out", out_path, "output CSV");

  std::string mode = "decay", sim_coh = "clock", times_spec = "0.05:1.0:20",
              sim_grid, sim_out = "simulate.csv";
  double bias = 0.0, fixed_t = 0.5, eta0 = 0.034;
  auto* sim = app.add_subcommand("simulate", "ensemble retrieval simulation");
  sim->add_option("--mode", mode, "decay|scan|depth-sweep");
  sim->add_option("--coherence", sim_coh, "clock|plus|minus");
  auto* sim_B = sim->add_option("--B", bias, "bias field G (default: magic)");
  sim->add_option("--times", times_spec, "decay time grid t0:t1:n in s");
  sim->add_option("--Bgrid", sim_grid, "scan grid lo:hi:n in G");
  sim->add_option("--fixed-t", fixed_t, "scan storage time s");
  sim->add_option("--eta0", eta0, "zero-time retrieval efficiency");
  sim->add_option("--out", sim_out, "output CSV");

  std::string fit_model = "exp", fit_in;
  bool fit_baseline = false;
  auto* fit = app.add_subcommand("fit", "fit one of the three model forms");
  fit->add_option("--model", fit_model, "gaussian|exp|linear-origin");
  fit->add_option("--in", fit_in, "input CSV")->required();
  fit->add_flag("--baseline", fit_baseline, "gaussian: add baseline term");

  std::string report_dir = "report_out";
  auto* rep = app.add_subcommand("report", "full reproduction pipeline");
  rep->add_option("--out-dir", report_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pol->parsed()) return cmd_polarizability(g, A_override, !pol_A->empty());
    if (mag->parsed()) {
      std::pair<double, double> bracket{0.5, 12.0};
      if (!bracket_spec.empty() &&
          std::sscanf(bracket_spec.c_str(), "%lf,%lf", &bracket.first,
                      &bracket.second) != 2)
        throw ConfigError("bad bracket '" + bracket_spec + "' (want LO,HI)");
      return cmd_magic(g, coh, method, bracket, A_override, !mag_A->empty());
    }
    if (spec->parsed()) return cmd_spectrum(g, spec_coh, grid_spec, out_path);
    if (sim->parsed())
      return cmd_simulate(g, mode, sim_coh, bias, !sim_B->empty(), times_spec,
                          sim_grid, fixed_t, eta0, sim_out);
    if (fit->parsed()) return cmd_fit(fit_model, fit_in, fit_baseline);
    if (rep->parsed()) return cmd_report(g, report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
