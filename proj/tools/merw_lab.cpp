// merw_lab: reproducible MERW lattice experiments.
//
// Each subcommand runs one deterministic experiment, writes its data CSVs
// under <out>/data/, a manifest.json echoing the resolved configuration, and
// a report.json with measured values next to their tolerances. Exit codes:
// 0 all checks pass, 1 a named check failed, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "merw/acceptance.hpp"
#include "merw/bridge.hpp"
#include "merw/entropy.hpp"
#include "merw/io.hpp"
#include "merw/spectral.hpp"
#include "merw/step_matrix.hpp"
#include "merw/walk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  int dims = 1;
  int sites = 33;  // site count per dimension; N = sites - 1
  double spacing = 1.0;
  std::string boundary = "hard_wall";
  std::string potential = "zero";
  std::string out = "";
  long seed = 0;  // reserved: every experiment here is deterministic
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& default_out) {
  o.out = default_out;
  cmd->add_option("--dims", o.dims, "lattice dimensions D")->check(CLI::Range(1, 4));
  cmd->add_option("--sites", o.sites, "sites per dimension (N+1 for hard walls)")
      ->check(CLI::Range(3, 100000));
  cmd->add_option("--spacing", o.spacing, "lattice spacing in Compton units");
  cmd->add_option("--boundary", o.boundary, "hard_wall or periodic")
      ->check(CLI::IsMember({"hard_wall", "periodic"}));
  cmd->add_option("--potential", o.potential,
                  "zero | harmonic:<omega> | coulomb:<alpha>[:<r_cut>]");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "reserved; experiments are deterministic");
}

merw::LatticeSpec to_spec(const CommonOpts& o) {
  merw::Boundary b = o.boundary == "periodic" ? merw::Boundary::Periodic : merw::Boundary::HardWall;
  int n = b == merw::Boundary::HardWall ? o.sites - 1 : o.sites;
  merw::LatticeSpec spec{o.dims, n, o.spacing, b};
  spec.validate();
  return spec;
}

json common_json(const CommonOpts& o) {
  return {{"dims", o.dims},         {"sites", o.sites},   {"spacing", o.spacing},
          {"boundary", o.boundary}, {"potential", o.potential}, {"out", o.out},
          {"seed", o.seed}};
}

void write_json(const fs::path& path, const json& j) {
  merw::ensure_parent_dir(path);
  std::ofstream os(path, std::ios::trunc);
  os << j.dump(2) << "\n";
}

struct Report {
  std::string experiment;
  json parameters;
  json values = json::object();
  json tolerances = json::object();
  std::vector<std::string> failures;

  void check_le(const std::string& name, double value, double bound) {
    values[name] = value;
    tolerances[name] = bound;
    if (!(value <= bound)) failures.push_back(name);
  }
  void check_ge(const std::string& name, double value, double bound) {
    values[name] = value;
    tolerances[name] = bound;
    if (!(value >= bound)) failures.push_back(name);
  }
  void check_true(const std::string& name, bool ok) {
    values[name] = ok;
    tolerances[name] = true;
    if (!ok) failures.push_back(name);
  }
  void note(const std::string& name, const json& v) { values[name] = v; }

  int finish(const fs::path& out) const {
    json j{{"experiment", experiment},
           {"parameters", parameters},
           {"values", values},
           {"tolerances", tolerances},
           {"pass", failures.empty()},
           {"failed_checks", failures}};
    write_json(out / "report.json", j);
    if (!failures.empty()) {
      std::cerr << "FAIL " << experiment << ":";
      for (const auto& f : failures) std::cerr << " [" << f << "]";
      std::cerr << "\n";
      return 1;
    }
    std::cout << "PASS " << experiment << " -> " << (out / "report.json").string() << "\n";
    return 0;
  }
};

std::vector<std::int64_t> parse_steps(const std::string& text) {
  std::vector<std::int64_t> steps;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) steps.push_back(std::stoll(tok));
  return steps;
}

std::pair<int, int> parse_pow2_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

merw::Potential resolve_potential(const CommonOpts& o) {
  return merw::parse_potential(o.potential, 2.0 * o.spacing);
}

// ---------------------------------------------------------------------------

int run_box_diffusion(const CommonOpts& o, const std::string& steps_text) {
  auto spec = to_spec(o);
  fs::path out(o.out);
  Report rep{"box-diffusion", common_json(o)};
  rep.parameters["steps"] = steps_text;
  write_json(out / "manifest.json", {{"experiment", "box-diffusion"}, {"config", rep.parameters}});

  auto m = o.potential == "zero" ? merw::build_box_step_matrix(spec)
                                 : merw::build_potential_step_matrix(spec, resolve_potential(o));
  auto ground = merw::dominant_eigenpair(m, 1e-13);
  auto start = merw::point_start(spec);
  const merw::Site center = start.peak_site();
  const double dsigma2 = spec.delta * spec.delta / spec.dims;

  merw::AmplitudeField field = start;
  std::int64_t done = 0;
  for (std::int64_t tau : parse_steps(steps_text)) {
    field = merw::evolve(m, field, tau - done);
    done = tau;

    std::ostringstream name;
    name << "psi_tau" << tau << ".csv";
    auto path = out / "data" / name.str();
    merw::ensure_parent_dir(path);
    std::ofstream os(path, std::ios::trunc);
    os << "site_index,x0,psi_ratio,gauss_ref,ground_ref\n";
    std::vector<double> x(spec.dims), mu = merw::site_coords(spec, center);
    for (merw::Site s = 0; s < spec.total_sites(); ++s) {
      if (!merw::on_occupied_sublattice(spec, s, center, tau)) continue;
      if (merw::is_boundary_site(spec, s)) continue;
      merw::site_coords(spec, s, x);
      double r2 = 0.0;
      for (int d = 0; d < spec.dims; ++d) r2 += (x[d] - mu[d]) * (x[d] - mu[d]);
      os << s << ',' << merw::format_g17(x[0]) << ','
         << merw::format_g17(field.values[s] / field.values[center]) << ','
         << merw::format_g17(std::exp(-r2 / (2.0 * tau * dsigma2))) << ','
         << merw::format_g17(ground.vector.values[s] / ground.vector.values[center]) << '\n';
    }

    // transient: Gaussian agreement; settled: eigenvector agreement
    bool at_walls = false;
    try {
      auto fit = merw::gaussian_transient_check(field, center);
      rep.check_le("gauss_max_dev_tau" + std::to_string(tau), fit.max_rel_dev, 0.05);
      rep.note("sigma2_fit_tau" + std::to_string(tau), fit.sigma2_fit);
    } catch (const std::invalid_argument&) {
      at_walls = true;
    }
    if (at_walls) {
      double worst = 0.0;
      for (merw::Site s = 0; s < spec.total_sites(); ++s) {
        if (!merw::on_occupied_sublattice(spec, s, center, tau)) continue;
        if (merw::is_boundary_site(spec, s)) continue;
        worst = std::max(worst, std::abs(field.values[s] / field.values[center] -
                                         ground.vector.values[s] / ground.vector.values[center]));
      }
      rep.check_le("ground_linf_tau" + std::to_string(tau), worst, 1e-2);
    }
  }
  return rep.finish(out);
}

int run_entropy_growth(const CommonOpts& o, const std::string& pow2_text) {
  auto spec = to_spec(o);
  fs::path out(o.out);
  Report rep{"entropy-growth", common_json(o)};
  rep.parameters["steps_pow2"] = pow2_text;
  write_json(out / "manifest.json", {{"experiment", "entropy-growth"}, {"config", rep.parameters}});

  auto m = o.potential == "zero" ? merw::build_box_step_matrix(spec)
                                 : merw::build_potential_step_matrix(spec, resolve_potential(o));
  auto ground = merw::dominant_eigenpair(m, 1e-13);
  double h_stat = merw::step_entropy(merw::stationary_density(ground),
                                     merw::merw_stochastic_matrix(m, ground))
                      .bits_per_step;

  auto [lo, hi] = parse_pow2_range(pow2_text);
  auto field = merw::point_start(spec);
  std::int64_t done = 0;
  std::vector<std::pair<std::int64_t, double>> series;
  for (int n = lo; n <= hi; ++n) {
    std::int64_t k = std::int64_t{1} << n;
    field = merw::evolve(m, field, k - done);
    done = k;
    series.emplace_back(k, merw::transient_entropy(m, field).bits_per_step);
  }
  merw::write_entropy_growth_csv(out / "data" / "entropy_growth.csv", series);

  double min_step = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i)
    min_step = std::min(min_step, series[i].second - series[i - 1].second);
  rep.check_ge("min_growth_step", min_step, -1e-12);
  rep.check_le("final_offset_to_stationary", std::abs(series.back().second - h_stat), 1e-3);
  rep.note("stationary_H_bits", h_stat);
  return rep.finish(out);
}

int run_entropy_landscape(const CommonOpts& o, const std::string& scheme_text, double radius2,
                          int grid, const std::string& block_text) {
  auto spec = to_spec(o);
  fs::path out(o.out);
  Report rep{"entropy-landscape", common_json(o)};
  rep.parameters["scheme"] = scheme_text;
  rep.parameters["radius2"] = radius2;
  rep.parameters["grid"] = grid;
  rep.parameters["block_nodes"] = block_text;
  write_json(out / "manifest.json",
             {{"experiment", "entropy-landscape"}, {"config", rep.parameters}});

  auto scheme = scheme_text == "around_first" ? merw::MixtureScheme::AroundFirst
                                              : merw::MixtureScheme::AroundGround;
  auto m = o.potential == "zero" ? merw::build_box_step_matrix(spec)
                                 : merw::build_potential_step_matrix(spec, resolve_potential(o));
  auto basis = merw::top_k_eigenpairs(m, 3, 1e-13);
  bool block = block_text == "auto" ? scheme == merw::MixtureScheme::AroundFirst
                                    : block_text == "on";
  auto grid_data = merw::entropy_landscape(m, basis, scheme, radius2, grid, grid, block);
  merw::write_landscape_csv(out / "data" / "landscape.csv", grid_data);

  auto [ia, ib] = grid_data.argmax();
  rep.note("argmax_alpha", grid_data.alphas[ia]);
  rep.note("argmax_beta", grid_data.betas[ib]);
  if (scheme == merw::MixtureScheme::AroundGround && grid % 2 == 1)
    rep.check_true("argmax_at_center",
                   ia == static_cast<std::size_t>(grid / 2) && ib == static_cast<std::size_t>(grid / 2));
  return rep.finish(out);
}

int run_potential_solve(const CommonOpts& o, int levels, bool with_oracle) {
  auto spec = to_spec(o);
  fs::path out(o.out);
  Report rep{"potential-solve", common_json(o)};
  rep.parameters["levels"] = levels;
  rep.parameters["oracle"] = with_oracle;
  write_json(out / "manifest.json",
             {{"experiment", "potential-solve"}, {"config", rep.parameters}});

  auto pot = resolve_potential(o);
  auto m = merw::build_potential_step_matrix(spec, pot);
  auto basis = merw::top_k_eigenpairs(m, levels, 1e-12);
  auto spectrum = merw::energies_from_basis(basis, spec.dims);
  merw::write_spectrum_csv(out / "data" / "spectrum.csv", spectrum);
  merw::write_field_csv(out / "data" / "ground_state.csv", basis[0].vector);
  rep.note("lambda0", spectrum.lambdas[0]);
  rep.note("E0_mc2", spectrum.levels[0]);
  rep.note("degenerate_cluster", basis.degenerate);

  if (with_oracle) {
    auto cmp = merw::order_alpha2_check(spec, pot, levels, 1e-12);
    rep.note("schrodinger_levels", cmp.schrodinger_levels);
    rep.note("merw_levels", cmp.merw_levels);
    rep.note("mean_abs_potential", cmp.mean_abs_potential);
    if (cmp.scale_warning)
      std::cerr << "warning: <|V|> = " << cmp.mean_abs_potential
                << " mc^2 exceeds 0.1; the order-alpha^2 regime is strained\n";
    for (int i = 0; i < levels; ++i)
      rep.note("rel_gap_level_" + std::to_string(i), cmp.rel_gaps[i]);
  }
  return rep.finish(out);
}

int run_expansion_check(const CommonOpts& o, const std::string& pot_text,
                        const std::string& field_text, const std::string& deltas_text,
                        double min_slope) {
  fs::path out(o.out);
  Report rep{"expansion-check", common_json(o)};
  rep.parameters["smooth_potential"] = pot_text;
  rep.parameters["smooth_field"] = field_text;
  rep.parameters["deltas"] = deltas_text;
  write_json(out / "manifest.json",
             {{"experiment", "expansion-check"}, {"config", rep.parameters}});

  std::vector<double> deltas;
  {
    std::istringstream is(deltas_text);
    std::string tok;
    while (std::getline(is, tok, ',')) deltas.push_back(std::stod(tok));
  }
  auto report = merw::expansion_residual(o.dims, merw::parse_smooth_field(pot_text, o.dims),
                                         merw::parse_smooth_field(field_text, o.dims), deltas);
  auto path = out / "data" / "expansion_residuals.csv";
  merw::ensure_parent_dir(path);
  std::ofstream os(path, std::ios::trunc);
  os << "delta,max_residual\n";
  for (std::size_t i = 0; i < report.deltas.size(); ++i)
    os << merw::format_g17(report.deltas[i]) << ',' << merw::format_g17(report.max_residuals[i])
       << '\n';
  rep.check_ge("fitted_slope", report.fitted_slope, min_slope);
  return rep.finish(out);
}

int run_corrections(const CommonOpts& o, double virial_tol) {
  auto spec = to_spec(o);
  fs::path out(o.out);
  Report rep{"corrections", common_json(o)};
  rep.parameters["virial_tol"] = virial_tol;
  write_json(out / "manifest.json", {{"experiment", "corrections"}, {"config", rep.parameters}});

  auto pot = resolve_potential(o);
  auto m = merw::build_potential_step_matrix(spec, pot);
  auto ground = merw::dominant_eigenpair(m, 1e-11);
  auto breakdown = merw::correction_expectations(ground.vector, pot, spec);
  rep.note("E0_mc2", merw::energy_from_eigenvalue(ground.lambda, spec.dims));
  rep.note("v2_half", breakdown.v2_half);
  rep.note("v_laplace_half", breakdown.v_laplace_half);
  rep.note("grad_v_grad_half", breakdown.grad_v_grad_half);
  rep.note("darwin", breakdown.darwin);
  rep.note("hcorr_total", breakdown.total);

  if (o.potential.rfind("coulomb", 0) == 0) {
    double rel = std::abs(breakdown.v2_half - breakdown.v_laplace_half) /
                 std::max(std::abs(breakdown.v2_half), std::abs(breakdown.v_laplace_half));
    rep.check_le("virial_pair_relative_diff", rel, virial_tol);
  }
  return rep.finish(out);
}

int run_verify(bool as_json, const std::string& only) {
  std::vector<int> ids;
  if (!only.empty()) {
    std::istringstream is(only);
    std::string tok;
    while (std::getline(is, tok, ',')) ids.push_back(std::stoi(tok));
  }
  auto results = merw::acceptance::run({}, ids);
  bool all = true;
  if (as_json) {
    json j = json::array();
    for (const auto& r : results) {
      json meas = json::array();
      for (const auto& m : r.measurements)
        meas.push_back(
            {{"name", m.name}, {"value", m.value}, {"bound", m.bound}, {"ok", m.satisfied}});
      j.push_back({{"id", r.id},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"seconds", r.seconds},
                   {"measurements", meas},
                   {"error", r.error}});
      all = all && r.pass;
    }
    std::cout << json{{"criteria", j}, {"pass", all}}.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << merw::acceptance::format_line(r) << "\n";
      all = all && r.pass;
    }
    std::cout << (all ? "all criteria passed" : "criteria FAILED") << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"merw_lab: maximal entropy random walk experiments on cubic lattices"};
  app.require_subcommand(1);

  CommonOpts diffusion_opts, growth_opts, landscape_opts, solve_opts, expansion_opts,
      corrections_opts;

  auto* diffusion = app.add_subcommand("box-diffusion", "point start in a box: Gaussian transient "
                                                        "and cosine ground-state profiles");
  std::string steps = "16,256";
  add_common(diffusion, diffusion_opts, "out-box-diffusion");
  diffusion->add_option("--steps", steps, "comma-separated step counts");

  auto* growth = app.add_subcommand("entropy-growth", "per-step entropy along the transient");
  std::string pow2 = "0..8";
  add_common(growth, growth_opts, "out-entropy-growth");
  growth->add_option("--steps-pow2", pow2, "range of powers of two, e.g. 0..8");

  auto* landscape = app.add_subcommand("entropy-landscape", "entropy of eigenstate mixtures");
  std::string scheme = "around_ground", block = "auto";
  double radius2 = 0.06;
  int grid = 41;
  landscape_opts.sites = 65;
  add_common(landscape, landscape_opts, "out-entropy-landscape");
  landscape->add_option("--scheme", scheme, "around_ground or around_first")
      ->check(CLI::IsMember({"around_ground", "around_first"}));
  landscape->add_option("--radius2", radius2, "disc radius squared for (alpha, beta)");
  landscape->add_option("--grid", grid, "grid points per axis")->check(CLI::Range(1, 2001));
  landscape->add_option("--block-nodes", block, "auto, on, or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));

  auto* solve = app.add_subcommand("potential-solve", "spectrum and energies in a potential");
  int levels = 3;
  bool with_oracle = false;
  solve_opts.sites = 513;
  solve_opts.potential = "harmonic:0.02";
  add_common(solve, solve_opts, "out-potential-solve");
  solve->add_option("--levels", levels, "number of eigenpairs")->check(CLI::Range(1, 64));
  solve->add_flag("--oracle", with_oracle, "compare against the lattice Schrodinger solve");

  auto* expansion = app.add_subcommand("expansion-check", "operator expansion order in the spacing");
  std::string smooth_pot = "harmonic:0.8", smooth_field = "gaussian:0.7",
              deltas = "0.2,0.1,0.05,0.025";
  double min_slope = 2.9;
  add_common(expansion, expansion_opts, "out-expansion-check");
  expansion->add_option("--smooth-potential", smooth_pot, "zero|linear:s|harmonic:w|gaussian:s");
  expansion->add_option("--smooth-field", smooth_field, "test field preset");
  expansion->add_option("--deltas", deltas, "comma-separated spacings");
  expansion->add_option("--min-slope", min_slope, "required log-log slope");

  auto* corrections = app.add_subcommand("corrections", "second-order correction expectations");
  double virial_tol = 0.05;
  corrections_opts.dims = 3;
  corrections_opts.sites = 49;
  corrections_opts.spacing = std::sqrt(3.0);
  corrections_opts.potential = "coulomb:0.2";
  add_common(corrections, corrections_opts, "out-corrections");
  corrections->add_option("--virial-tol", virial_tol,
                          "relative tolerance for the <V^2/2> vs <(1/2)V Lap> pair");

  auto* verify = app.add_subcommand("verify", "run the full verification suite");
  bool as_json = false;
  std::string only;
  verify->add_flag("--json", as_json, "machine-readable report on stdout");
  verify->add_option("--only", only, "comma-separated criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (diffusion->parsed()) return run_box_diffusion(diffusion_opts, steps);
    if (growth->parsed()) return run_entropy_growth(growth_opts, pow2);
    if (landscape->parsed())
      return run_entropy_landscape(landscape_opts, scheme, radius2, grid, block);
    if (solve->parsed()) return run_potential_solve(solve_opts, levels, with_oracle);
    if (expansion->parsed())
      return run_expansion_check(expansion_opts, smooth_pot, smooth_field, deltas, min_slope);
    if (corrections->parsed()) return run_corrections(corrections_opts, virial_tol);
    if (verify->parsed()) return run_verify(as_json, only);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
