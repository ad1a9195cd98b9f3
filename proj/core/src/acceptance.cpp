#include "merw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "merw/bridge.hpp"
#include "merw/entropy.hpp"
#include "merw/io.hpp"
#include "merw/spectral.hpp"
#include "merw/step_matrix.hpp"
#include "merw/walk.hpp"

namespace merw::acceptance {
namespace {

constexpr double kPi = std::numbers::pi;

double lb(double x) { return std::log2(x); }

struct Checker {
  CriterionResult result;

  void le(const std::string& name, double value, double bound) {
    result.measurements.push_back({name, value, bound, value <= bound});
  }
  void ge(const std::string& name, double value, double bound) {
    result.measurements.push_back({name, value, bound, value >= bound});
  }
  void in(const std::string& name, double value, double lo, double hi) {
    result.measurements.push_back({name + " (low edge)", value, lo, value >= lo});
    result.measurements.push_back({name + " (high edge)", value, hi, value <= hi});
  }
  void flag(const std::string& name, bool ok) {
    result.measurements.push_back({name, ok ? 1.0 : 0.0, 1.0, ok});
  }
};

LatticeSpec box_1d(int n, double delta = 1.0) { return {1, n, delta, Boundary::HardWall}; }

// --- 1: Gaussian transient --------------------------------------------------

CriterionResult criterion_1(const Config& cfg) {
  Checker c;
  c.result = {1, "gaussian transient (1D, 33 sites, tau=16)"};
  auto spec = box_1d(32);
  auto m = build_box_step_matrix(spec);
  auto field = evolve(m, point_start(spec), 16);
  auto fit = gaussian_transient_check(field);
  c.le("max profile deviation", fit.max_rel_dev, cfg.c1_max_dev);
  return c.result;
}

// --- 2: cosine ground state -------------------------------------------------

CriterionResult criterion_2(const Config& cfg) {
  Checker c;
  c.result = {2, "cosine ground state (1D, 33 sites, tau=256)"};
  auto spec = box_1d(32);
  auto m = build_box_step_matrix(spec);
  auto ground = dominant_eigenpair(m, 1e-13);
  Site center = point_start(spec).peak_site();
  auto field = evolve(m, point_start(spec), 256);

  double worst = 0.0;
  for (Site s = 0; s < spec.total_sites(); ++s) {
    if (is_boundary_site(spec, s)) continue;
    if (!on_occupied_sublattice(spec, s, center, 256)) continue;
    double profile = field.values[s] / field.values[center];
    double eig = ground.vector.values[s] / ground.vector.values[center];
    worst = std::max(worst, std::abs(profile - eig));
  }
  c.le("L_inf profile vs eigenvector", worst, cfg.c2_profile_linf);

  auto cosine = box_ground_reference(spec);
  double worst_cos = 0.0;
  for (Site s = 0; s < spec.total_sites(); ++s)
    worst_cos = std::max(worst_cos, std::abs(cosine.values[s] - ground.vector.values[s]));
  c.le("L_inf eigenvector vs sampled cosine", worst_cos, cfg.c2_cosine_linf);
  return c.result;
}

// --- 3: spectral correctness ------------------------------------------------

CriterionResult criterion_3(const Config& cfg) {
  Checker c;
  c.result = {3, "iterative spectra vs dense reference (1D N=32,64; 2D N=16)"};
  const std::vector<LatticeSpec> specs{box_1d(32), box_1d(64), {2, 16, 1.0, Boundary::HardWall}};
  for (const auto& spec : specs) {
    auto m = build_box_step_matrix(spec);
    auto iterative = top_k_eigenpairs(m, 3, 1e-12);
    auto dense = dense_oracle(m);
    std::ostringstream tag;
    tag << spec.dims << "D N=" << spec.sites_n;
    double max_gap = 0.0, min_align = 1.0;
    for (int i = 0; i < 3; ++i) {
      max_gap = std::max(max_gap, std::abs(iterative[i].lambda - dense[i].lambda));
      double dot = 0.0;
      for (std::size_t j = 0; j < iterative[i].vector.values.size(); ++j)
        dot += iterative[i].vector.values[j] * dense[i].vector.values[j];
      min_align = std::min(min_align, std::abs(dot));
    }
    c.le("lambda gap " + tag.str(), max_gap, cfg.c3_lambda_rel * iterative[0].lambda);
    c.ge("alignment " + tag.str(), min_align, 1.0 - cfg.c3_alignment);
    auto support = m.support_mask();
    double min_component = 1.0;
    for (Site s = 0; s < m.n_sites(); ++s)
      if (support[s]) min_component = std::min(min_component, iterative[0].vector.values[s]);
    c.ge("Perron positivity " + tag.str(), min_component, 1e-300);
  }
  return c.result;
}

// --- 4: Born rule / stationarity ---------------------------------------------

CriterionResult criterion_4(const Config& cfg) {
  Checker c;
  c.result = {4, "Born rule and stationarity (ring N=8, 1D box N=32)"};
  struct Case {
    LatticeSpec spec;
    double tol;
    const char* tag;
  };
  const std::vector<Case> cases{{{1, 8, 1.0, Boundary::Periodic}, 1e-13, "ring"},
                                {box_1d(32), 1e-14, "box"}};
  for (const auto& [spec, tol, tag] : cases) {
    auto m = build_box_step_matrix(spec);
    auto ground = dominant_eigenpair(m, tol);
    auto rho = stationary_density(ground);
    auto s = merw_stochastic_matrix(m, ground);
    c.le(std::string("density sum ") + tag, std::abs(rho.sum() - 1.0), cfg.c4_density_sum);

    auto rho_s = s.apply_to_distribution(rho.values);
    double inv = 0.0;
    for (Site x = 0; x < s.n_sites; ++x) inv = std::max(inv, std::abs(rho_s[x] - rho.values[x]));
    c.le(std::string("rho S = rho ") + tag, inv, cfg.c4_invariance);

    std::vector<double> r(s.n_sites, 0.0);
    for (Site x = 0; x < s.n_sites; ++x)
      if (s.defined[x]) r[x] = 1.0;
    double worst_rowsum = 0.0;
    for (int k = 1; k <= cfg.c4_max_power; ++k) {
      r = s.apply_to_vector(r);
      for (Site x = 0; x < s.n_sites; ++x)
        if (s.defined[x]) worst_rowsum = std::max(worst_rowsum, std::abs(r[x] - 1.0));
    }
    c.le(std::string("iterated row sums ") + tag, worst_rowsum, cfg.c4_iterated_rowsum);

    double balance = 0.0;
    for (Site x = 0; x < s.n_sites; ++x) {
      if (!s.defined[x]) continue;
      for (const auto& [y, p] : s.rows[x]) {
        double back = 0.0;
        for (const auto& [z, q] : s.rows[y])
          if (z == x) back = q;
        balance = std::max(balance, std::abs(rho.values[x] * p - rho.values[y] * back));
      }
    }
    c.le(std::string("detailed balance ") + tag, balance, cfg.c4_detailed_balance);
  }
  return c.result;
}

// --- 5: entropy rate identity -----------------------------------------------

CriterionResult criterion_5(const Config& cfg) {
  Checker c;
  c.result = {5, "entropy rate H = lb(lambda0) (ring N=8, 1D N=32, 2D N=16)"};
  struct Case {
    LatticeSpec spec;
    double tol;
    const char* tag;
  };
  const std::vector<Case> cases{{{1, 8, 1.0, Boundary::Periodic}, 1e-13, "ring"},
                                {box_1d(32), 1e-14, "1D box"},
                                {{2, 16, 1.0, Boundary::HardWall}, 1e-14, "2D box"}};
  for (const auto& [spec, tol, tag] : cases) {
    auto m = build_box_step_matrix(spec);
    auto ground = dominant_eigenpair(m, tol);
    auto h = step_entropy(stationary_density(ground), merw_stochastic_matrix(m, ground));
    c.le(std::string("|H - lb(lambda0)| ") + tag, std::abs(h.bits_per_step - lb(ground.lambda)),
         cfg.c5_identity);
  }
  return c.result;
}

// --- 6: telescoping ----------------------------------------------------------

CriterionResult criterion_6(const Config& cfg) {
  Checker c;
  c.result = {6, "k-step entropy telescoping H(k) = k H (1D box N=32)"};
  auto m = build_box_step_matrix(box_1d(32));
  auto ground = dominant_eigenpair(m, 1e-14);
  auto rho = stationary_density(ground);
  auto s = merw_stochastic_matrix(m, ground);
  double worst = 0.0;
  for (int k = 1; k <= cfg.c6_max_k; ++k) {
    auto rep = k_step_entropy(rho, s, k);
    worst = std::max(worst, std::abs(rep.bits_k - k * rep.bits_per_step));
  }
  c.le("max |H(k) - k H|", worst, cfg.c6_telescoping);
  return c.result;
}

// --- 7: transient entropy growth ----------------------------------------------

CriterionResult criterion_7(const Config& cfg) {
  Checker c;
  c.result = {7, "transient entropy growth (monotone, ends at stationary value)"};
  auto spec = box_1d(32);
  auto m = build_box_step_matrix(spec);
  auto ground = dominant_eigenpair(m, 1e-13);
  double h_stat =
      step_entropy(stationary_density(ground), merw_stochastic_matrix(m, ground)).bits_per_step;

  auto field = point_start(spec);
  std::int64_t done = 0;
  std::vector<double> hs;
  for (int n = 0; n <= 8; ++n) {
    std::int64_t k = std::int64_t{1} << n;
    field = evolve(m, field, k - done);
    done = k;
    hs.push_back(transient_entropy(m, field).bits_per_step);
  }
  double min_step = 0.0;
  for (std::size_t i = 1; i < hs.size(); ++i) min_step = std::min(min_step, hs[i] - hs[i - 1]);
  c.ge("min growth step", min_step, -1e-12);
  c.le("final offset to stationary H", std::abs(hs.back() - h_stat), cfg.c7_final_offset);
  return c.result;
}

// --- 8: entropy landscape structure -------------------------------------------

CriterionResult criterion_8(const Config& cfg) {
  Checker c;
  c.result = {8, "entropy landscape: ground maximum and excited saddle (65 sites)"};
  auto spec = box_1d(64, 1.0 / 64.0);
  auto m = build_box_step_matrix(spec);
  auto basis = top_k_eigenpairs(m, 3, 1e-13);

  auto ground_grid = entropy_landscape(m, basis, MixtureScheme::AroundGround,
                                       cfg.c8_radius2_ground, cfg.c8_grid, cfg.c8_grid);
  auto [ia, ib] = ground_grid.argmax();
  const std::size_t mid = static_cast<std::size_t>(cfg.c8_grid / 2);
  c.flag("around-ground argmax at (0,0)", ia == mid && ib == mid);

  auto first_grid =
      entropy_landscape(m, basis, MixtureScheme::AroundFirst, 1.0, cfg.c8_grid, cfg.c8_grid);
  // second differences two grid steps (0.1 in mixture coefficients) from the center
  const std::size_t lo = mid - 2, hi = mid + 2;
  bool all_valid = first_grid.ok(mid, mid) && first_grid.ok(lo, mid) && first_grid.ok(hi, mid) &&
                   first_grid.ok(mid, lo) && first_grid.ok(mid, hi);
  c.flag("around-first stencil valid", all_valid);
  if (all_valid) {
    double h0 = first_grid.at(mid, mid);
    double d2a = first_grid.at(hi, mid) - 2.0 * h0 + first_grid.at(lo, mid);
    double d2b = first_grid.at(mid, hi) - 2.0 * h0 + first_grid.at(mid, lo);
    c.ge("saddle d2H along |0> axis", d2a, 1e-300);
    c.le("saddle d2H along |2> axis", d2b, -1e-300);
    c.ge("H grows toward |0>", std::min(first_grid.at(hi, mid), first_grid.at(lo, mid)) - h0,
         1e-300);
    c.le("H falls toward |2>", std::max(first_grid.at(mid, hi), first_grid.at(mid, lo)) - h0,
         -1e-300);
  }
  return c.result;
}

// --- 9: energy mapping --------------------------------------------------------

CriterionResult criterion_9(const Config& cfg) {
  Checker c;
  c.result = {9, "energy mapping E = 1 - lambda/2D and 1/N^2 scaling"};
  const std::vector<int> ns{16, 32, 64, 128};
  std::vector<double> rel;
  for (int n : ns) {
    auto m = build_box_step_matrix(box_1d(n));
    auto ground = dominant_eigenpair(m, 1e-13);
    double e = energy_from_eigenvalue(ground.lambda, 1);
    double cont = kPi * kPi / (2.0 * n * n);
    rel.push_back(std::abs(e - cont) / cont);
    if (n == 32) c.le("relative gap at N=32", rel.back(), cfg.c9_rel_gap);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += std::log(ns[i]);
    my += std::log(rel[i]);
  }
  mx /= ns.size();
  my /= ns.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (std::log(ns[i]) - mx) * (std::log(rel[i]) - my);
    sxx += (std::log(ns[i]) - mx) * (std::log(ns[i]) - mx);
  }
  c.in("fitted slope", sxy / sxx, -2.0 - cfg.c9_slope_window, -2.0 + cfg.c9_slope_window);
  return c.result;
}

// --- 10: harmonic potential -----------------------------------------------------

CriterionResult criterion_10(const Config& cfg) {
  Checker c;
  c.result = {10, "harmonic potential, omega=0.02, N=512 (order alpha^2)"};
  const double omega = 0.02;
  auto spec = box_1d(512);
  auto m = build_potential_step_matrix(spec, harmonic_potential(omega));
  auto basis = top_k_eigenpairs(m, 2, 1e-12);
  double e0 = energy_from_eigenvalue(basis[0].lambda, 1);
  double e1 = energy_from_eigenvalue(basis[1].lambda, 1);
  c.le("E0 relative error vs omega/2", std::abs(e0 - omega / 2.0) / (omega / 2.0), cfg.c10_rel);
  c.le("E1-E0 relative error vs omega", std::abs((e1 - e0) - omega) / omega, cfg.c10_rel);
  return c.result;
}

// --- 11: expansion order --------------------------------------------------------

CriterionResult criterion_11(const Config& cfg) {
  Checker c;
  c.result = {11, "second-order expansion residual falls faster than delta^2.9"};
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  auto gaussian = smooth_gaussian(0.7);
  auto linear = expansion_residual(1, smooth_linear({0.4}), gaussian, deltas);
  c.ge("slope, linear potential", linear.fitted_slope, cfg.c11_min_slope);
  auto harmonic = expansion_residual(1, smooth_harmonic(0.8), gaussian, deltas);
  c.ge("slope, harmonic potential", harmonic.fitted_slope, cfg.c11_min_slope);
  return c.result;
}

// --- 12: Darwin coefficient -----------------------------------------------------

CriterionResult criterion_12(const Config& cfg) {
  Checker c;
  c.result = {12, "Darwin term carries the 1/8 coefficient"};
  const double omega = 0.02;
  auto spec = box_1d(256);
  auto pot = harmonic_potential(omega);
  auto m = build_potential_step_matrix(spec, pot);
  auto ground = dominant_eigenpair(m, 1e-12);
  auto breakdown = correction_expectations(ground.vector, pot, spec);

  // independent <Lap V> with the same spacing
  const auto& psi = ground.vector.values;
  double mean_lap_v = 0.0, norm2 = 0.0;
  std::vector<double> x(spec.dims), xp(spec.dims), xm(spec.dims);
  for (Site s = 0; s < spec.total_sites(); ++s) {
    if (psi[s] == 0.0) continue;
    site_coords(spec, s, x);
    xp = x;
    xm = x;
    xp[0] += spec.delta;
    xm[0] -= spec.delta;
    double lap = (pot(xp) - 2.0 * pot(x) + pot(xm)) / (spec.delta * spec.delta);
    mean_lap_v += psi[s] * psi[s] * lap;
    norm2 += psi[s] * psi[s];
  }
  mean_lap_v /= norm2;
  c.le("|<H_D> - (1/8)<Lap V>|", std::abs(breakdown.darwin - 0.125 * mean_lap_v),
       cfg.c12_coefficient);
  c.le("|<H_D> - omega^2/8|", std::abs(breakdown.darwin - omega * omega / 8.0), cfg.c12_harmonic);
  return c.result;
}

// --- 13: virial cancellation -----------------------------------------------------

CriterionResult criterion_13(const Config& cfg) {
  Checker c;
  c.result = {13, "virial cancellation, 3D softened Coulomb"};
  // delta = sqrt(D): a step spreads one Compton length per coordinate, which
  // is the calibration the energy mapping assumes.
  const double delta = std::sqrt(3.0);
  LatticeSpec spec{3, cfg.c13_sites_n, delta, Boundary::HardWall};
  auto pot = coulomb_potential(cfg.c13_alpha, cfg.c13_rcut_in_delta * delta);
  auto m = build_potential_step_matrix(spec, pot);
  auto ground = dominant_eigenpair(m, 1e-11);
  auto breakdown = correction_expectations(ground.vector, pot, spec);
  double rel = std::abs(breakdown.v2_half - breakdown.v_laplace_half) /
               std::max(std::abs(breakdown.v2_half), std::abs(breakdown.v_laplace_half));
  c.le("|<V^2/2> - <(1/2)V Lap>| relative", rel, cfg.c13_rel);
  return c.result;
}

// --- 14: node non-crossing -------------------------------------------------------

CriterionResult criterion_14(const Config& cfg) {
  Checker c;
  c.result = {14, "node non-crossing under evolution (1D box N=32)"};
  auto spec = box_1d(32);
  auto m = build_box_step_matrix(spec);
  auto basis = top_k_eigenpairs(m, 2, 1e-14);

  AmplitudeField state = basis[1].vector;
  const Site node = point_start(spec).peak_site();  // center site
  double worst_node = 0.0;
  bool single_change = true;
  for (int step = 0; step < 100; ++step) {
    state = evolve(m, state, 1);
    double peak = state.max_abs();
    worst_node = std::max(worst_node, std::abs(state.values[node]) / peak);
    int changes = 0;
    int prev_sign = 0;
    for (Site s = 0; s < spec.total_sites(); ++s) {
      double v = state.values[s];
      if (std::abs(v) < 1e-8 * peak) continue;
      int sign = v > 0.0 ? 1 : -1;
      if (prev_sign != 0 && sign != prev_sign) ++changes;
      prev_sign = sign;
    }
    if (changes != 1) single_change = false;
  }
  c.le("excited-state node amplitude", worst_node, cfg.c14_node_floor);
  c.flag("single sign change preserved", single_change);

  AmplitudeField bumps = point_start(spec);
  bumps.values.assign(bumps.values.size(), 0.0);
  bumps.values[node + 5] = 1.0;
  bumps.values[node - 5] = -1.0;
  double worst_center = 0.0;
  for (int step = 0; step < 100; ++step) {
    bumps = evolve(m, bumps, 1);
    worst_center = std::max(worst_center, std::abs(bumps.values[node]) / bumps.max_abs());
  }
  c.le("mirrored-bump cancellation at center", worst_center, cfg.c14_cancellation);
  return c.result;
}

using CriterionFn = CriterionResult (*)(const Config&);

struct Entry {
  CriterionFn fn;
  double limit;  // wall-clock bound in seconds, 0 = none
};

std::vector<Entry> table(const Config& cfg) {
  return {{criterion_1, cfg.limit_c1},   {criterion_2, cfg.limit_c2},
          {criterion_3, cfg.limit_c3},   {criterion_4, 0.0},
          {criterion_5, 0.0},            {criterion_6, 0.0},
          {criterion_7, cfg.limit_c7},   {criterion_8, cfg.limit_c8},
          {criterion_9, 0.0},            {criterion_10, cfg.limit_c10},
          {criterion_11, 0.0},           {criterion_12, 0.0},
          {criterion_13, cfg.limit_c13}, {criterion_14, 0.0}};
}

}  // namespace

std::vector<CriterionResult> run(const Config& config, const std::vector<int>& ids) {
  auto entries = table(config);
  std::vector<CriterionResult> results;
  for (int id = 1; id <= static_cast<int>(entries.size()); ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = entries[id - 1].fn(config);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = r.error.empty();
    for (const auto& meas : r.measurements) r.pass = r.pass && meas.satisfied;
    if (entries[id - 1].limit > 0.0) {
      bool in_time = r.seconds <= entries[id - 1].limit;
      r.measurements.push_back({"runtime (s)", r.seconds, entries[id - 1].limit, in_time});
      r.pass = r.pass && in_time;
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " (" << format_g17(r.seconds)
     << "s)";
  if (!r.error.empty()) os << " error: " << r.error;
  if (!r.pass) {
    for (const auto& m : r.measurements)
      if (!m.satisfied) os << "\n       " << m.name << " = " << m.value << " vs " << m.bound;
  }
  return os.str();
}

}  // namespace merw::acceptance
