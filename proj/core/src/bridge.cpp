#include "merw/bridge.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "merw/walk.hpp"

namespace merw {
namespace {

constexpr double kElectronMc2eV = 510998.95000;

double kahan_sum(std::span<const double> v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    double t = s + (x - c);
    c = (t - s) - (x - c);
    s = t;
  }
  return s;
}

}  // namespace

double energy_from_eigenvalue(double lambda, int dims) {
  if (dims < 1) throw std::invalid_argument("energy_from_eigenvalue: dims must be >= 1");
  return 1.0 - lambda / (2.0 * dims);
}

EnergySpectrum energies_from_basis(const SpectralBasis& basis, int dims) {
  EnergySpectrum spectrum;
  spectrum.dims = dims;
  for (const auto& pair : basis.pairs) {
    spectrum.lambdas.push_back(pair.lambda);
    spectrum.levels.push_back(energy_from_eigenvalue(pair.lambda, dims));
  }
  return spectrum;
}

double to_electron_volts(double energy_mc2) { return energy_mc2 * kElectronMc2eV; }

AmplitudeField box_ground_reference(const LatticeSpec& spec) {
  spec.validate();
  if (spec.boundary != Boundary::HardWall)
    throw std::invalid_argument("box_ground_reference: hard-wall box required");
  const double k0 = std::numbers::pi / spec.extent();
  AmplitudeField f{spec, std::vector<double>(spec.total_sites(), 0.0), 0, 0.0};
  std::vector<double> x(spec.dims);
  for (Site s = 0; s < spec.total_sites(); ++s) {
    site_coords(spec, s, x);
    double v = 1.0;
    for (int d = 0; d < spec.dims; ++d) v *= std::cos(k0 * x[d]);
    f.values[s] = v;
  }
  // wall sites carry cos(+-pi/2) which is not an exact zero in floating point
  for (Site s = 0; s < spec.total_sites(); ++s)
    if (is_boundary_site(spec, s)) f.values[s] = 0.0;
  f.normalize_l2();
  return f;
}

DiffusionCalibration diffusion_calibration(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("diffusion_calibration: n must be > 0");
  DiffusionCalibration c;
  c.delta_t = n * n;
  c.delta_sigma2 = n * n;
  c.diffusion_constant = c.delta_sigma2 / 2.0;
  return c;
}

SmoothField smooth_zero() {
  return {[](std::span<const double>) { return 0.0; },
          [](std::span<const double> x) { return std::vector<double>(x.size(), 0.0); },
          [](std::span<const double>) { return 0.0; }};
}

SmoothField smooth_linear(std::vector<double> slope) {
  return {[slope](std::span<const double> x) {
            double v = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) v += slope[d] * x[d];
            return v;
          },
          [slope](std::span<const double>) { return slope; },
          [](std::span<const double>) { return 0.0; }};
}

SmoothField smooth_harmonic(double omega) {
  return {[omega](std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return 0.5 * omega * omega * r2;
          },
          [omega](std::span<const double> x) {
            std::vector<double> g(x.size());
            for (std::size_t d = 0; d < x.size(); ++d) g[d] = omega * omega * x[d];
            return g;
          },
          [omega](std::span<const double> x) { return omega * omega * static_cast<double>(x.size()); }};
}

SmoothField smooth_gaussian(double sigma) {
  const double s2 = sigma * sigma;
  return {[s2](std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return std::exp(-r2 / (2.0 * s2));
          },
          [s2](std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            double f = std::exp(-r2 / (2.0 * s2));
            std::vector<double> g(x.size());
            for (std::size_t d = 0; d < x.size(); ++d) g[d] = -x[d] / s2 * f;
            return g;
          },
          [s2](std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            double f = std::exp(-r2 / (2.0 * s2));
            return f * (r2 / (s2 * s2) - static_cast<double>(x.size()) / s2);
          }};
}

SmoothField parse_smooth_field(const std::string& name, int dims) {
  auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const auto param = [&] {
    if (colon == std::string::npos)
      throw std::invalid_argument("smooth field: '" + head + "' needs a parameter");
    return std::stod(name.substr(colon + 1));
  };
  if (head == "zero") return smooth_zero();
  if (head == "linear") return smooth_linear(std::vector<double>(dims, param()));
  if (head == "harmonic") return smooth_harmonic(param());
  if (head == "gaussian") return smooth_gaussian(param());
  throw std::invalid_argument("smooth field: unknown preset '" + head + "'");
}

std::vector<std::vector<double>> default_probe_points(int dims) {
  const std::vector<double> axis{-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75};
  std::vector<std::vector<double>> pts;
  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    std::vector<double> p(dims);
    for (int d = 0; d < dims; ++d) p[d] = axis[idx[d]];
    pts.push_back(std::move(p));
    int d = dims - 1;
    while (d >= 0 && ++idx[d] == axis.size()) idx[d--] = 0;
    if (d < 0) break;
  }
  return pts;
}

ExpansionOrderReport expansion_residual(int dims, const SmoothField& pot, const SmoothField& field,
                                        std::span<const double> deltas,
                                        std::span<const std::vector<double>> probes) {
  if (!pot.value || !pot.gradient || !pot.laplacian || !field.value || !field.gradient ||
      !field.laplacian)
    throw std::invalid_argument("expansion_residual: fields must supply value/gradient/laplacian");
  if (deltas.empty()) throw std::invalid_argument("expansion_residual: empty delta sweep");

  std::vector<std::vector<double>> own_probes;
  if (probes.empty()) {
    own_probes = default_probe_points(dims);
    probes = own_probes;
  }

  ExpansionOrderReport rep;
  for (double delta : deltas) {
    double worst = 0.0;
    std::vector<double> shifted(dims), mid(dims);
    for (const auto& x : probes) {
      const double vx = pot.value(x);
      double lhs = 0.0;
      for (int d = 0; d < dims; ++d) {
        for (int dir : {+1, -1}) {
          shifted.assign(x.begin(), x.end());
          shifted[d] += dir * delta;
          mid.assign(x.begin(), x.end());
          mid[d] += dir * 0.5 * delta;
          lhs += field.value(shifted) * std::exp(vx - pot.value(mid));
        }
      }
      const auto grad_v = pot.gradient(x);
      const auto grad_f = field.gradient(x);
      double gv_gf = 0.0, gv2 = 0.0;
      for (int d = 0; d < dims; ++d) {
        gv_gf += grad_v[d] * grad_f[d];
        gv2 += grad_v[d] * grad_v[d];
      }
      const double f = field.value(x);
      const double rhs = 2.0 * dims * f +
                         delta * delta * (field.laplacian(x) - gv_gf -
                                          0.25 * pot.laplacian(x) * f + 0.25 * gv2 * f);
      if (!std::isfinite(lhs) || !std::isfinite(rhs))
        throw std::invalid_argument("expansion_residual: non-finite field or potential at a probe");
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    rep.deltas.push_back(delta);
    rep.max_residuals.push_back(worst);
  }

  // least-squares slope of ln(residual) against ln(delta)
  const std::size_t n = rep.deltas.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(rep.deltas[i]);
    my += std::log(std::max(rep.max_residuals[i], 1e-300));
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = std::log(rep.deltas[i]) - mx;
    sxy += dx * (std::log(std::max(rep.max_residuals[i], 1e-300)) - my);
    sxx += dx * dx;
  }
  rep.fitted_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return rep;
}

CorrectionBreakdown correction_expectations(const AmplitudeField& state, const Potential& pot,
                                            const LatticeSpec& spec) {
  const Site n = spec.total_sites();
  if (static_cast<Site>(state.values.size()) != n)
    throw std::invalid_argument("correction_expectations: dimension mismatch");
  const auto& psi = state.values;
  const double delta = spec.delta;

  std::vector<double> sq(n);
  for (Site s = 0; s < n; ++s) sq[s] = psi[s] * psi[s];
  const double norm2 = kahan_sum(sq);
  if (!(norm2 > 0.0)) throw std::invalid_argument("correction_expectations: zero state");

  // potential samples at sites, via the continuous evaluator
  std::vector<double> v(n), x(spec.dims);
  for (Site s = 0; s < n; ++s) {
    site_coords(spec, s, x);
    v[s] = pot(x);
  }

  // singularity guard: no state mass within two sites of |V| > 1 mc^2
  const double mass_eps = 1e-10;
  for (Site s = 0; s < n; ++s) {
    if (sq[s] / norm2 <= mass_eps) continue;
    Site probe = s;
    // walk the 2-neighbourhood along each dimension (Chebyshev radius 2)
    for (int d = 0; d < spec.dims; ++d) {
      for (int off : {-2, -1, 0, 1, 2}) {
        Site q = probe;
        bool ok = true;
        for (int step = 0; step < std::abs(off) && ok; ++step) {
          q = neighbor_site(spec, q, d, off > 0 ? +1 : -1);
          if (q < 0) ok = false;
        }
        if (!ok) continue;
        if (!std::isfinite(v[q]) || std::abs(v[q]) > 1.0) {
          std::ostringstream msg;
          msg << "correction_expectations: state mass near |V| > 1 mc^2 at site " << q
              << "; soften the potential";
          throw std::invalid_argument(msg.str());
        }
      }
    }
  }

  const auto at = [&](Site s, int d, int dir) -> double {
    Site q = neighbor_site(spec, s, d, dir);
    return q < 0 ? 0.0 : psi[q];  // hard-wall fields continue as zero
  };
  const auto v_at = [&](Site s, int d, int dir, std::vector<double>& buf) -> double {
    site_coords(spec, s, buf);
    buf[d] += dir * delta;
    return pot(buf);
  };

  CorrectionBreakdown out;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
  std::vector<double> buf(spec.dims);
  for (Site s = 0; s < n; ++s) {
    if (psi[s] == 0.0) continue;
    const double w = sq[s] / norm2;
    t1 += w * 0.5 * v[s] * v[s];
    double lap_psi = 0.0, lap_v = 0.0, gvgp = 0.0;
    for (int d = 0; d < spec.dims; ++d) {
      const double pp = at(s, d, +1), pm = at(s, d, -1);
      const double vp = v_at(s, d, +1, buf), vm = v_at(s, d, -1, buf);
      lap_psi += (pp - 2.0 * psi[s] + pm) / (delta * delta);
      lap_v += (vp - 2.0 * v[s] + vm) / (delta * delta);
      gvgp += ((vp - vm) / (2.0 * delta)) * ((pp - pm) / (2.0 * delta));
    }
    t2 += (psi[s] / norm2) * 0.5 * v[s] * lap_psi;
    t3 += (psi[s] / norm2) * 0.5 * gvgp;
    t4 += w * 0.125 * lap_v;
  }
  out.v2_half = t1;
  out.v_laplace_half = t2;
  out.grad_v_grad_half = t3;
  out.darwin = t4;
  out.total = -t1 + t2 + t3 + t4;
  return out;
}

std::vector<double> schrodinger_lattice_levels(const LatticeSpec& spec, const Potential& pot,
                                               int n_levels) {
  spec.validate();
  if (spec.boundary != Boundary::HardWall)
    throw std::invalid_argument("schrodinger_lattice_levels: hard-wall lattice required");
  const Site n = spec.total_sites();
  std::vector<Site> interior;
  for (Site s = 0; s < n; ++s)
    if (!is_boundary_site(spec, s)) interior.push_back(s);
  if (interior.size() > 10'000)
    throw std::invalid_argument("schrodinger_lattice_levels: interior exceeds the dense guard");
  if (n_levels < 1 || n_levels > static_cast<int>(interior.size()))
    throw std::invalid_argument("schrodinger_lattice_levels: bad level count");

  std::vector<Site> pos(n, -1);
  for (std::size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<Site>(i);

  const double inv_d2 = 1.0 / (spec.delta * spec.delta);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(interior.size(), interior.size());
  std::vector<double> x(spec.dims);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    Site s = interior[i];
    site_coords(spec, s, x);
    h(i, i) = spec.dims * inv_d2 + pot(x);
    for (int d = 0; d < spec.dims; ++d)
      for (int dir : {+1, -1}) {
        Site q = neighbor_site(spec, s, d, dir);
        if (q >= 0 && pos[q] >= 0) h(i, pos[q]) = -0.5 * inv_d2;
      }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("schrodinger_lattice_levels: dense solve failed");
  std::vector<double> levels(n_levels);
  for (int i = 0; i < n_levels; ++i) levels[i] = solver.eigenvalues()(i);
  return levels;
}

SchrodingerComparison order_alpha2_check(const LatticeSpec& spec, const Potential& pot,
                                         int n_levels, double tol) {
  StepMatrix m = build_potential_step_matrix(spec, pot);
  SpectralBasis basis = top_k_eigenpairs(m, n_levels, tol);
  SchrodingerComparison cmp;
  for (const auto& p : basis.pairs)
    cmp.merw_levels.push_back(energy_from_eigenvalue(p.lambda, spec.dims));
  cmp.schrodinger_levels = schrodinger_lattice_levels(spec, pot, n_levels);
  for (int i = 0; i < n_levels; ++i) {
    double gap = std::abs(cmp.merw_levels[i] - cmp.schrodinger_levels[i]);
    cmp.abs_gaps.push_back(gap);
    cmp.rel_gaps.push_back(gap / std::max(std::abs(cmp.schrodinger_levels[i]), 1e-300));
  }
  // scale check: <|V|> in the MERW ground state
  const auto& psi = basis[0].vector.values;
  std::vector<double> x(spec.dims);
  double mean = 0.0, norm2 = 0.0;
  for (Site s = 0; s < spec.total_sites(); ++s) {
    if (psi[s] == 0.0) continue;
    site_coords(spec, s, x);
    mean += psi[s] * psi[s] * std::abs(pot(x));
    norm2 += psi[s] * psi[s];
  }
  cmp.mean_abs_potential = mean / norm2;
  cmp.scale_warning = cmp.mean_abs_potential > 0.1;
  return cmp;
}

}  // namespace merw
