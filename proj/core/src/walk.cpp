#include "merw/walk.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace merw {

double StochasticMatrix::row_sum(Site x) const {
  double s = 0.0;
  for (const auto& [y, p] : rows[x]) s += p;
  return s;
}

double StochasticMatrix::row_sum_defect() const {
  double worst = 0.0;
  for (Site x = 0; x < n_sites; ++x)
    if (defined[x]) worst = std::max(worst, std::abs(row_sum(x) - 1.0));
  return worst;
}

std::vector<double> StochasticMatrix::apply_to_distribution(std::span<const double> rho) const {
  std::vector<double> out(n_sites, 0.0);
  for (Site x = 0; x < n_sites; ++x) {
    if (!defined[x] || rho[x] == 0.0) continue;
    for (const auto& [y, p] : rows[x]) out[y] += rho[x] * p;
  }
  return out;
}

std::vector<double> StochasticMatrix::apply_to_vector(std::span<const double> r) const {
  std::vector<double> out(n_sites, 0.0);
  for (Site x = 0; x < n_sites; ++x) {
    if (!defined[x]) continue;
    double acc = 0.0;
    for (const auto& [y, p] : rows[x]) acc += p * r[y];
    out[x] = acc;
  }
  return out;
}

AmplitudeField point_start(const LatticeSpec& spec, Site site) {
  spec.validate();
  if (site < 0) {
    std::vector<int> n(spec.dims, spec.sites_per_dim() / 2);
    site = site_index(spec, n);
  }
  if (site >= spec.total_sites()) throw std::out_of_range("point_start: site out of range");
  AmplitudeField f{spec, std::vector<double>(spec.total_sites(), 0.0), 0, 0.0};
  f.values[site] = 1.0;
  return f;
}

AmplitudeField evolve(const StepMatrix& m, const AmplitudeField& start, std::int64_t tau) {
  if (static_cast<Site>(start.values.size()) != m.n_sites())
    throw std::invalid_argument("evolve: field/matrix dimension mismatch");
  if (!start.all_finite()) throw std::invalid_argument("evolve: non-finite input amplitudes");
  AmplitudeField f = start;
  std::vector<double> next(f.values.size());
  for (std::int64_t step = 0; step < tau; ++step) {
    m.apply(f.values, next);
    f.values.swap(next);
    double peak = f.max_abs();
    if (peak > 0.0) {
      for (double& v : f.values) v /= peak;
      f.log_scale += std::log(peak);
    }
    ++f.tau;
  }
  return f;
}

bool on_occupied_sublattice(const LatticeSpec& spec, Site site, Site start, std::int64_t tau) {
  int p = site_parity(spec, site) ^ site_parity(spec, start);
  return p == static_cast<int>(tau & 1);
}

GaussianFit gaussian_transient_check(const AmplitudeField& field, Site mu) {
  const LatticeSpec& spec = field.lattice;
  if (spec.boundary != Boundary::HardWall)
    throw std::invalid_argument("gaussian_transient_check: hard-wall lattice required");
  if (mu < 0) mu = field.peak_site();
  const double peak = field.values[mu];
  if (!(peak > 0.0)) throw std::invalid_argument("gaussian_transient_check: empty field");
  for (double v : field.values)
    if (v < 0.0) throw std::invalid_argument("gaussian_transient_check: signed field");

  const Site n = spec.total_sites();
  std::vector<int> idx(spec.dims);
  // wall-contact precondition: the ring one step inside the boundary
  for (Site s = 0; s < n; ++s) {
    site_unindex(spec, s, idx);
    bool ring = false;
    for (int d = 0; d < spec.dims; ++d)
      if (idx[d] == 1 || idx[d] == spec.sites_n - 1) ring = true;
    if (ring && field.values[s] > 1e-8 * peak)
      throw std::invalid_argument("gaussian_transient_check: distribution has reached the walls");
  }

  const double dsigma2 = spec.delta * spec.delta / spec.dims;
  const auto mu_x = site_coords(spec, mu);
  GaussianFit fit;
  std::vector<double> x(spec.dims);
  double wsum = 0.0;
  std::vector<double> var(spec.dims, 0.0);
  for (Site s = 0; s < n; ++s) {
    double a = field.values[s];
    if (a <= 0.0) continue;
    site_coords(spec, s, x);
    wsum += a;
    for (int d = 0; d < spec.dims; ++d) var[d] += a * (x[d] - mu_x[d]) * (x[d] - mu_x[d]);
    if (!on_occupied_sublattice(spec, s, mu, field.tau)) continue;
    double ratio = a / peak;
    if (ratio < 1e-3) continue;
    double r2 = 0.0;
    for (int d = 0; d < spec.dims; ++d) r2 += (x[d] - mu_x[d]) * (x[d] - mu_x[d]);
    double gauss = std::exp(-r2 / (2.0 * field.tau * dsigma2));
    fit.max_rel_dev = std::max(fit.max_rel_dev, std::abs(ratio - gauss));
    ++fit.n_compared;
  }
  double mean_var = 0.0;
  for (int d = 0; d < spec.dims; ++d) mean_var += var[d] / wsum;
  fit.sigma2_fit = mean_var / spec.dims;
  return fit;
}

ProbabilityField stationary_density(const SpectralPair& ground) {
  if (ground.index != 0) throw std::invalid_argument("stationary_density: not the dominant pair");
  ProbabilityField rho{ground.vector.lattice, {}};
  rho.values.resize(ground.vector.values.size());
  double norm = 0.0, comp = 0.0;
  for (double v : ground.vector.values) {
    double term = v * v - comp;
    double t = norm + term;
    comp = (t - norm) - term;
    norm = t;
  }
  for (std::size_t i = 0; i < rho.values.size(); ++i) {
    double v = ground.vector.values[i];
    rho.values[i] = v * v / norm;
  }
  return rho;
}

StochasticMatrix merw_stochastic_matrix(const StepMatrix& m, const SpectralPair& ground) {
  if (!(ground.lambda > 0.0)) throw std::invalid_argument("merw_stochastic_matrix: lambda0 must be > 0");
  const auto& psi = ground.vector.values;
  if (static_cast<Site>(psi.size()) != m.n_sites())
    throw std::invalid_argument("merw_stochastic_matrix: dimension mismatch");
  StochasticMatrix s;
  s.n_sites = m.n_sites();
  s.rows.resize(s.n_sites);
  s.defined.assign(s.n_sites, 0);
  for (Site x = 0; x < s.n_sites; ++x) {
    if (!(psi[x] > 0.0)) continue;
    s.defined[x] = 1;
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      Site y = cols[p];
      if (w[p] > 0.0 && psi[y] > 0.0)
        s.rows[x].emplace_back(y, w[p] * psi[y] / (ground.lambda * psi[x]));
    }
  }
  return s;
}

StochasticMatrix grw_stochastic_matrix(const StepMatrix& m) {
  StochasticMatrix s;
  s.n_sites = m.n_sites();
  s.rows.resize(s.n_sites);
  s.defined.assign(s.n_sites, 0);
  for (Site x = 0; x < s.n_sites; ++x) {
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    int deg = 0;
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (w[p] > 0.0) ++deg;
    if (deg == 0) continue;  // isolated in support: undefined row
    s.defined[x] = 1;
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (w[p] > 0.0) s.rows[x].emplace_back(cols[p], 1.0 / deg);
  }
  return s;
}

AmplitudeField mixture_state(const SpectralBasis& basis, double alpha, double beta,
                             MixtureScheme scheme) {
  if (basis.size() < 3) throw std::invalid_argument("mixture_state: basis needs at least 3 states");
  const double rad = 1.0 - alpha * alpha - beta * beta;
  if (rad < 0.0) {
    std::ostringstream msg;
    msg << "mixture_state: alpha^2+beta^2 = " << alpha * alpha + beta * beta << " > 1";
    throw std::invalid_argument(msg.str());
  }
  const double c = std::sqrt(rad);
  const double c0 = scheme == MixtureScheme::AroundGround ? c : alpha;
  const double c1 = scheme == MixtureScheme::AroundGround ? alpha : c;
  AmplitudeField f{basis[0].vector.lattice, std::vector<double>(basis[0].vector.values.size(), 0.0), 0,
                   0.0};
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = c0 * basis[0].vector.values[i] + c1 * basis[1].vector.values[i] +
                  beta * basis[2].vector.values[i];
  return f;
}

}  // namespace merw
