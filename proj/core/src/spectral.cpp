#include "merw/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace merw {
namespace {

double kahan_dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double term = a[i] * b[i] - comp;
    double t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  return sum;
}

double l2_norm(std::span<const double> v) { return std::sqrt(kahan_dot(v, v)); }

// Deterministic, sign-free start pattern: positive pseudo-random values from
// a splitmix64 stream, so the start overlaps every symmetry sector.
double start_value(std::uint64_t i) {
  std::uint64_t z = i + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return 0.5 + static_cast<double>(z >> 11) / static_cast<double>(1ull << 53);
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (v[arg] < 0.0)
    for (double& x : v) x = -x;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& u : basis) {
    double c = kahan_dot(v, u);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
  }
}

struct IterResult {
  double lambda;
  std::vector<double> vec;
};

// One deflated shifted-power solve. `basis` holds already-converged vectors.
IterResult iterate_pair(const StepMatrix& m, const std::vector<std::vector<double>>& basis,
                        const std::vector<char>& support, double shift, double tol,
                        double lambda_scale, std::int64_t max_iter) {
  const Site n = m.n_sites();
  std::vector<double> v(n, 0.0), w(n, 0.0);
  for (Site i = 0; i < n; ++i)
    if (support[i]) v[i] = start_value(static_cast<std::uint64_t>(i));
  orthogonalize(v, basis);
  double nv = l2_norm(v);
  if (nv == 0.0) throw std::runtime_error("eigensolve: start vector vanished under deflation");
  for (double& x : v) x /= nv;

  double lambda = 0.0, residual = std::numeric_limits<double>::infinity();
  double best = residual;
  std::int64_t best_at = 0, it = 0;
  for (; it < max_iter; ++it) {
    m.apply(v, w);
    lambda = kahan_dot(v, w);
    residual = 0.0;
    for (Site i = 0; i < n; ++i) residual = std::max(residual, std::abs(w[i] - lambda * v[i]));
    double scale = std::max(std::abs(lambda), lambda_scale);
    if (scale > 0.0 && residual <= tol * scale) {
      orthogonalize(v, basis);
      double nf = l2_norm(v);
      for (double& x : v) x /= nf;
      return {lambda, std::move(v)};
    }
    if (residual < 0.999 * best) {
      best = residual;
      best_at = it;
    } else if (it - best_at > 5000) {
      break;  // rounding floor reached, no progress in 5000 sweeps
    }
    for (Site i = 0; i < n; ++i) w[i] += shift * v[i];
    orthogonalize(w, basis);
    double nw = l2_norm(w);
    if (nw == 0.0) throw std::runtime_error("eigensolve: iterate vanished under deflation");
    for (Site i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  std::ostringstream msg;
  msg << "eigensolve: no convergence after " << it << " iterations, last residual " << residual
      << " (target " << tol * std::max(std::abs(lambda), lambda_scale) << ")";
  throw std::runtime_error(msg.str());
}

SpectralPair make_pair(const StepMatrix& m, double lambda, std::vector<double> vec, int index) {
  fix_sign(vec);
  AmplitudeField f{m.lattice(), std::move(vec), 0, 0.0};
  return {lambda, std::move(f), index};
}

// Deterministic basis of a degenerate cluster: Gram-Schmidt of coordinate
// axes projected onto the cluster span, in ascending site order.
void canonicalize_cluster(std::vector<std::vector<double>>& vecs, std::size_t lo, std::size_t hi) {
  const std::size_t n = vecs[lo].size();
  const std::size_t dim = hi - lo;
  std::vector<std::vector<double>> fresh;
  for (std::size_t s = 0; s < n && fresh.size() < dim; ++s) {
    // projection of e_s onto the cluster span
    std::vector<double> cand(n, 0.0);
    for (std::size_t j = lo; j < hi; ++j) {
      double c = vecs[j][s];
      for (std::size_t i = 0; i < n; ++i) cand[i] += c * vecs[j][i];
    }
    orthogonalize(cand, fresh);
    double nc = l2_norm(cand);
    if (nc > 1e-8) {
      for (double& x : cand) x /= nc;
      fresh.push_back(std::move(cand));
    }
  }
  if (fresh.size() == dim)
    for (std::size_t j = lo; j < hi; ++j) vecs[j] = std::move(fresh[j - lo]);
}

}  // namespace

Site AmplitudeField::peak_site() const {
  Site arg = 0;
  double best = -1.0;
  for (Site i = 0; i < static_cast<Site>(values.size()); ++i) {
    double a = std::abs(values[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  return arg;
}

double AmplitudeField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double AmplitudeField::l2_norm() const { return merw::l2_norm(values); }

void AmplitudeField::normalize_l2() {
  double n = l2_norm();
  if (n == 0.0) throw std::runtime_error("AmplitudeField: cannot normalize a zero field");
  for (double& v : values) v /= n;
  log_scale = 0.0;
}

bool AmplitudeField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

double ProbabilityField::sum() const {
  double s = 0.0, c = 0.0;
  for (double v : values) {
    double t = s + (v - c);
    c = (t - s) - (v - c);
    s = t;
  }
  return s;
}

SpectralPair dominant_eigenpair(const StepMatrix& m, double tol, std::int64_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("dominant_eigenpair: tol must be > 0");
  if (m.n_entries() == 0) throw std::invalid_argument("dominant_eigenpair: all-zero matrix");
  if (!m.support_connected())
    throw std::invalid_argument(
        "dominant_eigenpair: support is disconnected; Perron-Frobenius needs a connected interior");
  const double shift = m.max_row_sum();
  auto support = m.support_mask();
  auto r = iterate_pair(m, {}, support, shift, tol, 0.0, max_iter);
  return make_pair(m, r.lambda, std::move(r.vec), 0);
}

SpectralBasis top_k_eigenpairs(const StepMatrix& m, int k, double tol, std::int64_t max_iter) {
  if (k < 1) throw std::invalid_argument("top_k_eigenpairs: k must be >= 1");
  if (m.n_entries() == 0) throw std::invalid_argument("top_k_eigenpairs: all-zero matrix");
  if (!m.support_connected())
    throw std::invalid_argument(
        "top_k_eigenpairs: support is disconnected; Perron-Frobenius needs a connected interior");
  auto support = m.support_mask();
  Site support_dim = 0;
  for (char c : support) support_dim += c;
  if (k > support_dim) throw std::invalid_argument("top_k_eigenpairs: k exceeds the interior dimension");

  const double shift = m.max_row_sum();
  std::vector<std::vector<double>> vecs;
  std::vector<double> lambdas;
  const int probes = k < support_dim ? k + 1 : k;  // one extra pair to test the cut
  for (int i = 0; i < probes; ++i) {
    // A pair can only converge down to the residual of the vectors deflated
    // before it, so earlier pairs are solved progressively tighter.
    double pair_tol = std::max(tol * std::ldexp(1.0, i + 1 - probes), 5e-15);
    auto r = iterate_pair(m, vecs, support, shift, pair_tol, lambdas.empty() ? 0.0 : lambdas[0],
                          max_iter);
    vecs.push_back(std::move(r.vec));
    lambdas.push_back(r.lambda);
  }

  bool degenerate = false;
  const double gap_tol = tol * std::max(std::abs(lambdas[0]), 1e-300);
  std::size_t lo = 0;
  for (std::size_t i = 1; i <= lambdas.size(); ++i) {
    bool same = i < lambdas.size() && std::abs(lambdas[i] - lambdas[i - 1]) < gap_tol;
    if (!same) {
      if (i - lo > 1) {
        degenerate = true;
        canonicalize_cluster(vecs, lo, std::min<std::size_t>(i, static_cast<std::size_t>(k)));
      }
      lo = i;
    } else if (i >= static_cast<std::size_t>(k)) {
      degenerate = true;  // cluster straddles the cut
    }
  }

  SpectralBasis basis;
  basis.degenerate = degenerate;
  for (int i = 0; i < k; ++i) basis.pairs.push_back(make_pair(m, lambdas[i], std::move(vecs[i]), i));
  return basis;
}

SpectralBasis dense_oracle(const StepMatrix& m) {
  const Site n = m.n_sites();
  if (n > 10'000) throw std::invalid_argument("dense_oracle: more than 10^4 sites");
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Site x = 0; x < n; ++x) {
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    for (std::size_t p = 0; p < cols.size(); ++p) dense(x, cols[p]) = w[p];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense_oracle: eigensolve failed");

  SpectralBasis basis;
  for (Site i = 0; i < n; ++i) {
    Site src = n - 1 - i;  // ascending -> descending
    std::vector<double> vec(n);
    for (Site j = 0; j < n; ++j) vec[j] = solver.eigenvectors()(j, src);
    basis.pairs.push_back(make_pair(m, solver.eigenvalues()(src), std::move(vec), static_cast<int>(i)));
  }
  for (Site i = 0; i + 1 < n; ++i)
    if (std::abs(basis.pairs[i].lambda - basis.pairs[i + 1].lambda) < 1e-12 * std::abs(basis.pairs[0].lambda))
      basis.degenerate = true;
  return basis;
}

}  // namespace merw
