#include "merw/entropy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace merw {
namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

inline double lb(double x) { return std::log(x) / kLn2; }

// -p lb p with the exact-zero branch
inline double plogp_bits(double p) { return p > 0.0 ? -p * lb(p) : 0.0; }

double row_entropy_bits(const std::vector<std::pair<Site, double>>& row) {
  double h = 0.0;
  for (const auto& [y, p] : row) h += plogp_bits(p);
  return h;
}

int thread_budget(std::size_t n_jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MERW_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(std::min<std::size_t>(hw, std::max<std::size_t>(n_jobs, 1)));
}

}  // namespace

EntropyReport step_entropy(const ProbabilityField& rho, const StochasticMatrix& s) {
  if (static_cast<Site>(rho.values.size()) != s.n_sites)
    throw std::invalid_argument("step_entropy: dimension mismatch");
  EntropyReport rep;
  double h = 0.0;
  for (Site x = 0; x < s.n_sites; ++x) {
    double r = rho.values[x];
    if (r == 0.0) {
      if (!s.defined[x]) ++rep.excluded_sites;
      continue;
    }
    if (!s.defined[x])
      throw std::invalid_argument("step_entropy: probability mass on an undefined row at site " +
                                  std::to_string(x));
    h += r * row_entropy_bits(s.rows[x]);
  }
  rep.bits_per_step = h;
  rep.bits_k = h;
  rep.k = 1;
  return rep;
}

EntropyReport transient_entropy(const StepMatrix& m, const AmplitudeField& psi) {
  if (static_cast<Site>(psi.values.size()) != m.n_sites())
    throw std::invalid_argument("transient_entropy: dimension mismatch");
  for (double v : psi.values)
    if (v < 0.0)
      throw std::invalid_argument("transient_entropy: signed field (use blocked_entropy)");
  const Site n = m.n_sites();
  std::vector<double> phi1 = m.apply(psi.values);
  std::vector<double> phi2 = m.apply(phi1);

  double wsum = 0.0;
  for (Site x = 0; x < n; ++x) wsum += psi.values[x] * phi2[x];
  if (!(wsum > 0.0)) throw std::invalid_argument("transient_entropy: no propagating amplitude");

  EntropyReport rep;
  double h = 0.0;
  for (Site x = 0; x < n; ++x) {
    double w = psi.values[x] * phi2[x];
    if (w == 0.0) {
      if (psi.values[x] > 0.0) ++rep.excluded_sites;
      continue;
    }
    auto cols = m.row_cols(x);
    auto mw = m.row_weights(x);
    double hrow = 0.0;
    for (std::size_t p = 0; p < cols.size(); ++p) hrow += plogp_bits(mw[p] * phi1[cols[p]] / phi2[x]);
    h += (w / wsum) * hrow;
  }
  rep.bits_per_step = h;
  rep.bits_k = h;
  rep.k = 1;
  return rep;
}

EntropyReport k_step_entropy(const ProbabilityField& rho, const StochasticMatrix& s,
                             std::int64_t k) {
  if (k < 1) throw std::invalid_argument("k_step_entropy: k must be >= 1");
  Site n_defined = 0;
  for (Site x = 0; x < s.n_sites; ++x) n_defined += s.defined[x] ? 1 : 0;
  if (n_defined > 100'000)
    throw std::invalid_argument(
        "k_step_entropy: support too large; use the telescoped identity H(k) = k H");

  // Entropy of the k-step path ensemble via the chain rule: the information of
  // a k-step path from x is the step information at x plus the expected
  // remaining path information at the step's target.
  std::vector<double> h_prev(s.n_sites, 0.0), h_cur(s.n_sites, 0.0);
  for (std::int64_t step = 0; step < k; ++step) {
    for (Site x = 0; x < s.n_sites; ++x) {
      if (!s.defined[x]) {
        h_cur[x] = 0.0;
        continue;
      }
      double acc = 0.0;
      for (const auto& [y, p] : s.rows[x]) {
        if (step > 0 && !s.defined[y])
          throw std::invalid_argument("k_step_entropy: transition into an undefined row");
        acc += plogp_bits(p) + p * h_prev[y];
      }
      h_cur[x] = acc;
    }
    h_prev.swap(h_cur);
  }

  EntropyReport rep = step_entropy(rho, s);
  rep.k = k;
  double hk = 0.0;
  for (Site x = 0; x < s.n_sites; ++x) {
    double r = rho.values[x];
    if (r == 0.0) continue;
    hk += r * h_prev[x];
  }
  rep.bits_k = hk;
  return rep;
}

bool has_node(const StepMatrix& m, const AmplitudeField& state, double eps_node) {
  const double floor = eps_node * state.max_abs();
  for (Site x = 0; x < m.n_sites(); ++x) {
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      Site y = cols[p];
      if (y <= x || w[p] <= 0.0) continue;
      if (state.values[x] * state.values[y] < 0.0 && std::abs(state.values[x]) >= floor &&
          std::abs(state.values[y]) >= floor)
        return true;
    }
    // sign change through a (near-)zero site
    if (std::abs(state.values[x]) < floor) {
      bool pos = false, neg = false;
      for (std::size_t p = 0; p < cols.size(); ++p) {
        if (w[p] <= 0.0) continue;
        if (state.values[cols[p]] > floor) pos = true;
        if (state.values[cols[p]] < -floor) neg = true;
      }
      if (pos && neg) return true;
    }
  }
  return false;
}

EntropyReport blocked_entropy(const StepMatrix& m, const AmplitudeField& state, double eps_node) {
  const Site n = m.n_sites();
  if (static_cast<Site>(state.values.size()) != n)
    throw std::invalid_argument("blocked_entropy: dimension mismatch");
  const double amax = state.max_abs();
  if (!(amax > 0.0)) throw std::invalid_argument("blocked_entropy: zero state");
  const double floor = eps_node * amax;
  const auto& psi = state.values;

  std::vector<char> blocked(n, 0);
  for (Site x = 0; x < n; ++x) {
    if (std::abs(psi[x]) >= floor) continue;
    bool pos = false, neg = false;
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (w[p] <= 0.0) continue;
      if (psi[cols[p]] > floor) pos = true;
      if (psi[cols[p]] < -floor) neg = true;
    }
    if (pos && neg) blocked[x] = 1;
  }
  // a zero crossing inside an edge becomes a wall at the nearest site
  for (Site x = 0; x < n; ++x) {
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      Site y = cols[p];
      if (y <= x || w[p] <= 0.0) continue;
      if (psi[x] * psi[y] < 0.0 && std::abs(psi[x]) >= floor && std::abs(psi[y]) >= floor)
        blocked[std::abs(psi[x]) <= std::abs(psi[y]) ? x : y] = 1;
    }
  }

  // connected same-sign domains over unblocked sites
  std::vector<char> seen(n, 0);
  EntropyReport rep;
  double total_h = 0.0, total_w = 0.0;
  std::vector<Site> stack, comp;
  std::vector<double> phi(n);
  for (Site s0 = 0; s0 < n; ++s0) {
    if (seen[s0] || blocked[s0] || psi[s0] == 0.0) continue;
    comp.clear();
    stack.assign(1, s0);
    seen[s0] = 1;
    while (!stack.empty()) {
      Site x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      auto cols = m.row_cols(x);
      auto w = m.row_weights(x);
      for (std::size_t p = 0; p < cols.size(); ++p) {
        Site y = cols[p];
        if (w[p] > 0.0 && !seen[y] && !blocked[y] && psi[x] * psi[y] > 0.0) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    if (comp.size() < 2) {
      ++rep.excluded_sites;
      continue;
    }
    // (M_domain |psi|)(x): neighbours restricted to this domain's sign region
    double wsum = 0.0;
    for (Site x : comp) wsum += psi[x] * psi[x];
    double hd = 0.0;
    for (Site x : comp) {
      auto cols = m.row_cols(x);
      auto w = m.row_weights(x);
      double denom = 0.0;
      for (std::size_t p = 0; p < cols.size(); ++p) {
        Site y = cols[p];
        if (w[p] > 0.0 && !blocked[y] && psi[x] * psi[y] > 0.0) denom += w[p] * std::abs(psi[y]);
      }
      if (!(denom > 0.0)) {
        ++rep.excluded_sites;
        continue;
      }
      double hrow = 0.0;
      for (std::size_t p = 0; p < cols.size(); ++p) {
        Site y = cols[p];
        if (w[p] > 0.0 && !blocked[y] && psi[x] * psi[y] > 0.0)
          hrow += plogp_bits(w[p] * std::abs(psi[y]) / denom);
      }
      hd += (psi[x] * psi[x] / wsum) * hrow;
    }
    total_h += wsum * hd;
    total_w += wsum;
  }
  for (Site x = 0; x < n; ++x)
    if (blocked[x]) ++rep.excluded_sites;
  if (!(total_w > 0.0)) throw std::invalid_argument("blocked_entropy: no domain left after blocking");
  rep.bits_per_step = total_h / total_w;
  rep.bits_k = rep.bits_per_step;
  rep.k = 1;
  return rep;
}

std::pair<std::size_t, std::size_t> LandscapeGrid::argmax() const {
  std::pair<std::size_t, std::size_t> best{0, 0};
  double best_h = -std::numeric_limits<double>::infinity();
  for (std::size_t ia = 0; ia < alphas.size(); ++ia)
    for (std::size_t ib = 0; ib < betas.size(); ++ib)
      if (ok(ia, ib) && at(ia, ib) > best_h) {
        best_h = at(ia, ib);
        best = {ia, ib};
      }
  return best;
}

LandscapeGrid entropy_landscape(const StepMatrix& m, const SpectralBasis& basis,
                                MixtureScheme scheme, double radius2, int n_alpha, int n_beta) {
  return entropy_landscape(m, basis, scheme, radius2, n_alpha, n_beta,
                           scheme == MixtureScheme::AroundFirst);
}

LandscapeGrid entropy_landscape(const StepMatrix& m, const SpectralBasis& basis,
                                MixtureScheme scheme, double radius2, int n_alpha, int n_beta,
                                bool block_nodes) {
  if (basis.size() < 3) throw std::invalid_argument("entropy_landscape: basis needs >= 3 states");
  if (!(radius2 >= 0.0)) throw std::invalid_argument("entropy_landscape: radius2 must be >= 0");
  if (n_alpha < 1 || n_beta < 1) throw std::invalid_argument("entropy_landscape: empty grid");

  LandscapeGrid grid;
  grid.scheme = scheme;
  const double r = std::sqrt(radius2);
  grid.alphas.resize(n_alpha);
  grid.betas.resize(n_beta);
  for (int i = 0; i < n_alpha; ++i)
    grid.alphas[i] = n_alpha == 1 ? 0.0 : -r + 2.0 * r * i / (n_alpha - 1);
  for (int i = 0; i < n_beta; ++i)
    grid.betas[i] = n_beta == 1 ? 0.0 : -r + 2.0 * r * i / (n_beta - 1);
  const std::size_t n_points = grid.alphas.size() * grid.betas.size();
  grid.h.assign(n_points, 0.0);
  grid.valid.assign(n_points, 0);

  auto eval_point = [&](std::size_t flat) {
    const std::size_t ia = flat / grid.betas.size();
    const std::size_t ib = flat % grid.betas.size();
    const double a = grid.alphas[ia], b = grid.betas[ib];
    if (a * a + b * b > radius2 * (1.0 + 1e-12)) return;  // outside the disc
    try {
      AmplitudeField psi = mixture_state(basis, std::clamp(a, -1.0, 1.0), b, scheme);
      if (!block_nodes && has_node(m, psi)) return;  // masked: a node appeared
      grid.h[flat] = blocked_entropy(m, psi).bits_per_step;
      grid.valid[flat] = 1;
    } catch (const std::invalid_argument&) {
      // normalization or blocking failure: leave masked
    }
  };

  const int n_threads = thread_budget(n_points);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_points; ++i) eval_point(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = cursor.fetch_add(1); i < n_points; i = cursor.fetch_add(1))
          eval_point(i);
      });
    for (auto& th : pool) th.join();
  }
  return grid;
}

}  // namespace merw
