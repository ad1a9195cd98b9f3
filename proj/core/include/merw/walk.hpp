#pragma once

#include <cstdint>
#include <vector>

#include "merw/amplitude_field.hpp"
#include "merw/spectral.hpp"
#include "merw/step_matrix.hpp"

namespace merw {

/// Row-stochastic transition matrix on the support of a walk. Sites where no
/// path arrives have no defined outgoing row; they are marked rather than
/// stored as zero rows.
struct StochasticMatrix {
  Site n_sites = 0;
  std::vector<std::vector<std::pair<Site, double>>> rows;
  std::vector<char> defined;

  double row_sum(Site x) const;
  /// max_x |row_sum(x) - 1| over defined rows.
  double row_sum_defect() const;
  /// (rho S)_y = sum_x rho_x S_xy.
  std::vector<double> apply_to_distribution(std::span<const double> rho) const;
  /// r -> S r; with r = 1 this iterates the row sums of S^k.
  std::vector<double> apply_to_vector(std::span<const double> r) const;
};

/// Delta distribution at `site` (default: the lattice center).
AmplitudeField point_start(const LatticeSpec& spec, Site site = -1);

/// tau repeated step-matrix products. Values are rescaled by the running
/// max-norm each step, with the factored-out logarithm accumulated in
/// log_scale, so amplitudes never overflow. Throws on non-finite input.
AmplitudeField evolve(const StepMatrix& m, const AmplitudeField& start, std::int64_t tau);

/// Sublattice occupied by a point-started walk: parity of (site - start) must
/// equal tau mod 2 on bipartite lattices.
bool on_occupied_sublattice(const LatticeSpec& spec, Site site, Site start, std::int64_t tau);

struct GaussianFit {
  double sigma2_fit = 0.0;      // per-coordinate amplitude-weighted variance
  double max_rel_dev = 0.0;     // worst profile deviation, in units of the peak
  std::int64_t n_compared = 0;
};

/// Compares psi(x,tau)/psi(mu,tau) on the occupied sublattice against the
/// free-diffusion Gaussian exp(-(x-mu)^2 / (2 tau delta_sigma^2)) with
/// delta_sigma^2 = delta^2/D. Deviations are measured relative to the common
/// peak normalization, over sites with amplitude >= 10^-3 of the peak.
/// Requires that the field has not reached the walls (amplitude on the
/// wall-adjacent ring below 10^-8 of the peak).
GaussianFit gaussian_transient_check(const AmplitudeField& field, Site mu = -1);

/// Born rule: rho_x = psi0(x)^2 / sum psi0^2.
ProbabilityField stationary_density(const SpectralPair& ground);

/// S_xy = M(x,y) psi0(y) / (lambda0 psi0(x)) on sites with psi0 > 0.
StochasticMatrix merw_stochastic_matrix(const StepMatrix& m, const SpectralPair& ground);

/// Generic random walk: equal probability to each neighbour carrying nonzero
/// step weight. Isolated sites get an undefined-row marker.
StochasticMatrix grw_stochastic_matrix(const StepMatrix& m);

enum class MixtureScheme { AroundGround, AroundFirst };

/// AroundGround: sqrt(1-a^2-b^2)|0> + a|1> + b|2>.
/// AroundFirst:  a|0> + sqrt(1-a^2-b^2)|1> + b|2> (normalized).
AmplitudeField mixture_state(const SpectralBasis& basis, double alpha, double beta,
                             MixtureScheme scheme);

}  // namespace merw
