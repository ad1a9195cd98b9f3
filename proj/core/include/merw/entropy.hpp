#pragma once

#include <cstdint>
#include <vector>

#include "merw/amplitude_field.hpp"
#include "merw/spectral.hpp"
#include "merw/step_matrix.hpp"
#include "merw/walk.hpp"

namespace merw {

/// Shannon entropy production, binary logarithm throughout.
struct EntropyReport {
  double bits_per_step = 0.0;   // H
  std::int64_t k = 1;
  double bits_k = 0.0;          // H(k); equals k * H for a stationary chain
  std::int64_t excluded_sites = 0;
};

/// H = sum_x rho_x sum_y S_xy lb(1/S_xy), with 0 lb(1/0) := 0.
/// Throws if rho carries mass on a row S does not define.
EntropyReport step_entropy(const ProbabilityField& rho, const StochasticMatrix& s);

/// Instantaneous entropy of a transient non-negative amplitude field.
///
/// The step kernel out of x weights targets by their one-step-ahead path
/// counts, s_xy = M_xy (M psi)_y / (M^2 psi)_x, and sites are weighted by the
/// share of paths passing through them, rho_x ∝ psi_x (M^2 psi)_x. Both reduce
/// to the stationary S and the Born density when psi is the dominant
/// eigenvector, and stay defined on the occupied sublattice of a point start.
EntropyReport transient_entropy(const StepMatrix& m, const AmplitudeField& psi);

/// H(k) from the k-step transition matrix, densified on the support
/// (guarded; suggests the telescoped H(k) = k H identity when too large).
EntropyReport k_step_entropy(const ProbabilityField& rho, const StochasticMatrix& s, std::int64_t k);

/// Entropy of a signed state with its nodes blocked. Sign-change edges put a
/// wall at the smaller-magnitude endpoint (the site nearest the zero
/// crossing); tiny-amplitude sites flanked by both signs are walls as well.
/// Each nodal domain contributes its |psi|-driven step entropy, aggregated
/// with weights proportional to the domain's share of sum |psi|^2.
EntropyReport blocked_entropy(const StepMatrix& m, const AmplitudeField& state,
                              double eps_node = 1e-8);

/// True if the state changes sign across any edge of m (at eps resolution).
bool has_node(const StepMatrix& m, const AmplitudeField& state, double eps_node = 1e-8);

/// H over a rectangular (alpha, beta) grid of eigenstate mixtures.
struct LandscapeGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> h;      // row-major: h[ia * betas.size() + ib]
  std::vector<char> valid;
  MixtureScheme scheme = MixtureScheme::AroundGround;

  double at(std::size_t ia, std::size_t ib) const { return h[ia * betas.size() + ib]; }
  bool ok(std::size_t ia, std::size_t ib) const { return valid[ia * betas.size() + ib] != 0; }
  /// (ia, ib) of the largest valid H value.
  std::pair<std::size_t, std::size_t> argmax() const;
};

/// Evaluates the mixture entropy over the disc alpha^2 + beta^2 <= radius2
/// sampled on an n_alpha x n_beta grid of [-r, r]^2. Without node blocking a
/// point whose mixture develops a node is masked; with blocking (the default
/// for the around-first scheme) it is evaluated via blocked_entropy.
/// Grid points are independent; evaluation is parallelized across threads
/// (capped by the MERW_THREADS environment variable) with per-point slots,
/// so results do not depend on the thread count.
LandscapeGrid entropy_landscape(const StepMatrix& m, const SpectralBasis& basis,
                                MixtureScheme scheme, double radius2, int n_alpha, int n_beta);
LandscapeGrid entropy_landscape(const StepMatrix& m, const SpectralBasis& basis,
                                MixtureScheme scheme, double radius2, int n_alpha, int n_beta,
                                bool block_nodes);

}  // namespace merw
