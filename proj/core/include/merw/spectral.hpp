#pragma once

#include <cstdint>
#include <vector>

#include "merw/amplitude_field.hpp"
#include "merw/step_matrix.hpp"

namespace merw {

/// One eigenpair of the step matrix. The eigenvector has unit Euclidean norm
/// and canonical sign (largest-magnitude component positive); components on
/// structurally empty rows are exactly zero.
struct SpectralPair {
  double lambda = 0.0;
  AmplitudeField vector;
  int index = 0;  // 0 = dominant
};

/// Eigenpairs in descending eigenvalue order, pairwise orthonormal.
/// `degenerate` is set when two adjacent eigenvalues (including the first one
/// past the requested count) coincide within the solve tolerance; bases inside
/// such clusters are canonicalized deterministically.
struct SpectralBasis {
  std::vector<SpectralPair> pairs;
  bool degenerate = false;

  const SpectralPair& operator[](std::size_t i) const { return pairs[i]; }
  std::size_t size() const { return pairs.size(); }
};

inline constexpr double kDefaultTol = 1e-12;
inline constexpr std::int64_t kDefaultMaxIter = 1'000'000;

/// Perron-Frobenius pair via shifted power iteration. Operating with
/// M + c*1 (c = max row sum) defeats the +-lambda0 oscillation of bipartite
/// lattices; iterates from a positive start stay elementwise non-negative, so
/// the returned vector is non-negative by construction.
///
/// Requires a connected support; throws on an all-zero matrix, a disconnected
/// support, or non-convergence (the error message carries the last residual).
SpectralPair dominant_eigenpair(const StepMatrix& m, double tol = kDefaultTol,
                                std::int64_t max_iter = kDefaultMaxIter);

/// First k eigenpairs via deflated shifted power iteration.
SpectralBasis top_k_eigenpairs(const StepMatrix& m, int k, double tol = kDefaultTol,
                               std::int64_t max_iter = kDefaultMaxIter);

/// Full spectrum through a dense symmetric solve; the independent reference
/// for the iterative path. Guarded to <= 10^4 sites.
SpectralBasis dense_oracle(const StepMatrix& m);

}  // namespace merw
