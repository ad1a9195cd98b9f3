#pragma once

#include <cstdint>
#include <vector>

#include "merw/lattice.hpp"

namespace merw {

/// Real-valued path-count amplitude over lattice sites, signed only for
/// excited states and mixtures. `log_scale` accumulates the logarithm of the
/// factors divided out during evolution to keep values in range; the physical
/// amplitude is values[x] * exp(log_scale).
struct AmplitudeField {
  LatticeSpec lattice;
  std::vector<double> values;
  std::int64_t tau = 0;
  double log_scale = 0.0;

  Site peak_site() const;        // site of the largest |value|, lowest index on ties
  double max_abs() const;
  double l2_norm() const;
  void normalize_l2();           // rescales to unit Euclidean norm, resets log_scale
  bool all_finite() const;
};

/// Probability distribution over sites: non-negative, sums to 1.
struct ProbabilityField {
  LatticeSpec lattice;
  std::vector<double> values;

  double sum() const;
};

}  // namespace merw
