#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "merw/lattice.hpp"
#include "merw/potential.hpp"

namespace merw {

/// Symmetric non-negative nearest-neighbour step operator on a cubic lattice.
///
/// Stored in CSR form with both orientations of every edge sharing one weight
/// value, so M(x,y) == M(y,x) holds bit-exactly. Hard-wall boundary sites keep
/// their place in the index space but have structurally empty rows.
/// Immutable after construction; matrix-vector products are safe to share
/// across threads.
class StepMatrix {
 public:
  StepMatrix() = default;
  StepMatrix(LatticeSpec spec, std::vector<Site> row_offsets, std::vector<Site> cols,
             std::vector<double> weights);

  const LatticeSpec& lattice() const { return spec_; }
  Site n_sites() const { return static_cast<Site>(row_offsets_.size()) - 1; }
  std::size_t n_entries() const { return cols_.size(); }

  /// Stored weight, or 0 for a structurally absent pair.
  double entry(Site x, Site y) const;

  std::span<const Site> row_cols(Site x) const;
  std::span<const double> row_weights(Site x) const;
  int degree(Site x) const { return static_cast<int>(row_offsets_[x + 1] - row_offsets_[x]); }

  double row_sum(Site x) const;
  double max_row_sum() const;

  /// y = M v. Deterministic (fixed summation order).
  void apply(std::span<const double> v, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> v) const;

  /// Sites with at least one incident nonzero weight.
  std::vector<char> support_mask() const;

  /// True if all support sites form one connected component.
  bool support_connected() const;

  /// Copy with the given sites turned into walls (rows and columns zeroed).
  StepMatrix with_blocked_sites(std::span<const Site> sites) const;

  /// Text dump: "i j w" triples, one per line, sorted by (i, j), weights with
  /// 17 significant digits. Includes both orientations of every edge.
  void dump(std::ostream& os) const;

 private:
  LatticeSpec spec_;
  std::vector<Site> row_offsets_;
  std::vector<Site> cols_;
  std::vector<double> weights_;
};

/// Free-box step matrix: weight 1 between nearest neighbours, zero rows at
/// hard walls. Periodic lattices connect all neighbour pairs.
StepMatrix build_box_step_matrix(const LatticeSpec& spec);

/// Mid-point rule: M(x, x+d) = exp(-V(x + d/2)), with the boundary policy of
/// the free box. Both orientations of an edge read the same mid-point, so the
/// result is symmetric by construction. Throws if V is not finite at a
/// sampled mid-point, naming the offending edge.
StepMatrix build_potential_step_matrix(const LatticeSpec& spec, const Potential& pot);

}  // namespace merw
