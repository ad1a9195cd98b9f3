#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace merw {

using Site = std::int64_t;

enum class Boundary { HardWall, Periodic };

/// Geometry of a D-dimensional cubic lattice.
///
/// Hard-wall lattices have N+1 sites per dimension, indexed n = 0..N, with
/// coordinates x = (n - N/2) * delta; the outermost sites are the walls.
/// Periodic lattices have N sites per dimension with wraparound.
/// Lengths are measured in reduced Compton wavelengths (hbar = m = c = 1).
struct LatticeSpec {
  int dims = 1;
  int sites_n = 32;      // the N of the coordinate formula
  double delta = 1.0;    // lattice spacing
  Boundary boundary = Boundary::HardWall;

  int sites_per_dim() const {
    return boundary == Boundary::HardWall ? sites_n + 1 : sites_n;
  }
  Site total_sites() const;
  double extent() const { return sites_n * delta; }  // L = N * delta

  void validate() const;  // throws std::invalid_argument on a bad spec
};

/// Row-major linearization: the last dimension varies fastest.
Site site_index(const LatticeSpec& spec, std::span<const int> n);
void site_unindex(const LatticeSpec& spec, Site index, std::span<int> n_out);

/// x_d = (n_d - N/2) * delta, one entry per dimension.
std::vector<double> site_coords(const LatticeSpec& spec, Site index);
void site_coords(const LatticeSpec& spec, Site index, std::span<double> out);

/// True if any per-dimension index sits on the wall (hard-wall lattices only).
bool is_boundary_site(const LatticeSpec& spec, Site index);

/// Neighbour of `index` one step along dimension `dim` (direction +/-1).
/// Returns -1 when the step leaves a hard-wall lattice.
Site neighbor_site(const LatticeSpec& spec, Site index, int dim, int direction);

/// Lattice-index parity of a site (sum of per-dimension indices mod 2).
/// On bipartite lattices a point-started walk alternates between parities.
int site_parity(const LatticeSpec& spec, Site index);

std::string describe(const LatticeSpec& spec);

}  // namespace merw
