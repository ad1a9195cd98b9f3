#include "merw/lattice.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace merw {

Site LatticeSpec::total_sites() const {
  Site total = 1;
  for (int d = 0; d < dims; ++d) total *= sites_per_dim();
  return total;
}

void LatticeSpec::validate() const {
  if (dims < 1) throw std::invalid_argument("lattice: dims must be >= 1");
  if (sites_n < 1) throw std::invalid_argument("lattice: N must be >= 1");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("lattice: spacing must be finite and > 0");
}

Site site_index(const LatticeSpec& spec, std::span<const int> n) {
  const int k = spec.sites_per_dim();
  Site idx = 0;
  for (int d = 0; d < spec.dims; ++d) {
    if (n[d] < 0 || n[d] >= k) throw std::out_of_range("site_index: component out of range");
    idx = idx * k + n[d];
  }
  return idx;
}

void site_unindex(const LatticeSpec& spec, Site index, std::span<int> n_out) {
  if (index < 0 || index >= spec.total_sites())
    throw std::out_of_range("site_unindex: index out of range");
  const int k = spec.sites_per_dim();
  for (int d = spec.dims - 1; d >= 0; --d) {
    n_out[d] = static_cast<int>(index % k);
    index /= k;
  }
}

void site_coords(const LatticeSpec& spec, Site index, std::span<double> out) {
  std::vector<int> n(spec.dims);
  site_unindex(spec, index, n);
  const double half = spec.sites_n / 2.0;
  for (int d = 0; d < spec.dims; ++d) out[d] = (n[d] - half) * spec.delta;
}

std::vector<double> site_coords(const LatticeSpec& spec, Site index) {
  std::vector<double> x(spec.dims);
  site_coords(spec, index, x);
  return x;
}

bool is_boundary_site(const LatticeSpec& spec, Site index) {
  if (spec.boundary != Boundary::HardWall) return false;
  std::vector<int> n(spec.dims);
  site_unindex(spec, index, n);
  for (int d = 0; d < spec.dims; ++d)
    if (n[d] == 0 || n[d] == spec.sites_n) return true;
  return false;
}

Site neighbor_site(const LatticeSpec& spec, Site index, int dim, int direction) {
  if (dim < 0 || dim >= spec.dims) throw std::out_of_range("neighbor_site: bad dimension");
  std::vector<int> n(spec.dims);
  site_unindex(spec, index, n);
  const int k = spec.sites_per_dim();
  int m = n[dim] + direction;
  if (spec.boundary == Boundary::Periodic) {
    m = ((m % k) + k) % k;
  } else if (m < 0 || m >= k) {
    return -1;
  }
  n[dim] = m;
  return site_index(spec, n);
}

int site_parity(const LatticeSpec& spec, Site index) {
  std::vector<int> n(spec.dims);
  site_unindex(spec, index, n);
  long sum = 0;
  for (int d = 0; d < spec.dims; ++d) sum += n[d];
  return static_cast<int>(sum & 1);
}

std::string describe(const LatticeSpec& spec) {
  std::ostringstream os;
  os << spec.dims << "D " << (spec.boundary == Boundary::HardWall ? "hard-wall" : "periodic")
     << " lattice, N=" << spec.sites_n << ", delta=" << spec.delta;
  return os.str();
}

}  // namespace merw
