#include "merw/step_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace merw {
namespace {

struct Edge {
  Site a, b;
  double w;
};

StepMatrix from_edges(const LatticeSpec& spec, std::vector<Edge> edges) {
  const Site n = spec.total_sites();
  std::vector<Site> counts(n + 1, 0);
  for (const Edge& e : edges) {
    ++counts[e.a + 1];
    ++counts[e.b + 1];
  }
  for (Site i = 0; i < n; ++i) counts[i + 1] += counts[i];
  std::vector<Site> offsets = counts;
  std::vector<Site> cols(edges.size() * 2);
  std::vector<double> weights(edges.size() * 2);
  std::vector<Site> fill(n, 0);
  for (const Edge& e : edges) {
    Site pa = offsets[e.a] + fill[e.a]++;
    cols[pa] = e.b;
    weights[pa] = e.w;
    Site pb = offsets[e.b] + fill[e.b]++;
    cols[pb] = e.a;
    weights[pb] = e.w;
  }
  // sort columns within each row for deterministic dumps and lookups
  for (Site x = 0; x < n; ++x) {
    Site lo = offsets[x], hi = offsets[x + 1];
    std::vector<std::pair<Site, double>> row;
    row.reserve(hi - lo);
    for (Site p = lo; p < hi; ++p) row.emplace_back(cols[p], weights[p]);
    std::sort(row.begin(), row.end());
    for (Site p = lo; p < hi; ++p) {
      cols[p] = row[p - lo].first;
      weights[p] = row[p - lo].second;
    }
  }
  return StepMatrix(spec, std::move(offsets), std::move(cols), std::move(weights));
}

// Enumerates every lattice edge once, in its +direction orientation, and asks
// `weight(from, dim)` for the shared edge weight. Hard walls: only edges with
// both endpoints interior survive.
template <typename WeightFn>
std::vector<Edge> lattice_edges(const LatticeSpec& spec, WeightFn weight) {
  std::vector<Edge> edges;
  const Site n = spec.total_sites();
  for (Site a = 0; a < n; ++a) {
    if (is_boundary_site(spec, a)) continue;
    for (int d = 0; d < spec.dims; ++d) {
      Site b = neighbor_site(spec, a, d, +1);
      if (b < 0 || is_boundary_site(spec, b)) continue;
      if (spec.boundary == Boundary::Periodic && b < a) continue;  // wrap edge counted at the other end
      edges.push_back({a, b, weight(a, d)});
    }
  }
  return edges;
}

}  // namespace

StepMatrix::StepMatrix(LatticeSpec spec, std::vector<Site> row_offsets, std::vector<Site> cols,
                       std::vector<double> weights)
    : spec_(spec),
      row_offsets_(std::move(row_offsets)),
      cols_(std::move(cols)),
      weights_(std::move(weights)) {
  for (double w : weights_)
    if (!(w >= 0.0)) throw std::invalid_argument("StepMatrix: negative or non-finite weight");
}

double StepMatrix::entry(Site x, Site y) const {
  for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p)
    if (cols_[p] == y) return weights_[p];
  return 0.0;
}

std::span<const Site> StepMatrix::row_cols(Site x) const {
  return {cols_.data() + row_offsets_[x], static_cast<std::size_t>(row_offsets_[x + 1] - row_offsets_[x])};
}

std::span<const double> StepMatrix::row_weights(Site x) const {
  return {weights_.data() + row_offsets_[x],
          static_cast<std::size_t>(row_offsets_[x + 1] - row_offsets_[x])};
}

double StepMatrix::row_sum(Site x) const {
  double s = 0.0;
  for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p) s += weights_[p];
  return s;
}

double StepMatrix::max_row_sum() const {
  double m = 0.0;
  for (Site x = 0; x < n_sites(); ++x) m = std::max(m, row_sum(x));
  return m;
}

void StepMatrix::apply(std::span<const double> v, std::span<double> y) const {
  const Site n = n_sites();
  if (static_cast<Site>(v.size()) != n || static_cast<Site>(y.size()) != n)
    throw std::invalid_argument("StepMatrix::apply: dimension mismatch");
  for (Site x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p) acc += weights_[p] * v[cols_[p]];
    y[x] = acc;
  }
}

std::vector<double> StepMatrix::apply(std::span<const double> v) const {
  std::vector<double> y(v.size());
  apply(v, y);
  return y;
}

std::vector<char> StepMatrix::support_mask() const {
  std::vector<char> mask(n_sites(), 0);
  for (Site x = 0; x < n_sites(); ++x) {
    for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p) {
      if (weights_[p] > 0.0) {
        mask[x] = 1;
        break;
      }
    }
  }
  return mask;
}

bool StepMatrix::support_connected() const {
  const auto mask = support_mask();
  Site start = -1, n_support = 0;
  for (Site x = 0; x < n_sites(); ++x) {
    if (mask[x]) {
      if (start < 0) start = x;
      ++n_support;
    }
  }
  if (n_support == 0) return false;
  std::vector<char> seen(n_sites(), 0);
  std::vector<Site> stack{start};
  seen[start] = 1;
  Site reached = 1;
  while (!stack.empty()) {
    Site x = stack.back();
    stack.pop_back();
    for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p) {
      Site y = cols_[p];
      if (weights_[p] > 0.0 && !seen[y]) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  return reached == n_support;
}

StepMatrix StepMatrix::with_blocked_sites(std::span<const Site> sites) const {
  std::vector<char> blocked(n_sites(), 0);
  for (Site s : sites) {
    if (s < 0 || s >= n_sites()) throw std::out_of_range("with_blocked_sites: site out of range");
    blocked[s] = 1;
  }
  std::vector<Edge> edges;
  for (Site x = 0; x < n_sites(); ++x) {
    if (blocked[x]) continue;
    for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p) {
      Site y = cols_[p];
      if (y > x && !blocked[y]) edges.push_back({x, y, weights_[p]});
    }
  }
  return from_edges(spec_, std::move(edges));
}

void StepMatrix::dump(std::ostream& os) const {
  char buf[64];
  for (Site x = 0; x < n_sites(); ++x) {
    for (Site p = row_offsets_[x]; p < row_offsets_[x + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(x),
                    static_cast<long long>(cols_[p]), weights_[p]);
      os << buf;
    }
  }
}

StepMatrix build_box_step_matrix(const LatticeSpec& spec) {
  spec.validate();
  if (spec.boundary == Boundary::HardWall && spec.sites_n < 2)
    throw std::invalid_argument("build_box_step_matrix: N < 2 leaves no interior sites");
  auto edges = lattice_edges(spec, [](Site, int) { return 1.0; });
  return from_edges(spec, std::move(edges));
}

StepMatrix build_potential_step_matrix(const LatticeSpec& spec, const Potential& pot) {
  spec.validate();
  if (spec.boundary == Boundary::HardWall && spec.sites_n < 2)
    throw std::invalid_argument("build_potential_step_matrix: N < 2 leaves no interior sites");
  std::vector<double> mid(spec.dims);
  auto edges = lattice_edges(spec, [&](Site a, int d) {
    // Mid-point of the edge traversed in +d direction; the coordinate is not
    // wrapped on periodic lattices so both orientations share one sample.
    site_coords(spec, a, mid);
    mid[d] += 0.5 * spec.delta;
    double v = pot(mid);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "build_potential_step_matrix: potential not finite at mid-point of edge from site " << a
          << " (+" << d << " direction), V=" << v;
      throw std::invalid_argument(msg.str());
    }
    return std::exp(-v);
  });
  return from_edges(spec, std::move(edges));
}

}  // namespace merw
