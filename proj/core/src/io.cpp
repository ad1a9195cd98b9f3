#include "merw/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace merw {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  ensure_parent_dir(path);
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

}  // namespace

std::string format_g17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void ensure_parent_dir(const std::filesystem::path& path) {
  auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void write_field_csv(const std::filesystem::path& path, const AmplitudeField& field) {
  auto os = open_out(path);
  os << "site_index";
  for (int d = 0; d < field.lattice.dims; ++d) os << ",x" << d;
  os << ",value\n";
  std::vector<double> x(field.lattice.dims);
  for (Site s = 0; s < static_cast<Site>(field.values.size()); ++s) {
    site_coords(field.lattice, s, x);
    os << s;
    for (double xi : x) os << ',' << format_g17(xi);
    os << ',' << format_g17(field.values[s]) << '\n';
  }
}

void write_density_csv(const std::filesystem::path& path, const ProbabilityField& rho) {
  AmplitudeField tmp{rho.lattice, rho.values, 0, 0.0};
  write_field_csv(path, tmp);
}

void write_landscape_csv(const std::filesystem::path& path, const LandscapeGrid& grid) {
  auto os = open_out(path);
  os << "alpha,beta,H,valid\n";
  for (std::size_t ia = 0; ia < grid.alphas.size(); ++ia)
    for (std::size_t ib = 0; ib < grid.betas.size(); ++ib) {
      os << format_g17(grid.alphas[ia]) << ',' << format_g17(grid.betas[ib]) << ','
         << (grid.ok(ia, ib) ? format_g17(grid.at(ia, ib)) : "nan") << ','
         << (grid.ok(ia, ib) ? 1 : 0) << '\n';
    }
}

void write_entropy_growth_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<std::int64_t, double>>& series) {
  auto os = open_out(path);
  os << "k,H\n";
  for (const auto& [k, h] : series) os << k << ',' << format_g17(h) << '\n';
}

void write_spectrum_csv(const std::filesystem::path& path, const EnergySpectrum& spectrum) {
  auto os = open_out(path);
  os << "i,lambda,energy_mc2\n";
  for (std::size_t i = 0; i < spectrum.levels.size(); ++i)
    os << i << ',' << format_g17(spectrum.lambdas[i]) << ',' << format_g17(spectrum.levels[i])
       << '\n';
}

void write_step_matrix(const std::filesystem::path& path, const StepMatrix& m) {
  auto os = open_out(path);
  m.dump(os);
}

}  // namespace merw
