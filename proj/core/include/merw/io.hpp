#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "merw/amplitude_field.hpp"
#include "merw/bridge.hpp"
#include "merw/entropy.hpp"

namespace merw {

/// Shortest round-trip decimal form at 17 significant digits, '.' separator,
/// locale-independent. All CSV output funnels through this.
std::string format_g17(double value);

void ensure_parent_dir(const std::filesystem::path& path);

/// CSV columns: site_index, x0..x{D-1}, value.
void write_field_csv(const std::filesystem::path& path, const AmplitudeField& field);
void write_density_csv(const std::filesystem::path& path, const ProbabilityField& rho);

/// CSV columns: alpha, beta, H, valid.
void write_landscape_csv(const std::filesystem::path& path, const LandscapeGrid& grid);

/// CSV columns: k, H.
void write_entropy_growth_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<std::int64_t, double>>& series);

/// CSV columns: i, lambda, energy_mc2.
void write_spectrum_csv(const std::filesystem::path& path, const EnergySpectrum& spectrum);

void write_step_matrix(const std::filesystem::path& path, const StepMatrix& m);

}  // namespace merw
