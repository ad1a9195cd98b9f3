#pragma once

#include <functional>
#include <span>
#include <string>

namespace merw {

/// Dimensionless potential V(x)/mc^2 as a continuous evaluator.
///
/// The evaluator must be defined at all site coordinates and at all mid-edge
/// points x +- d/2; the mid-point rule samples between sites. Regularizing
/// singularities is the caller's duty (see coulomb_potential).
struct Potential {
  std::function<double(std::span<const double>)> evaluator;
  std::string description = "custom";

  double operator()(std::span<const double> x) const { return evaluator(x); }
};

Potential zero_potential();

/// V/mc^2 = (1/2) * omega^2 * |x|^2
Potential harmonic_potential(double omega);

/// Softened Coulomb, V/mc^2 = -alpha / max(r, r_cut).
Potential coulomb_potential(double alpha, double r_cut);

/// Parses a preset name: "zero", "harmonic:<omega>", "coulomb:<alpha>[:<r_cut>]".
/// A coulomb preset without an explicit r_cut uses `default_r_cut`
/// (conventionally 2 * delta of the lattice it will run on).
Potential parse_potential(const std::string& name, double default_r_cut);

}  // namespace merw
