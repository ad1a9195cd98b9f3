#pragma once

#include <functional>
#include <span>
#include <vector>

#include "merw/amplitude_field.hpp"
#include "merw/potential.hpp"
#include "merw/spectral.hpp"
#include "merw/step_matrix.hpp"

namespace merw {

/// E_i = (1 - lambda_i / 2D) mc^2. Higher entropy (larger lambda) means lower
/// energy, so descending lambda order is ascending energy order.
double energy_from_eigenvalue(double lambda, int dims);

struct EnergySpectrum {
  std::vector<double> levels;   // E_i in mc^2 units, ascending
  std::vector<double> lambdas;  // matching eigenvalues, descending
  int dims = 1;
};

EnergySpectrum energies_from_basis(const SpectralBasis& basis, int dims);

/// Presentation helper: energies in electron volts for an electron mass.
double to_electron_volts(double energy_mc2);

/// Product-of-cosines continuum ground state sampled at the sites of a
/// hard-wall box, unit norm: psi(x) ∝ prod_d cos(pi x_d / L), L = N delta.
AmplitudeField box_ground_reference(const LatticeSpec& spec);

/// Step calibration in natural units (hbar = m = c = 1): a walk that covers n
/// reduced Compton wavelengths per coordinate in n^2 reduced Compton times.
struct DiffusionCalibration {
  double delta_t = 1.0;        // time step, units of t_c
  double delta_sigma2 = 1.0;   // per-step per-coordinate variance, units of lambda_c^2
  double diffusion_constant = 0.5;  // D_d = delta_sigma2 / 2
};

DiffusionCalibration diffusion_calibration(double n = 1.0);

/// A smooth test function with analytic first and second derivatives.
struct SmoothField {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  std::function<double(std::span<const double>)> laplacian;  // trace of the Hessian
};

SmoothField smooth_zero();
SmoothField smooth_linear(std::vector<double> slope);
SmoothField smooth_harmonic(double omega);
SmoothField smooth_gaussian(double sigma);

/// "zero", "linear:<slope>" (same slope per dimension), "harmonic:<omega>",
/// "gaussian:<sigma>".
SmoothField parse_smooth_field(const std::string& name, int dims);

/// max_x |LHS_exact - RHS_2| for each spacing, where LHS sums the exact
/// neighbour terms psi(x +- d) exp(V(x) - V(x +- d/2)) and RHS_2 is the
/// second-order operator expansion 2D psi + d^2 [Lap - grad V . grad
/// - (1/4) Lap V + (1/4)|grad V|^2] psi. The fitted log-log slope measures
/// the expansion order (the symmetric sum leaves an even remainder, so
/// smooth inputs give slopes near 4).
struct ExpansionOrderReport {
  std::vector<double> deltas;
  std::vector<double> max_residuals;
  double fitted_slope = 0.0;
};

ExpansionOrderReport expansion_residual(int dims, const SmoothField& pot, const SmoothField& field,
                                        std::span<const double> deltas,
                                        std::span<const std::vector<double>> probes = {});

std::vector<std::vector<double>> default_probe_points(int dims);

/// Expectation values of the second-order correction operators in a lattice
/// state, mc^2 units. Lattice derivatives are 3-point central differences
/// (hard-wall fields continue as zero past the walls); derivatives of the
/// potential sample the evaluator at the same spacing.
struct CorrectionBreakdown {
  double v2_half = 0.0;           // <V^2 / 2mc^2>
  double v_laplace_half = 0.0;    // <(hbar^2/2m^2c^2) V Lap>, literal non-symmetric form
  double grad_v_grad_half = 0.0;  // <(hbar^2/2m^2c^2) grad V . grad>
  double darwin = 0.0;            // <(hbar^2/8m^2c^2) Lap V>
  double total = 0.0;             // -v2_half + v_laplace_half + grad_v_grad_half + darwin
};

CorrectionBreakdown correction_expectations(const AmplitudeField& state, const Potential& pot,
                                            const LatticeSpec& spec);

/// Cross-check of MERW energies against an independent lattice Schrodinger
/// solve (-1/2 Lap_disc + V on sites, dense solve on the interior).
struct SchrodingerComparison {
  std::vector<double> merw_levels;
  std::vector<double> schrodinger_levels;
  std::vector<double> abs_gaps;
  std::vector<double> rel_gaps;
  double mean_abs_potential = 0.0;  // <|V|> in the MERW ground state
  bool scale_warning = false;       // set when <|V|> > 0.1 mc^2
};

SchrodingerComparison order_alpha2_check(const LatticeSpec& spec, const Potential& pot,
                                         int n_levels, double tol = kDefaultTol);

/// Lowest eigenvalues of -1/2 Lap_disc + V on the hard-wall interior.
std::vector<double> schrodinger_lattice_levels(const LatticeSpec& spec, const Potential& pot,
                                               int n_levels);

}  // namespace merw
