#pragma once

#include <string>
#include <vector>

namespace merw::acceptance {

/// Tolerances and sizes of the verification suite, pinned to their contract
/// values. Exposed as plain fields so a harness can tamper with one and watch
/// the matching criterion fail by name.
struct Config {
  // 1: Gaussian transient, 1D 33 sites, tau = 16
  double c1_max_dev = 0.05;
  // 2: cosine ground state, tau = 256
  double c2_profile_linf = 1e-2;
  double c2_cosine_linf = 5e-3;
  // 3: iterative vs dense spectra, i = 0..2
  double c3_lambda_rel = 1e-8;
  double c3_alignment = 1e-8;
  // 4: Born rule / stationarity
  double c4_density_sum = 1e-12;
  double c4_invariance = 1e-10;
  double c4_iterated_rowsum = 1e-10;
  int c4_max_power = 64;
  double c4_detailed_balance = 1e-12;
  // 5: H = lb(lambda0)
  double c5_identity = 1e-10;
  // 6: H(k) = k H
  double c6_telescoping = 1e-9;
  int c6_max_k = 8;
  // 7: transient entropy growth
  double c7_final_offset = 1e-3;
  // 8: landscape structure, 65-site box
  double c8_radius2_ground = 0.06;
  int c8_grid = 41;
  // 9: energy mapping and 1/N^2 scaling
  double c9_rel_gap = 1e-3;
  double c9_slope_window = 0.1;
  // 10: harmonic potential, omega = 0.02, N = 512
  double c10_rel = 0.02;
  // 11: expansion order
  double c11_min_slope = 2.9;
  // 12: Darwin coefficient
  double c12_coefficient = 1e-12;
  double c12_harmonic = 1e-10;
  // 13: virial cancellation, 3D softened Coulomb
  double c13_rel = 0.05;
  int c13_sites_n = 48;
  double c13_alpha = 0.2;
  double c13_rcut_in_delta = 2.5;
  // 14: node non-crossing
  double c14_node_floor = 1e-10;
  double c14_cancellation = 1e-12;

  // wall-clock limits (seconds) where the contract states one
  double limit_c1 = 1.0, limit_c2 = 1.0, limit_c3 = 10.0, limit_c7 = 1.0, limit_c8 = 30.0,
         limit_c10 = 30.0, limit_c13 = 300.0;
};

struct Measurement {
  std::string name;
  double value = 0.0;
  double bound = 0.0;     // the tolerance the value was held against
  bool satisfied = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<Measurement> measurements;
  std::string error;  // non-empty when the criterion threw
};

/// Runs criteria `ids` (all 14 when empty) and returns one result each.
std::vector<CriterionResult> run(const Config& config = {}, const std::vector<int>& ids = {});

/// One line per criterion: "[PASS|FAIL] <id> <name> (<seconds>s)".
std::string format_line(const CriterionResult& r);

}  // namespace merw::acceptance
