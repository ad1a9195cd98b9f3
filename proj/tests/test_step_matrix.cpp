#include <doctest.h>

#include <cmath>
#include <sstream>

#include "merw/step_matrix.hpp"

using namespace merw;

namespace {

LatticeSpec box1d(int n) { return {1, n, 1.0, Boundary::HardWall}; }

}  // namespace

TEST_CASE("free box: tridiagonal on the interior, zero rows at the walls") {
  auto m = build_box_step_matrix(box1d(4));
  CHECK(m.entry(1, 2) == 1.0);
  CHECK(m.entry(2, 3) == 1.0);
  CHECK(m.entry(2, 1) == 1.0);
  CHECK(m.entry(0, 1) == 0.0);
  CHECK(m.entry(3, 4) == 0.0);
  CHECK(m.row_sum(0) == 0.0);
  CHECK(m.row_sum(4) == 0.0);
  CHECK(m.degree(0) == 0);
}

TEST_CASE("free ring: circulant with two unit entries per site") {
  auto m = build_box_step_matrix({1, 8, 1.0, Boundary::Periodic});
  for (Site s = 0; s < 8; ++s) {
    CHECK(m.degree(s) == 2);
    CHECK(m.row_sum(s) == 2.0);
  }
  CHECK(m.entry(7, 0) == 1.0);
}

TEST_CASE("2D box: interior site has four unit neighbours") {
  LatticeSpec spec{2, 4, 1.0, Boundary::HardWall};
  auto m = build_box_step_matrix(spec);
  int n[] = {2, 2};
  Site center = site_index(spec, n);
  CHECK(m.degree(center) == 4);
  CHECK(m.row_sum(center) == 4.0);
}

TEST_CASE("periodic free lattice: every row sums to exactly 2D") {
  LatticeSpec spec{2, 6, 1.0, Boundary::Periodic};
  auto m = build_box_step_matrix(spec);
  for (Site s = 0; s < spec.total_sites(); ++s) CHECK(m.row_sum(s) == 4.0);
}

TEST_CASE("N < 2 leaves no interior and is rejected") {
  CHECK_THROWS_AS(build_box_step_matrix(box1d(1)), std::invalid_argument);
}

TEST_CASE("symmetry is bit-exact") {
  LatticeSpec spec{2, 8, 0.7, Boundary::HardWall};
  auto pot = harmonic_potential(0.3);
  auto m = build_potential_step_matrix(spec, pot);
  for (Site x = 0; x < spec.total_sites(); ++x) {
    auto cols = m.row_cols(x);
    auto w = m.row_weights(x);
    for (std::size_t p = 0; p < cols.size(); ++p) CHECK(m.entry(cols[p], x) == w[p]);
  }
}

TEST_CASE("mid-point rule: V = 0 reproduces the free box bit-exactly") {
  auto a = build_box_step_matrix(box1d(16));
  auto b = build_potential_step_matrix(box1d(16), zero_potential());
  for (Site x = 0; x < 17; ++x)
    for (Site y = 0; y < 17; ++y) CHECK(a.entry(x, y) == b.entry(x, y));
}

TEST_CASE("mid-point rule: harmonic weight between x=0 and x=1") {
  // V(1/2) = (1/2) omega^2 (1/2)^2 with omega = 0.02
  auto spec = box1d(256);
  auto m = build_potential_step_matrix(spec, harmonic_potential(0.02));
  Site x0 = 128, x1 = 129;
  CHECK(site_coords(spec, x0)[0] == 0.0);
  CHECK(m.entry(x0, x1) == doctest::Approx(std::exp(-5e-5)).epsilon(1e-15));
}

TEST_CASE("constant potential scales every interior weight by exp(-c0)") {
  auto spec = box1d(12);
  const double c0 = 0.37;
  Potential constant{[&](std::span<const double>) { return c0; }, "const"};
  auto m0 = build_box_step_matrix(spec);
  auto mc = build_potential_step_matrix(spec, constant);
  for (Site x = 0; x < spec.total_sites(); ++x) {
    auto cols = m0.row_cols(x);
    for (Site y : cols)
      CHECK(mc.entry(x, y) == doctest::Approx(std::exp(-c0) * m0.entry(x, y)).epsilon(1e-15));
  }
}

TEST_CASE("non-finite potential at a mid-point names the edge") {
  auto spec = box1d(8);
  Potential bad{[](std::span<const double> x) { return 1.0 / (x[0] - 0.5); }, "pole"};
  CHECK_THROWS_WITH_AS(build_potential_step_matrix(spec, bad),
                       doctest::Contains("mid-point"), std::invalid_argument);
}

TEST_CASE("blocked sites become walls") {
  auto m = build_box_step_matrix(box1d(8));
  Site blocked[] = {4};
  auto mb = m.with_blocked_sites(blocked);
  CHECK(mb.row_sum(4) == 0.0);
  CHECK(mb.entry(3, 4) == 0.0);
  CHECK(mb.entry(4, 5) == 0.0);
  CHECK(mb.entry(2, 3) == 1.0);
  CHECK(!mb.support_connected());
  CHECK(m.support_connected());
}

TEST_CASE("matrix dump is sorted triples with 17 significant digits") {
  auto m = build_box_step_matrix(box1d(4));
  std::ostringstream os;
  m.dump(os);
  CHECK(os.str() ==
        "1 2 1\n"
        "2 1 1\n"
        "2 3 1\n"
        "3 2 1\n");
}

TEST_CASE("potential presets parse") {
  CHECK(parse_potential("zero", 1.0).description == "zero");
  auto h = parse_potential("harmonic:0.25", 1.0);
  double x[] = {2.0};
  CHECK(h(x) == doctest::Approx(0.5 * 0.0625 * 4.0));
  auto c = parse_potential("coulomb:0.2:2.0", 1.0);
  double y[] = {0.5};
  CHECK(c(y) == doctest::Approx(-0.1));  // inside the softening radius
  auto c2 = parse_potential("coulomb:0.2", 3.0);  // r_cut falls back to the default
  CHECK(c2(y) == doctest::Approx(-0.2 / 3.0));
  CHECK_THROWS_AS(parse_potential("woods-saxon:1", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(parse_potential("harmonic", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(parse_potential("coulomb:0.2:0", 1.0), std::invalid_argument);
}
