#include <doctest.h>

#include <cmath>

#include "merw/lattice.hpp"

using namespace merw;

TEST_CASE("site coordinates follow (n - N/2) * delta") {
  LatticeSpec spec{1, 32, 1.0, Boundary::HardWall};

  CHECK(site_coords(spec, 16)[0] == doctest::Approx(0.0).epsilon(0.0));
  CHECK(site_coords(spec, 0)[0] == doctest::Approx(-16.0).epsilon(0.0));
  CHECK(site_coords(spec, 32)[0] == doctest::Approx(16.0).epsilon(0.0));

  LatticeSpec spec2{2, 4, 0.5, Boundary::HardWall};
  int n[] = {1, 3};
  Site s = site_index(spec2, n);
  auto x = site_coords(spec2, s);
  CHECK(x[0] == doctest::Approx(-0.5));
  CHECK(x[1] == doctest::Approx(0.5));
}

TEST_CASE("site indexing is a bijection") {
  LatticeSpec spec{3, 4, 1.0, Boundary::HardWall};
  std::vector<int> n(3);
  for (Site s = 0; s < spec.total_sites(); ++s) {
    site_unindex(spec, s, n);
    CHECK(site_index(spec, n) == s);
  }
  CHECK(spec.total_sites() == 125);
}

TEST_CASE("out-of-range site index throws") {
  LatticeSpec spec{1, 8, 1.0, Boundary::HardWall};
  CHECK_THROWS_AS(site_coords(spec, 9), std::out_of_range);
  CHECK_THROWS_AS(site_coords(spec, -1), std::out_of_range);
}

TEST_CASE("periodic lattices wrap, hard walls do not") {
  LatticeSpec ring{1, 8, 1.0, Boundary::Periodic};
  CHECK(ring.total_sites() == 8);
  CHECK(neighbor_site(ring, 7, 0, +1) == 0);
  CHECK(neighbor_site(ring, 0, 0, -1) == 7);

  LatticeSpec box{1, 8, 1.0, Boundary::HardWall};
  CHECK(box.total_sites() == 9);
  CHECK(neighbor_site(box, 8, 0, +1) == -1);
  CHECK(is_boundary_site(box, 0));
  CHECK(is_boundary_site(box, 8));
  CHECK(!is_boundary_site(box, 4));
}

TEST_CASE("bad specs are rejected") {
  CHECK_THROWS_AS(LatticeSpec({0, 8, 1.0, Boundary::HardWall}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec({1, 0, 1.0, Boundary::HardWall}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec({1, 8, -1.0, Boundary::HardWall}).validate(), std::invalid_argument);
}

TEST_CASE("parity alternates between neighbours") {
  LatticeSpec spec{2, 6, 1.0, Boundary::HardWall};
  for (Site s = 0; s < spec.total_sites(); ++s)
    for (int d = 0; d < 2; ++d) {
      Site q = neighbor_site(spec, s, d, +1);
      if (q >= 0) CHECK(site_parity(spec, s) != site_parity(spec, q));
    }
}
