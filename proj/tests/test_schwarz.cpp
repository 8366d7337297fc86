#include "support.hpp"

#include "holoflow/dim2.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/sampling.hpp"
#include "holoflow/schwarz.hpp"

#include <numbers>

using namespace holoflow;
using test::hp;

namespace {

/// Element of PSL2(R) fixing the finite boundary point r: scaling by s about r.
Mobius scaling_about(double r, double s) {
  return Mobius::translation(r) * Mobius::scaling(s) * Mobius::translation(-r);
}

double max_defect_on(const HoloMap& f, const std::vector<PolyPoint>& pts) {
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, std::abs(schwarz_defect(f, p).defect));
  return worst;
}

}  // namespace

TEST_SUITE("schwarz") {
  TEST_CASE("defect examples") {
    for (const auto& p : halton_points(3, 50, Domain::HalfPlane))
      CHECK(std::abs(schwarz_defect(mean_map(3), p).defect) <= 1e-12);

    const DefectSample s = schwarz_defect(h_r(0.0), hp({kI, 2.0 * kI}));
    CHECK(s.gradient_terms[0] == doctest::Approx(8.0 / 9.0));
    CHECK(s.gradient_terms[1] == doctest::Approx(4.0 / 9.0));
    CHECK(std::abs(s.defect) <= 1e-14);

    CHECK(schwarz_defect(example13(0.5), hp({kI, 1.0 + kI})).defect > 0.01);
  }

  TEST_CASE("quadrature route agrees with the exact route") {
    for (const auto& p : halton_points(2, 50, Domain::HalfPlane)) {
      const double a = schwarz_defect(example13(0.3), p).defect;
      const double b = schwarz_defect(example13(0.3), p, DerivativeRoute::Cauchy).defect;
      CHECK(std::abs(a - b) <= 1e-8);
    }
  }

  TEST_CASE("one-variable disk defect") {
    const HoloMap id = coordinate(0, 1, Domain::Disk);
    CHECK(std::abs(disk_defect(id, 0.3)) <= 1e-15);
    CHECK(disk_defect(constant(0.0, 1, Domain::Disk), 0.0) == doctest::Approx(1.0));
    const HoloMap b = post_compose(ComplexMobius::blaschke(0.5), id, Domain::Disk);
    CHECK(std::abs(disk_defect(b, 0.2)) <= 1e-15);
    CHECK(disk_defect(id * id, 0.5) > 0.1);
  }

  TEST_CASE("extreme disks of h_inf") {
    const HoloMap h = h_r(Extended::infinity());
    CHECK(extreme_disk_check(h, {{Mobius::identity(), Mobius::translation(1.5) * Mobius::scaling(2.0)}}));
    CHECK(extreme_disk_check(h, {{Mobius::identity(), Mobius::scaling(0.3)}}));
    // (z - 1/z)/2 has vanishing derivative at i.
    CHECK_FALSE(extreme_disk_check(h, {{Mobius::identity(), Mobius(0.0, -1.0, 1.0, 0.0)}}));
  }

  TEST_CASE("extreme disks of h_r are (phi, phi o sigma) with phi, sigma in Stab(r)") {
    for (double r : {-2.0, 0.0, 1.5}) {
      const Mobius phi = scaling_about(r, 2.0) * Mobius::unipotent(Extended(r), 0.3);
      const Mobius sigma = Mobius::unipotent(Extended(r), -0.8) * scaling_about(r, 0.5);
      const BalancedDisk disk{{phi, phi * sigma}};
      INFO("r = " << r);
      CHECK(extreme_disk_check(h_r(r), disk));
      // A component that moves r breaks extremality.
      CHECK_FALSE(extreme_disk_check(h_r(r), {{phi, Mobius::translation(1.0) * phi}}));

      // Consistency: zero defect along the extreme disk.
      for (Complex z : {Complex(0.0, 1.0), Complex(-1.0, 0.3), Complex(2.0, 3.0)})
        CHECK(std::abs(schwarz_defect(h_r(r), balanced_point(h_r(r), disk, z)).defect) <= 1e-9);
    }
  }

  TEST_CASE("convex blends of extremal maps are not everywhere extremal") {
    const auto grid = test::h2_grid();
    CHECK(max_defect_on(h_r(0.0), grid) <= 1e-9);
    CHECK(max_defect_on(h_r(Extended::infinity()), grid) <= 1e-9);
    for (double t : {0.25, 0.5, 0.75}) {
      double best = 0.0;
      for (const auto& p : grid) best = std::max(best, schwarz_defect(example13(t), p).defect);
      CHECK(best > 1e-3);
    }
  }

  TEST_CASE("blends stay extremal on every D_a") {
    for (double t : {0.1, 0.5, 0.9}) {
      const HoloMap f = example13(t);
      for (double a : {0.2, 1.0, 3.0}) {
        CHECK(extreme_disk_check(f, {{Mobius::identity(), Mobius::scaling(a)}}));
        for (Complex z : {Complex(0.0, 1.0), Complex(-2.0, 0.5), Complex(1.0, 4.0)})
          CHECK(std::abs(schwarz_defect(f, hp({z, a * z})).defect) <= 1e-9);
      }
    }
  }

  TEST_CASE("disk-model defect") {
    for (const auto& p : halton_points(2, 200, Domain::Disk)) {
      CHECK(std::abs(schwarz_defect(g_nu(0.9), p).defect) <= 1e-9);
      CHECK(schwarz_defect(am_map(SchurParam::theta(coordinate(0, 2, Domain::Disk))), p).defect >= -1e-9);
    }
  }
}
