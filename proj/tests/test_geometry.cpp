#include "support.hpp"

#include "holoflow/geometry.hpp"
#include "holoflow/sampling.hpp"

#include <cmath>
#include <numbers>

using namespace holoflow;
using test::close;

TEST_SUITE("geometry") {
  TEST_CASE("PolyPoint enforces its domain") {
    CHECK_NOTHROW(test::hp({kI, 2.0 * kI}));
    CHECK_THROWS_AS(test::hp({kI, 0.0}), DomainError);
    CHECK_THROWS_AS(test::dp({0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(PolyPoint(CVector(0), Domain::Plane), DomainError);
    CHECK_NOTHROW(PolyPoint(CVector::Constant(3, -5.0), Domain::Plane));
  }

  TEST_CASE("mobius apply on interior and boundary points") {
    CHECK(Mobius::identity().apply(kI) == kI);
    CHECK(close(Mobius::translation(2.5).apply(kI), 2.5 + kI, 0.0));
    const Mobius g(2.0, 1.0, 1.0, 1.0);
    CHECK(g.apply(Extended::infinity()) == Extended(2.0));
    CHECK(g.apply(Extended(-1.0)).infinite);
    CHECK(Mobius(1, 0, 1, 1).apply(Extended(-1.0)).infinite);
  }

  TEST_CASE("PSL2 normalization") {
    const Mobius g(-2.0, -4.0, 0.0, -3.0);
    CHECK(g.a() * g.d() - g.b() * g.c() == doctest::Approx(1.0));
    CHECK(g.d() > 0.0);
    CHECK_THROWS_AS(Mobius(1.0, 0.0, 0.0, -1.0), DomainError);
  }

  TEST_CASE("unipotent elements fix exactly one boundary point") {
    const Mobius g(1, 1, 0, 1);
    CHECK(g.is_unipotent());
    const auto fixed = g.boundary_fixed_points();
    REQUIRE(fixed.size() == 1);
    CHECK(fixed[0].infinite);

    const Mobius u = Mobius::unipotent(Extended(2.0), 0.7);
    CHECK(u.is_unipotent());
    const auto pu = u.boundary_fixed_points();
    REQUIRE(pu.size() == 1);
    CHECK(pu[0].value.real() == doctest::Approx(2.0));
    CHECK(Mobius::scaling(2.0).kind() == MobiusKind::Hyperbolic);
    CHECK(Mobius(0, -1, 1, 0).kind() == MobiusKind::Elliptic);
  }

  TEST_CASE("unipotent subgroup is a one-parameter group") {
    for (double p : {-1.5, 0.0, 3.0}) {
      const Mobius ab = Mobius::unipotent(Extended(p), 0.4) * Mobius::unipotent(Extended(p), -1.1);
      const Mobius c = Mobius::unipotent(Extended(p), -0.7);
      const Complex z(0.3, 1.2);
      CHECK(close(ab.apply(z), c.apply(z), 1e-12));
    }
    // p = 0: z -> z/(tz + 1).
    const Complex z(0.5, 2.0);
    CHECK(close(Mobius::unipotent(Extended(0.0), 3.0).apply(z), z / (3.0 * z + 1.0), 1e-14));
  }

  TEST_CASE("mobius composition") {
    const Mobius g1(2, 1, 1, 1), g2(1, -3, 0.5, 2);
    for (const auto& p : halton_points(1, 200, Domain::HalfPlane)) {
      const Complex z = p[0];
      CHECK(close((g1 * g2).apply(z), g1.apply(g2.apply(z)), 1e-12));
      CHECK(close(g1.inverse().apply(g1.apply(z)), z, 1e-12));
    }
  }

  TEST_CASE("cayley transform") {
    CHECK(close(cayley(kI), 0.0, 0.0));
    CHECK(cayley(Extended::infinity()) == Extended(-1.0));
    CHECK(cayley_inv(Extended(-1.0)).infinite);
    CHECK_THROWS_AS(cayley(-kI), EvalError);
    double worst = 0.0;
    for (const auto& p : halton_points(1, 1000, Domain::HalfPlane)) {
      const Complex w = cayley(p[0]);
      CHECK(std::abs(w) < 1.0);
      worst = std::max(worst, std::abs(cayley_inv(w) - p[0]) / std::max(1.0, std::abs(p[0])));
    }
    CHECK(worst <= 1e-14);
  }

  TEST_CASE("disk automorphisms round-trip through PSL2") {
    const ComplexMobius g = ComplexMobius::rotation(0.7) * ComplexMobius::blaschke({0.3, -0.4});
    const Mobius h = Mobius::from_disk_automorphism(g);
    const ComplexMobius back = h.disk_automorphism();
    for (Complex u : {Complex(0.0), Complex(0.5, 0.2), Complex(-0.1, -0.8)})
      CHECK(close(back.apply_finite(u), g.apply_finite(u), 1e-12));
    CHECK_THROWS_AS(Mobius::from_disk_automorphism({2.0, 0.0, 0.0, 1.0}), DomainError);
  }

  TEST_CASE("poincare distance") {
    CHECK(poincare_dist(kI, kI) == 0.0);
    CHECK(poincare_dist(kI, std::numbers::e * kI) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(poincare_dist(2.0 * kI, 7.0 * kI) == doctest::Approx(std::log(3.5)).epsilon(1e-14));
    CHECK(polyplane_dist(test::hp({kI, kI}), test::hp({kI, 2.0 * kI})) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(poincare_dist(kI, 1.0), DomainError);
    // Invariance under PSL2.
    const Mobius g(2, 1, 1, 1);
    const Complex a(0.3, 0.5), b(-1.0, 2.0);
    CHECK(poincare_dist(g.apply(a), g.apply(b)) == doctest::Approx(poincare_dist(a, b)).epsilon(1e-12));
  }
}
