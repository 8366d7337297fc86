#include "support.hpp"

#include "holoflow/dim2.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/rigidity.hpp"
#include "holoflow/sampling.hpp"

#include <random>

using namespace holoflow;

TEST_SUITE("rigidity") {
  TEST_CASE("Poisson reconstruction") {
    const auto one = CircleSamples::sample([](Complex) { return Complex(1.0); }, 1.0, 64);
    CHECK(test::close(poisson_eval(one, Complex(0.4, -0.3)), 1.0, 1e-14));

    const auto cube = CircleSamples::sample([](Complex z) { return Complex((z * z * z).real()); }, 1.0, 64);
    const Complex z(0.3, 0.2);
    CHECK(std::abs(poisson_eval(cube, z) - (z * z * z).real()) <= 1e-8);

    const auto shifted = CircleSamples::sample([](Complex z) { return 2.0 + z.real(); }, 3.0, 16);
    CHECK(test::close(poisson_eval(shifted, 0.0), 2.0, 1e-15));

    for (int k = 0; k <= 5; ++k) {
      const auto s = CircleSamples::sample([k](Complex w) { return std::pow(w, k); }, 2.0, 512);
      for (Complex p : {Complex(0.5, 0.5), Complex(-1.0, 0.2), Complex(0.0, -1.5)})
        CHECK(std::abs(poisson_eval(s, p) - std::pow(p, k)) <= 1e-9);
    }
    CHECK_THROWS_AS(poisson_eval(one, 1.0), DomainError);
    CHECK_THROWS_AS(CircleSamples(1.0, CVector::Zero(4)), DomainError);
    CHECK_THROWS_AS(CircleSamples(0.0, CVector::Zero(16)), DomainError);
  }

  TEST_CASE("absolute-value identity") {
    for (int k = 1; k <= 4; ++k) {
      const auto s = CircleSamples::sample([k](Complex w) { return Complex(std::pow(w, k).real()); }, 1.5, 64);
      CHECK(abs_identity_residual(s) <= 1e-14);
    }
    const auto off = CircleSamples::sample([](Complex w) { return 1.0 + w.real(); }, 1.0, 64);
    CHECK_THROWS_AS(abs_identity_residual(off), DomainError);
  }

  TEST_CASE("growth bound") {
    const auto s = CircleSamples::sample([](Complex w) { return Complex(w.real()); }, 2.0, 128);
    const GrowthCheck g = growth_bound(s, 1.0);
    CHECK(g.hypothesis);
    CHECK(g.holds);
    CHECK(g.integral == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-3));
    CHECK(g.bound == 4.0);
    CHECK_FALSE(growth_bound(s, 0.5).hypothesis);
  }

  TEST_CASE("diagonal coordinates") {
    const PolyPoint z = test::hp({kI, 2.0 * kI, Complex(1.0, 3.0)});
    const DiagCoords c = to_diag(z);
    CHECK(test::close(c.a, Complex(1.0, 6.0) / 3.0, 1e-15));
    REQUIRE(c.d.size() == 2);
    CHECK(test::close(c.d[0], kI, 1e-15));
    CHECK(test::close(c.d[1], Complex(1.0, 1.0), 1e-15));

    for (int n : {2, 3, 5, 16})
      for (const auto& p : halton_points(n, 50, Domain::HalfPlane))
        CHECK((from_diag(to_diag(p)) - p.coords()).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + p.coords().cwiseAbs().maxCoeff()));

    CVector d(1);
    d << Complex(0.1, 0.1);
    CHECK(omega_contains(kI, d));
    for (double s : {0.5, 2.0, 10.0}) CHECK(omega_contains(s * kI, s * d));
    d << Complex(0.0, 5.0);
    CHECK_FALSE(omega_contains(kI, d));
  }

  TEST_CASE("rigidity residual") {
    const RigidityResidual m = rigidity_residual(mean_map(2));
    CHECK(m.a_dependence <= 1e-15);
    CHECK(m.sup_h <= 1e-15);
    const RigidityResidual h = rigidity_residual(h_r(0.0));
    CHECK(h.a_dependence > 0.01);
    const RigidityResidual avg = rigidity_residual(average(h_r(0.0), 1000.0, 512));
    CHECK(avg.a_dependence * 10.0 <= h.a_dependence);
    CHECK(default_d_grid(2).size() == 25);
    CHECK(default_d_grid(4).size() == 2000);
    CHECK_THROWS_AS(rigidity_residual(mean_map(2), 0.01 * kI, kI, default_d_grid(2)), DomainError);
  }

  TEST_CASE("polarization") {
    const std::vector<Rect> u(2, Rect{-2.0, 2.0, -3.0, 3.0});
    const HoloMap z = coordinate(0, 2, Domain::Plane), w = coordinate(1, 2, Domain::Plane);

    const PolarizationReport zero = polarization_check(constant(0.0, 2, Domain::Plane), u, 1e-12);
    CHECK(zero.vanishes_on_v);
    CHECK(zero.max_on_u == 0.0);
    CHECK(zero.u_samples > 0);

    const PolarizationReport diff = polarization_check(z - w, u, 1e-12);
    CHECK_FALSE(diff.vanishes_on_v);
    REQUIRE(diff.witness.has_value());
    CHECK(std::abs(diff.witness_value) == doctest::Approx(diff.max_on_v));
    CHECK(std::abs(eval_raw(z - w, *diff.witness) - diff.witness_value) == 0.0);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const std::vector<Rect> u3(3, Rect{-2.0, 2.0, -3.0, 3.0});
    for (int k = 0; k < 1000; ++k) {
      RVector a(3), b(3);
      for (int j = 0; j < 3; ++j) a[j] = g(rng), b[j] = g(rng);
      HoloMap h = constant(0.0, 3, Domain::Plane);
      for (int j = 0; j < 3; ++j) h = h + Complex(a[j], b[j]) * coordinate(j, 3, Domain::Plane);
      const PolarizationReport r = polarization_check(h, u3, 1e-12);
      CHECK_FALSE(r.vanishes_on_v);
    }

    CHECK_THROWS_AS(polarization_check(z - w, std::vector<Rect>(2, Rect{5.0, 6.0, 0.5, 1.0}), 1e-12), Error);
    CHECK_THROWS_AS(polarization_check(z - w, u3, 1e-12), DomainError);
  }
}
