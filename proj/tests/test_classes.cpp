#include "support.hpp"

#include "holoflow/classes.hpp"
#include "holoflow/dim2.hpp"
#include "holoflow/sampling.hpp"

#include <numbers>
#include <random>

using namespace holoflow;
using test::close;
using test::hp;

TEST_SUITE("classes") {
  TEST_CASE("linear maps") {
    RVector alpha(3);
    alpha << 0.2, 0.5, 0.3;
    const ClassReport d = check_class(linear_map(alpha), MapClass::D);
    CHECK(d.pass);
    CHECK((d.alpha - alpha).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_FALSE(check_class(linear_map(alpha), MapClass::C).pass);

    const ClassReport p = check_class(projection(0, 2), MapClass::D);
    CHECK(p.pass);
    CHECK(p.alpha[0] == doctest::Approx(1.0));
    CHECK(p.alpha[1] == doctest::Approx(0.0));
  }

  TEST_CASE("negative weights fail class D") {
    RVector alpha(2);
    alpha << 1.5, -0.5;
    const ClassReport r = check_class(linear_map(alpha), MapClass::D);
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("extremal families lie in C") {
    for (double r : {-3.0, 0.0, 0.5, 7.0}) {
      const ClassReport rep = check_class(h_r(r), MapClass::C);
      CHECK(rep.pass);
      CHECK(rep.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(check_class(h_r(Extended::infinity()), MapClass::C).pass);
    for (int k = 0; k < 8; ++k) CHECK(check_class(g_nu(2.0 * std::numbers::pi * k / 8.0), MapClass::C).pass);
  }

  TEST_CASE("maps off the diagonal identity fail with a report, not an exception") {
    const HoloMap z = coordinate(0, 2), w = coordinate(1, 2);
    const ClassReport rep = check_class(z * w, MapClass::D);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_diag_residual > 0.1);

    const ClassReport pole = check_class(1.0 / (z - w), MapClass::D);
    CHECK_FALSE(pole.pass);
    CHECK_FALSE(pole.failure.empty());
  }

  TEST_CASE("cayley conjugation of g_nu") {
    const HoloMap g = g_nu(1.1);
    const HoloMap h = cayley_conjugate(g);
    CHECK(h.source() == Domain::HalfPlane);
    CHECK(h.target() == Domain::HalfPlane);
    double worst = 0.0;
    for (const auto& p : test::h2_grid()) {
      const Complex lhs = cayley(eval(h, p));
      const Complex rhs = eval(g, test::dp({cayley(p[0]), cayley(p[1])}));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-12);
    CHECK(check_class(h, MapClass::C).pass);
    // Conjugating twice returns to the disk model.
    CHECK(cayley_conjugate(h).source() == Domain::Disk);
  }

  TEST_CASE("conjugate_action examples") {
    const auto grid = test::h2_grid();
    CHECK(test::sup_diff(conjugate_action(Mobius::identity(), h_r(2.0)), h_r(2.0), grid) <= 1e-15);
    for (double t : {-4.0, 0.3, 9.0})
      CHECK(test::sup_diff(conjugate_action(Mobius::translation(t), h_r(1.0)), h_r(1.0 + t), grid) <= 1e-12);
    // Rotation of the disk acting on g_nu moves nu.
    const double theta = std::numbers::pi / 3.0;
    const Mobius rot = Mobius::from_disk_automorphism(ComplexMobius::rotation(theta));
    const HoloMap moved = conjugate_action(rot, g_nu(0.4));
    double worst = 0.0;
    for (const auto& p : disk_grid()) worst = std::max(worst, std::abs(eval(moved, p) - eval(g_nu(0.4 + theta), p)));
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("conjugate_action preserves class C") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto families = shipped_families();
    for (int k = 0; k < 100; ++k) {
      const double a = u(rng), b = u(rng), c = u(rng);
      const double d = (1.0 + b * c) / (a == 0.0 ? 1.0 : a);
      const Mobius g = a > 0.05 ? Mobius(a, b, c, d) : Mobius::translation(b) * Mobius::scaling(std::exp(c));
      const NamedMap& fam = families[static_cast<std::size_t>(k) % families.size()];
      INFO(fam.name);
      CHECK(check_class(conjugate_action(g, half_plane_model(fam.map)), MapClass::C).pass);
    }
  }

  TEST_CASE("normalize_to_c") {
    const auto grid = test::h2_grid();
    CHECK(test::sup_diff(normalize_to_c(mean_map(2), RVector::Constant(2, 0.5)), mean_map(2), grid) <= 1e-15);

    RVector alpha(2);
    alpha << 1.0, 0.0;
    const HoloMap n1 = normalize_to_c(projection(0, 2), alpha);
    CHECK(test::sup_diff(n1, mean_map(2), grid) <= 1e-15);

    // Not idempotent on C: h0 goes to (h0 + mean)/2.
    const HoloMap n0 = normalize_to_c(h_r(0.0), RVector::Constant(2, 0.5));
    const HoloMap expect = 0.5 * h_r(0.0) + 0.5 * mean_map(2);
    CHECK(test::sup_diff(n0, expect, grid) <= 1e-12);
    CHECK(test::sup_diff(n0, h_r(0.0), grid) > 0.1);
    CHECK(check_class(n0, MapClass::C).pass);

    RVector a3(3);
    a3 << 0.6, 0.1, 0.3;
    CHECK(check_class(normalize_to_c(linear_map(a3), a3), MapClass::C).pass);
    CHECK_THROWS_AS(normalize_to_c(coordinate(0, 1), RVector::Ones(1)), DomainError);
  }

  TEST_CASE("members of C decrease the Caratheodory distance to the diagonal base point") {
    const auto pts = random_points(2, 2000, Domain::HalfPlane, 77);
    const PolyPoint base = PolyPoint::diagonal(kI, 2, Domain::HalfPlane);
    for (const auto& fam : shipped_families()) {
      const HoloMap f = half_plane_model(fam.map);
      double worst = -INFINITY;
      for (const auto& p : pts) worst = std::max(worst, poincare_dist(eval(f, p), kI) - polyplane_dist(p, base));
      INFO(fam.name);
      CHECK(worst <= 1e-9);
    }
  }
}
