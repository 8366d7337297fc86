#include "support.hpp"

#include "holoflow/calculus.hpp"
#include "holoflow/classes.hpp"
#include "holoflow/dim2.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/sampling.hpp"

#include <cmath>

using namespace holoflow;
using test::close;
using test::hp;

TEST_SUITE("holomap") {
  TEST_CASE("eval examples") {
    CHECK(close(eval(mean_map(2), hp({kI, 3.0 * kI})), 2.0 * kI, 1e-15));
    CHECK(close(eval(h_r(0.0), hp({kI, 2.0 * kI})), 4.0 / 3.0 * kI, 1e-15));
    CHECK(close(eval(g_nu(0.0), test::dp({0.0, 0.0})), 0.0, 0.0));
    CHECK(close(eval(h_r(Extended::infinity()), hp({1.0 + kI, 3.0 * kI})), 0.5 + 2.0 * kI, 1e-15));
  }

  TEST_CASE("expression trees") {
    const HoloMap z = coordinate(0, 2), w = coordinate(1, 2);
    const HoloMap f = exp(z) * pow(w, 3) - 2.0 / (z + w) + Complex(1.0, 2.0);
    const Complex a(0.3, 1.0), b(-1.0, 0.5);
    const Complex expect = std::exp(a) * b * b * b - 2.0 / (a + b) + Complex(1.0, 2.0);
    CHECK(close(eval(f, hp({a, b})), expect, 1e-14));
    CHECK(close(eval(pow(z, -2), hp({a, b})), 1.0 / (a * a), 1e-14));
    CHECK(close(eval(-z, hp({a, b})), -a, 0.0));
  }

  TEST_CASE("evaluation errors") {
    const HoloMap z = coordinate(0, 2, Domain::Plane), w = coordinate(1, 2, Domain::Plane);
    const HoloMap f = 1.0 / (z - w);
    try {
      eval(f, PolyPoint(CVector::Constant(2, 1.0), Domain::Plane));
      FAIL("expected EvalError");
    } catch (const EvalError& e) {
      CHECK(std::string(e.what()).find("z1 - z2") != std::string::npos);
    }
    CHECK_THROWS_AS(eval(mean_map(2), hp({kI, kI, kI})), DomainError);
    CHECK_THROWS_AS(eval(mean_map(2), test::dp({0.0, 0.0})), DomainError);
    // The declared half-plane target is checked, not assumed.
    const HoloMap bad = (-1.0 * coordinate(0, 1)).with_target(Domain::HalfPlane);
    CHECK_THROWS_AS(eval(bad, hp({kI})), EvalError);
  }

  TEST_CASE("combining maps with different models is rejected") {
    CHECK_THROWS_AS(coordinate(0, 2) + coordinate(0, 2, Domain::Disk), DomainError);
    CHECK_THROWS_AS(coordinate(0, 2) + coordinate(0, 3), DomainError);
  }

  TEST_CASE("partials examples") {
    const CVector m = partials(mean_map(3), hp({kI, 2.0 + kI, 5.0 * kI}));
    for (int j = 0; j < 3; ++j) CHECK(close(m[j], 1.0 / 3.0, 1e-15));
    const CVector d = partials(h_r(0.0), hp({kI, kI}));
    CHECK(close(d[0], 0.5, 1e-15));
    CHECK(close(d[1], 0.5, 1e-15));
    const CVector e = partials(h_r(0.0), hp({kI, 2.0 * kI}));
    CHECK(close(e[0], 8.0 / 9.0, 1e-15));
    CHECK(close(e[1], 2.0 / 9.0, 1e-15));
    const CVector q = partials(h_r(0.0), hp({kI, 2.0 * kI}), DerivativeRoute::Cauchy);
    CHECK(close(q[0], 8.0 / 9.0, 1e-12));
    CHECK(close(q[1], 2.0 / 9.0, 1e-12));
  }

  TEST_CASE("exact and quadrature routes agree on expression trees") {
    const HoloMap z = coordinate(0, 2), w = coordinate(1, 2);
    const HoloMap f = exp(kI * z) * w + pow(z - w, 3) / (z + w + 3.0 * kI);
    for (const auto& p : halton_points(2, 100, Domain::HalfPlane)) {
      const CVector a = partials(f, p);
      const CVector b = partials(f, p, DerivativeRoute::Cauchy);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + a.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("Cauchy second derivative") {
    const HoloMap z = coordinate(0, 1, Domain::Plane);
    const Complex d2 = cauchy_second_partial(exp(2.0 * z), PolyPoint(CVector::Constant(1, 0.3), Domain::Plane), 0);
    CHECK(close(d2, 4.0 * std::exp(0.6), 1e-12));
  }

  TEST_CASE("quadrature radius") {
    CHECK(cauchy_radius(Domain::HalfPlane, Complex(0.0, 0.4)) == doctest::Approx(0.2));
    CHECK(cauchy_radius(Domain::HalfPlane, Complex(0.0, 5.0)) == 1.0);
    CHECK(cauchy_radius(Domain::Disk, Complex(0.6, 0.0)) == doctest::Approx(0.2));
    CHECK(cauchy_radius(Domain::Plane, Complex(9.0, 9.0)) == 1.0);
  }

  TEST_CASE("half-plane families stay in H on 1e4 random points") {
    const auto pts = random_points(2, 10000, Domain::HalfPlane, 123);
    for (const auto& fam : shipped_families()) {
      const HoloMap f = half_plane_model(fam.map);
      double lowest = INFINITY;
      for (const auto& p : pts) lowest = std::min(lowest, eval_raw(f, p.coords()).imag());
      INFO(fam.name);
      CHECK(lowest > 0.0);
    }
  }

  TEST_CASE("concurrent evaluation matches serial evaluation") {
    const HoloMap f = h_r(1.5) * h_r(-2.0) / mean_map(2);
    const auto pts = halton_points(2, 4000, Domain::HalfPlane);
    std::vector<Complex> serial(pts.size()), par(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) serial[k] = eval_raw(f, pts[k].coords());
    set_thread_count(4);
    parallel_for(pts.size(), [&](std::size_t k) { par[k] = eval_raw(f, pts[k].coords()); });
    set_thread_count(1);
    CHECK(serial == par);
  }
}
