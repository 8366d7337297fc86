#include "holoflow/dim2.hpp"

#include "holoflow/sampling.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace holoflow {

ExtremalParam ExtremalParam::half_plane(const Extended& r) {
  if (!r.is_real()) throw DomainError("h_r: parameter must lie on R u {inf}");
  return ExtremalParam(Domain::HalfPlane, 0.0, r);
}

HoloMap g_nu(double angle) { return HoloMap(detail::make_gnu(angle), 2, Domain::Disk, Domain::Disk); }

HoloMap g_nu(Complex nu) {
  if (std::abs(std::abs(nu) - 1.0) > 1e-12)
    throw DomainError(fmt::format("g_nu: |nu| = {:.17g}, expected 1", std::abs(nu)));
  return g_nu(std::arg(nu));
}

HoloMap h_r(const Extended& r) {
  if (!r.is_real()) throw DomainError("h_r: parameter must lie on R u {inf}");
  return HoloMap(detail::make_hr(r), 2, Domain::HalfPlane, Domain::HalfPlane);
}

HoloMap extremal(const ExtremalParam& p) {
  return p.model() == Domain::Disk ? g_nu(p.angle()) : h_r(p.r());
}

// ---------------------------------------------------------------------------

namespace {

const std::vector<PolyPoint>& schur_samples(Domain model) {
  static const std::vector<PolyPoint> disk = halton_points(2, kSchurSamples, Domain::Disk);
  static const std::vector<PolyPoint> half = halton_points(2, kSchurSamples, Domain::HalfPlane);
  return model == Domain::Disk ? disk : half;
}

void require_two_variables(const HoloMap& map, Domain model, const char* what) {
  if (map.arity() != 2) throw DomainError(fmt::format("{}: expected a map of two variables", what));
  if (map.source() != model) throw DomainError(fmt::format("{}: expected a map on the {}", what, to_string(model)));
}

}  // namespace

SchurParam SchurParam::theta(const HoloMap& map, bool trusted) {
  require_two_variables(map, Domain::Disk, "Theta");
  if (!trusted) {
    for (const auto& z : schur_samples(Domain::Disk)) {
      const Complex v = eval_raw(map, z.coords());
      if (!(std::abs(v) <= 1.0 + kSchurTol))
        throw DomainError(fmt::format("Theta: |Theta| = {:.17g} > 1 at a sample point", std::abs(v)));
    }
  }
  return SchurParam(Model::Theta, map);
}

SchurParam SchurParam::phi(const HoloMap& map, bool trusted) {
  require_two_variables(map, Domain::HalfPlane, "Phi");
  if (!trusted) {
    for (const auto& z : schur_samples(Domain::HalfPlane)) {
      const Complex v = eval_raw(map, z.coords());
      if (!(v.imag() >= -kSchurTol))
        throw DomainError(fmt::format("Phi: Im Phi = {:.17g} < 0 at a sample point", v.imag()));
    }
  }
  return SchurParam(Model::Phi, map);
}

SchurParam SchurParam::phi_infinity() { return SchurParam(Model::Phi, std::nullopt); }

const HoloMap& SchurParam::map() const {
  if (!map_) throw Error("SchurParam: the constant infinity has no map");
  return *map_;
}

HoloMap am_map(const SchurParam& theta) {
  if (theta.model() != SchurParam::Model::Theta) throw DomainError("am_map: expected a Theta parameter");
  const HoloMap& t = theta.map();
  const HoloMap z = coordinate(0, 2, Domain::Disk);
  const HoloMap w = coordinate(1, 2, Domain::Disk);
  const HoloMap m = 0.5 * (z + w);
  const HoloMap diff = z - w;
  return (m + 0.25 * (diff * diff) * t / (1.0 - m * t)).with_target(Domain::Disk);
}

HoloMap be_map(const SchurParam& phi) {
  if (phi.model() != SchurParam::Model::Phi) throw DomainError("be_map: expected a Phi parameter");
  if (phi.is_infinite()) return h_r(Extended::infinity());
  const HoloMap& p = phi.map();
  const HoloMap z = coordinate(0, 2, Domain::HalfPlane);
  const HoloMap w = coordinate(1, 2, Domain::HalfPlane);
  const HoloMap m = 0.5 * (z + w);
  const HoloMap den = p + m;

  double largest = 0.0;
  for (const auto& pt : schur_samples(Domain::HalfPlane)) {
    try {
      largest = std::max(largest, std::abs(eval_raw(den, pt.coords())));
    } catch (const EvalError&) {
      largest = std::numeric_limits<double>::infinity();
    }
    if (largest > kSchurTol) break;
  }
  if (largest <= kSchurTol) throw DomainError("be_map: denominator Phi + (z + w)/2 vanishes identically");

  return ((m * p + z * w) / den).with_target(Domain::HalfPlane);
}

HoloMap bet_flow(const SchurParam& phi, double t) {
  if (phi.model() != SchurParam::Model::Phi) throw DomainError("bet_flow: expected a Phi parameter");
  if (phi.is_infinite()) return h_r(Extended::infinity());
  const ComplexMobius shift{1.0, -t, 0.0, 1.0};
  const HoloMap moved =
      post_compose(shift, pre_compose({shift, shift}, phi.map(), Domain::HalfPlane), Domain::Plane);
  return be_map(SchurParam::phi(moved, true));
}

HoloMap example13(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError(fmt::format("example13: t = {:.17g} is outside [0, 1]", t));
  if (t == 1.0) return h_r(Extended::infinity());
  if (t == 0.0) return h_r(0.0);
  return (t * h_r(Extended::infinity()) + (1.0 - t) * h_r(0.0)).with_target(Domain::HalfPlane);
}

double example13_slope(double a, double t) {
  if (!(a > 0.0)) throw DomainError("example13_slope: a must be positive");
  return t * (1.0 + a) / 2.0 + (1.0 - t) * 2.0 * a / (1.0 + a);
}

const std::vector<PolyPoint>& disk_grid() {
  static const std::vector<PolyPoint> grid = [] {
    std::vector<Complex> axis{0.0};
    for (double rad : {0.3, 0.6, 0.85})
      for (int k = 0; k < 8; ++k) axis.push_back(std::polar(rad, 2.0 * std::numbers::pi * k / 8.0));
    std::vector<PolyPoint> out;
    for (Complex a : axis)
      for (Complex b : axis) out.emplace_back(CVector{{a, b}}, Domain::Disk);
    return out;
  }();
  return grid;
}

double equivariance_residual(const Mobius& gamma, double nu_angle) {
  const ComplexMobius g = gamma.disk_automorphism();
  const HoloMap lhs = conjugate_by(g, g_nu(nu_angle));
  const Complex moved = g.apply_finite(std::polar(1.0, nu_angle));
  const HoloMap rhs = g_nu(std::arg(moved));
  double worst = 0.0;
  for (const auto& z : disk_grid()) worst = std::max(worst, std::abs(eval_raw(lhs, z.coords()) - eval_raw(rhs, z.coords())));
  return worst;
}

std::vector<NamedMap> shipped_families() {
  std::vector<NamedMap> out;
  out.push_back({"mean", mean_map(2)});
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 8.0;
    out.push_back({fmt::format("g_nu(2pi*{}/8)", k), g_nu(angle)});
  }
  for (const Extended& r : std::array<Extended, 8>{-10.0, -2.0, -0.5, 0.0, 0.5, 1.0, 3.0, Extended::infinity()})
    out.push_back({"h_r(" + to_string(r) + ")", h_r(r)});

  const HoloMap dz = coordinate(0, 2, Domain::Disk);
  const HoloMap dw = coordinate(1, 2, Domain::Disk);
  out.push_back({"am(z)", am_map(SchurParam::theta(dz))});
  out.push_back({"am(z*w)", am_map(SchurParam::theta(dz * dw))});
  out.push_back({"am(0.5)", am_map(SchurParam::theta(constant(0.5, 2, Domain::Disk)))});
  out.push_back({"am((z+w)/2)", am_map(SchurParam::theta(0.5 * (dz + dw)))});

  const HoloMap hz = coordinate(0, 2, Domain::HalfPlane);
  const HoloMap hw = coordinate(1, 2, Domain::HalfPlane);
  out.push_back({"be(z+w)", be_map(SchurParam::phi(hz + hw))});
  out.push_back({"be(z)", be_map(SchurParam::phi(hz))});
  out.push_back({"be(-1/(z+w))", be_map(SchurParam::phi(-1.0 / (hz + hw)))});
  out.push_back({"be(1+2i)", be_map(SchurParam::phi(constant({1.0, 2.0}, 2, Domain::HalfPlane)))});

  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) out.push_back({fmt::format("blend({})", t), example13(t)});
  return out;
}

}  // namespace holoflow
