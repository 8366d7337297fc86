#include "holoflow/schwarz.hpp"

#include <cmath>
#include <numbers>

namespace holoflow {

DefectSample schwarz_defect(const HoloMap& f, const PolyPoint& z, DerivativeRoute route) {
  const int n = f.arity();
  Complex value;
  CVector grad;
  if (route == DerivativeRoute::Exact) {
    const Jet j = eval_jet(f, z);
    value = j.value;
    grad = j.grad;
  } else {
    value = eval(f, z);
    grad = cauchy_partials(f, z);
  }
  RVector terms(n);
  double lhs = 0.0;
  switch (f.source()) {
    case Domain::HalfPlane:
      for (int k = 0; k < n; ++k) terms[k] = z[k].imag() * std::abs(grad[k]);
      lhs = value.imag();
      break;
    case Domain::Disk:
      for (int k = 0; k < n; ++k) terms[k] = (1.0 - std::norm(z[k])) * std::abs(grad[k]);
      lhs = 1.0 - std::norm(value);
      break;
    case Domain::Plane: throw DomainError("schwarz_defect: map on C^n");
  }
  return {z, lhs - terms.sum(), terms};
}

double disk_defect(const HoloMap& f, Complex z) {
  if (f.arity() != 1 || f.source() != Domain::Disk) throw DomainError("disk_defect: needs a one-variable disk map");
  const Jet j = eval_jet(f, PolyPoint(CVector::Constant(1, z), Domain::Disk));
  return (1.0 - std::norm(j.value)) - (1.0 - std::norm(z)) * std::abs(j.grad[0]);
}

namespace {

void check_arity(const HoloMap& f, const BalancedDisk& phi) {
  if (static_cast<int>(phi.components.size()) != f.arity())
    throw DomainError("balanced disk and map have different dimensions");
}

}  // namespace

PolyPoint balanced_point(const HoloMap& f, const BalancedDisk& phi, Complex z) {
  check_arity(f, phi);
  CVector w(f.arity());
  for (int k = 0; k < f.arity(); ++k) {
    w[k] = f.source() == Domain::Disk ? phi.components[k].disk_automorphism().apply_finite(z)
                                      : phi.components[k].apply(z);
  }
  return {w, f.source()};
}

RestrictionJet restriction_jet(const HoloMap& f, const BalancedDisk& phi, Complex u) {
  check_arity(f, phi);
  const int n = f.arity();
  if (f.source() == Domain::Disk) {
    const PolyPoint w = balanced_point(f, phi, u);
    const Jet j = eval_jet(f, w);
    Complex d = 0.0;
    for (int k = 0; k < n; ++k) d += j.grad[k] * phi.components[k].disk_automorphism().derivative(u);
    return {j.value, d};
  }
  if (f.source() != Domain::HalfPlane) throw DomainError("restriction_jet: map on C^n");
  const ComplexMobius to_h = ComplexMobius::cayley_inverse();
  const ComplexMobius to_d = ComplexMobius::cayley();
  const Complex z = to_h.apply_finite(u);
  const PolyPoint w = balanced_point(f, phi, z);
  const Jet j = eval_jet(f, w);
  Complex dz = 0.0;
  for (int k = 0; k < n; ++k) dz += j.grad[k] * phi.components[k].complex().derivative(z);
  return {to_d.apply_finite(j.value), to_d.derivative(j.value) * dz * to_h.derivative(u)};
}

bool extreme_disk_check(const HoloMap& f, const BalancedDisk& phi, double tol) {
  constexpr double kNonzeroDerivative = 1e-8;
  try {
    const RestrictionJet base = restriction_jet(f, phi, 0.0);
    if (std::abs(base.derivative) <= kNonzeroDerivative) return false;
    for (int k = 0; k < 8; ++k) {
      const Complex u = k == 0 ? Complex(0.0) : std::polar(0.5, 2.0 * std::numbers::pi * (k - 1) / 7.0);
      const RestrictionJet r = restriction_jet(f, phi, u);
      const double defect = (1.0 - std::norm(r.value)) - (1.0 - std::norm(u)) * std::abs(r.derivative);
      if (std::abs(defect) > tol) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace holoflow
