#include "holoflow/calculus.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace holoflow {

double cauchy_radius(Domain domain, Complex zj) {
  switch (domain) {
    case Domain::HalfPlane: return std::min(1.0, 0.5 * zj.imag());
    case Domain::Disk: return 0.5 * (1.0 - std::abs(zj));
    case Domain::Plane: return 1.0;
  }
  return 0.0;
}

namespace {

// Sum_k (f(z + rho w_k e_j) - f(z)) w_k^{-power}, w_k = exp(2 pi i k / K).
Complex circle_sum(const HoloMap& f, const PolyPoint& z, int j, int nodes, int power, double& rho) {
  rho = cauchy_radius(z.domain(), z[j]);
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw DomainError(fmt::format("Cauchy radius degenerates at coordinate {} (point too close to the boundary)", j + 1));
  const Complex centre = eval_raw(f, z.coords());
  CVector w = z.coords();
  Complex acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    const Complex unit = std::polar(1.0, theta);
    w[j] = z[j] + rho * unit;
    acc += (eval_raw(f, w) - centre) * std::polar(1.0, -power * theta);
  }
  return acc;
}

}  // namespace

CVector cauchy_partials(const HoloMap& f, const PolyPoint& z, int nodes) {
  if (z.size() != f.arity() || z.domain() != f.source()) throw DomainError("cauchy_partials: point does not match map");
  if (nodes < 4) throw DomainError("cauchy_partials: need at least 4 nodes");
  CVector out(f.arity());
  for (int j = 0; j < f.arity(); ++j) {
    double rho = 0.0;
    const Complex s = circle_sum(f, z, j, nodes, 1, rho);
    out[j] = s / (nodes * rho);
  }
  return out;
}

Complex cauchy_second_partial(const HoloMap& f, const PolyPoint& z, int j, int nodes) {
  if (z.size() != f.arity() || z.domain() != f.source()) throw DomainError("cauchy_second_partial: point does not match map");
  if (j < 0 || j >= f.arity()) throw DomainError("cauchy_second_partial: index out of range");
  double rho = 0.0;
  const Complex s = circle_sum(f, z, j, nodes, 2, rho);
  return 2.0 * s / (nodes * rho * rho);
}

CVector partials(const HoloMap& f, const PolyPoint& z, DerivativeRoute route) {
  if (route == DerivativeRoute::Cauchy) return cauchy_partials(f, z);
  const Jet j = eval_jet(f, z);
  return CVector(j.grad);
}

}  // namespace holoflow
