#pragma once

#include "holoflow/holomap.hpp"

namespace holoflow {

enum class DerivativeRoute {
  Exact,   ///< forward-mode differentiation of the expression tree
  Cauchy,  ///< trapezoid rule on the Cauchy integral, per coordinate
};

inline constexpr int kCauchyNodes = 32;

/// Radius of the Cauchy circle in coordinate j: min(1, Im z / 2) on H,
/// (1 - |z|)/2 on D, 1 on C.
double cauchy_radius(Domain domain, Complex zj);

/// Gradient (df/dz_1, ..., df/dz_n) at z.
CVector partials(const HoloMap& f, const PolyPoint& z, DerivativeRoute route = DerivativeRoute::Exact);

/// (1/2 pi i) \oint f(z + w e_j)/w^2 dw on `nodes` equispaced points.
CVector cauchy_partials(const HoloMap& f, const PolyPoint& z, int nodes = kCauchyNodes);

/// d^2 f / dz_j^2 by the Cauchy integral with kernel 2/w^3.
Complex cauchy_second_partial(const HoloMap& f, const PolyPoint& z, int j, int nodes = kCauchyNodes);

}  // namespace holoflow
