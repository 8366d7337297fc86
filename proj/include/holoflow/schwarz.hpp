#pragma once

#include "holoflow/calculus.hpp"

#include <vector>

namespace holoflow {

/// Embedding z -> (phi_1(z), ..., phi_n(z)) of the one-variable model into
/// the polydomain. Components are half-plane automorphisms; for disk-model
/// maps each one acts as C phi_j C^-1.
struct BalancedDisk {
  std::vector<Mobius> components;
};

/// Both sides of the polydisk Schwarz inequality at one point.
struct DefectSample {
  PolyPoint point;
  double defect = 0.0;    // Im f - sum_j Im z_j |df/dz_j|   (H^n)
                          // 1 - |f|^2 - sum_j (1 - |z_j|^2) |df/dz_j|   (D^n)
  RVector gradient_terms; // the summands
};

inline constexpr double kDefectTol = 1e-9;

DefectSample schwarz_defect(const HoloMap& f, const PolyPoint& z, DerivativeRoute route = DerivativeRoute::Exact);

/// (1 - |f(z)|^2) - (1 - |z|^2)|f'(z)| for f: D -> D of one variable.
double disk_defect(const HoloMap& f, Complex z);

/// Value and derivative of the restriction f o Phi, written in the disk
/// model, at u in D.
struct RestrictionJet {
  Complex value;
  Complex derivative;
};
RestrictionJet restriction_jet(const HoloMap& f, const BalancedDisk& phi, Complex u);

/// True iff the restriction of f to the balanced disk is an automorphism:
/// Schwarz-Pick equality within tol at 8 sample points and a nonzero
/// derivative at the base point.
bool extreme_disk_check(const HoloMap& f, const BalancedDisk& phi, double tol = kDefectTol);

/// Image point Phi(z) for z in the one-variable model of f's source.
PolyPoint balanced_point(const HoloMap& f, const BalancedDisk& phi, Complex z);

}  // namespace holoflow
