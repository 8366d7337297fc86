#pragma once

#include "holoflow/calculus.hpp"

#include <span>
#include <vector>

namespace holoflow {

/// D: maps H^n -> H fixing the diagonal. C: the subfamily with every
/// diagonal partial equal to 1/n.
enum class MapClass { D, C };

struct ClassReport {
  MapClass map_class = MapClass::D;
  RVector alpha;  // partials at (i, ..., i)
  double max_diag_residual = 0.0;
  double max_deriv_residual = 0.0;
  std::vector<Complex> samples;
  bool pass = false;
  double tol = 0.0;
  std::string failure;  // first evaluation error, if any
};

inline constexpr double kClassTol = 1e-9;

/// {i, 2i, 1+i, -3+i/2}.
std::span<const Complex> default_class_samples();

/// Residuals of f(l,...,l) = l and of the diagonal partials at each sample
/// l. For D the partials are compared against alpha extracted at (i,...,i);
/// for C against 1/n. Disk-model maps are Cayley-conjugated first.
ClassReport check_class(const HoloMap& f, MapClass map_class,
                        std::span<const Complex> samples = default_class_samples(), double tol = kClassTol);

/// f itself on H^n, C^-1 f C for disk-model maps.
HoloMap half_plane_model(const HoloMap& f);

/// Conjugation by the Cayley transform, switching between the disk and
/// half-plane models.
HoloMap cayley_conjugate(const HoloMap& f);

/// z -> m(f(m^-1 z_1, ..., m^-1 z_n)).
HoloMap conjugate_by(const ComplexMobius& m, const HoloMap& f);

/// PSL2(R) action (g.f)(z) = g f(g^-1 z_1, ..., g^-1 z_n). On disk-model
/// maps g acts through the disk automorphism C g C^-1.
HoloMap conjugate_action(const Mobius& g, const HoloMap& f);

/// (1/n) f + ((n-1)/n) sum_j (1 - alpha_j)/(n - 1) z_j, which lies in C
/// whenever f lies in D with diagonal partials alpha.
HoloMap normalize_to_c(const HoloMap& f, const RVector& alpha);

}  // namespace holoflow
