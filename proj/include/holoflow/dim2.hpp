#pragma once

#include "holoflow/classes.hpp"

#include <optional>
#include <vector>

namespace holoflow {

/// Parameter of an extremal map of two variables: a unimodular nu (disk
/// model, stored as its angle) or r in R u {inf} (half-plane model).
class ExtremalParam {
 public:
  static ExtremalParam disk(double angle) { return ExtremalParam(Domain::Disk, angle, {}); }
  /// Throws DomainError if r is not on R u {inf}.
  static ExtremalParam half_plane(const Extended& r);

  Domain model() const { return model_; }
  double angle() const { return angle_; }
  Complex nu() const { return std::polar(1.0, angle_); }
  const Extended& r() const { return r_; }

 private:
  ExtremalParam(Domain model, double angle, Extended r) : model_(model), angle_(angle), r_(r) {}

  Domain model_;
  double angle_;
  Extended r_;
};

/// g_nu(z, w) = (nu m - zw)/(nu - m), m = (z + w)/2, on D^2.
HoloMap g_nu(double angle);
/// Throws DomainError unless |nu| = 1 to 1e-12.
HoloMap g_nu(Complex nu);
/// h_r(z, w) = (r m - zw)/(r - m) on H^2; h_inf = m.
HoloMap h_r(const Extended& r);
HoloMap extremal(const ExtremalParam& p);

inline constexpr int kSchurSamples = 1000;
inline constexpr double kSchurTol = 1e-12;

/// Schur-class parameter of two variables: Theta: D^2 -> closed D, or
/// Phi: H^2 -> closed H (the constant infinity is allowed). Membership is
/// certified by sampling unless the caller marks the map as trusted.
class SchurParam {
 public:
  enum class Model { Theta, Phi };

  static SchurParam theta(const HoloMap& map, bool trusted = false);
  static SchurParam phi(const HoloMap& map, bool trusted = false);
  static SchurParam phi_infinity();

  Model model() const { return model_; }
  bool is_infinite() const { return !map_.has_value(); }
  /// Throws Error for the constant infinity.
  const HoloMap& map() const;

 private:
  SchurParam(Model model, std::optional<HoloMap> map) : model_(model), map_(std::move(map)) {}

  Model model_;
  std::optional<HoloMap> map_;
};

/// m + (1/4)(z - w)^2 Theta / (1 - m Theta) on D^2.
HoloMap am_map(const SchurParam& theta);
/// (m Phi + zw)/(Phi + m) on H^2; Phi = inf gives h_inf.
HoloMap be_map(const SchurParam& phi);
/// be_map with Phi replaced by Phi(z - t, w - t) - t.
HoloMap bet_flow(const SchurParam& phi, double t);

/// t h_inf + (1 - t) h_0 for t in [0, 1].
HoloMap example13(double t);
/// s with example13(t)(z, az) = s z.
double example13_slope(double a, double t);

/// Grid on D^2 used by equivariance_residual: radii {0, .3, .6, .85} times
/// 8 angles per coordinate.
const std::vector<PolyPoint>& disk_grid();

/// max over disk_grid of |(G g_nu)(z) - g_{G(nu)}(z)|, G = C gamma C^-1.
double equivariance_residual(const Mobius& gamma, double nu_angle);

struct NamedMap {
  std::string name;
  HoloMap map;
};

/// Every shipped member of C in two variables (in its native model).
std::vector<NamedMap> shipped_families();

}  // namespace holoflow
