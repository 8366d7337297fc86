#pragma once

#include "holoflow/holomap.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace holoflow {

/// Values of a function at r e^{2 pi i k/N}, k = 0..N-1.
class CircleSamples {
 public:
  /// Throws DomainError unless r > 0 and N >= 8.
  CircleSamples(double radius, CVector values);

  static CircleSamples sample(const std::function<Complex(Complex)>& phi, double radius, int count);

  double radius() const { return radius_; }
  int size() const { return static_cast<int>(values_.size()); }
  const CVector& values() const { return values_; }
  Complex node(int k) const;

 private:
  double radius_;
  CVector values_;
};

/// Trapezoid rule on the Poisson integral with kernel
/// (r^2 - |z|^2)/|r e^{i theta} - z|^2. At z = 0 this is the plain average.
Complex poisson_eval(const CircleSamples& samples, Complex z);

/// |int |phi| - 2 int phi_- | for real samples (imaginary parts ignored),
/// dtheta normalized to total mass 1. Throws DomainError if the mean value
/// at 0 exceeds `center_tol`.
double abs_identity_residual(const CircleSamples& samples, double center_tol = 1e-8);

struct GrowthCheck {
  double integral = 0.0;  // int |phi| dtheta
  double bound = 0.0;     // 2 C r
  bool hypothesis = false;  // min phi >= -C r
  bool holds = false;       // integral <= bound + 1e-8
};

/// The step int |phi| <= 2 C r for harmonic phi with phi(0) = 0 and
/// phi >= -C r on the circle.
GrowthCheck growth_bound(const CircleSamples& samples, double c);

/// a = (1/n) sum z_j, d_j = z_{j+1} - z_j.
struct DiagCoords {
  Complex a;
  CVector d;
};

DiagCoords to_diag(const PolyPoint& z);
/// Coordinates of the inverse change; they need not lie in H^n.
CVector from_diag(const DiagCoords& c);
bool omega_contains(Complex a, const CVector& d);

struct RigidityResidual {
  double a_dependence = 0.0;
  double sup_h = 0.0;
};

/// d_j on a 5 x 5 grid with |Re d_j|, |Im d_j| <= 1/4, at most 2000 points.
std::vector<CVector> default_d_grid(int n);

/// With h(a, d) = f(from_diag(a, d)) - a: max_d |h(a1, d) - h(a2, d)| and
/// max_d |h(a1, d)|. Throws DomainError for grid points outside Omega.
RigidityResidual rigidity_residual(const HoloMap& f, Complex a1, Complex a2, const std::vector<CVector>& d_grid);
RigidityResidual rigidity_residual(const HoloMap& f);

struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
  bool contains(Complex z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
};

struct PolarizationReport {
  bool vanishes_on_v = false;
  std::size_t v_samples = 0;
  double max_on_v = 0.0;
  /// Point of U n V with the largest |h| when h does not vanish there.
  std::optional<CVector> witness;
  Complex witness_value{};
  std::size_t u_samples = 0;
  double max_on_u = 0.0;  // only when vanishes_on_v
  std::string message;
};

/// Samples of U n V, V = {(r + i t_1, ..., r + i t_n) : sum t_j = 0}, with
/// r in {-1, 0, 1} (or the center of U's common real range) and t on a
/// lattice spanned by e_j - e_{j+1} at scales {1, 1/2, 1/4, 1/10}.
std::vector<CVector> polarization_v_samples(const std::vector<Rect>& u);

/// Throws Error if U n V has no sample points.
PolarizationReport polarization_check(const HoloMap& h, const std::vector<Rect>& u, double tol);

}  // namespace holoflow
