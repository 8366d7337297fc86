#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace holoflow {

using Complex = std::complex<double>;

/// Largest supported number of variables; jets live on the stack.
inline constexpr int kMaxArity = 16;

using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
/// Small fixed-capacity gradient vector used by the differentiation engine.
using Gradient = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxArity, 1>;

inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the domain, arity mismatch, model mismatch.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Failure while evaluating a map (division by zero, pole, non-finite value).
class EvalError : public Error {
 public:
  using Error::Error;
};

enum class Domain { HalfPlane, Disk, Plane };

std::string to_string(Domain d);

/// True when `w` lies in the open one-variable model of `d`.
bool interior(Domain d, Complex w);

/// A point of the Riemann sphere: finite complex value or infinity.
struct Extended {
  Complex value{};
  bool infinite = false;

  Extended() = default;
  Extended(Complex v) : value(v) {}  // NOLINT: implicit by intent
  Extended(double v) : value(v) {}   // NOLINT

  static Extended infinity() {
    Extended e;
    e.infinite = true;
    return e;
  }
  bool is_real(double tol = 0.0) const { return infinite || std::abs(value.imag()) <= tol; }
};

bool operator==(const Extended& a, const Extended& b);
std::string to_string(const Extended& e);

/// Point of H^n, D^n or C^n.
class PolyPoint {
 public:
  PolyPoint(CVector coords, Domain domain);

  static PolyPoint diagonal(Complex lambda, int n, Domain domain);

  const CVector& coords() const { return coords_; }
  Domain domain() const { return domain_; }
  int size() const { return static_cast<int>(coords_.size()); }
  Complex operator[](int j) const { return coords_[j]; }

 private:
  CVector coords_;
  Domain domain_;
};

/// Fractional-linear map with complex coefficients. Used for Cayley
/// transforms and disk automorphisms.
struct ComplexMobius {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Complex det() const { return a * d - b * c; }
  Extended apply(const Extended& z) const;
  /// Finite image of a finite point; throws EvalError at the pole.
  Complex apply_finite(Complex z) const;
  /// Derivative det/(cz+d)^2.
  Complex derivative(Complex z) const;
  ComplexMobius inverse() const;
  ComplexMobius normalized() const;

  static ComplexMobius identity() { return {}; }
  static ComplexMobius cayley();
  static ComplexMobius cayley_inverse();
  static ComplexMobius rotation(double angle);
  /// Disk automorphism z -> (z - a)/(1 - conj(a) z).
  static ComplexMobius blaschke(Complex a);
};

ComplexMobius operator*(const ComplexMobius& lhs, const ComplexMobius& rhs);

enum class MobiusKind { Identity, Elliptic, Parabolic, Hyperbolic };

/// Element of PSL2(R), stored with ad - bc = 1.
class Mobius {
 public:
  Mobius() = default;
  /// Throws DomainError unless ad - bc > 0.
  Mobius(double a, double b, double c, double d);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  Extended apply(const Extended& z) const { return complex().apply(z); }
  Complex apply(Complex z) const { return complex().apply_finite(z); }
  Mobius inverse() const { return {d_, -b_, -c_, a_}; }
  ComplexMobius complex() const { return {a_, b_, c_, d_}; }

  double trace() const { return a_ + d_; }
  MobiusKind kind(double tol = 1e-12) const;
  bool is_unipotent(double tol = 1e-12) const { return kind(tol) == MobiusKind::Parabolic; }
  /// Fixed points on R u {inf}.
  std::vector<Extended> boundary_fixed_points(double tol = 1e-12) const;

  static Mobius identity() { return {}; }
  static Mobius translation(double t) { return {1.0, t, 0.0, 1.0}; }
  static Mobius scaling(double s);
  /// Element gamma_t of the unipotent subgroup fixing p; p = inf gives z + t,
  /// finite p gives p + (z - p)/(1 + t (z - p)).
  static Mobius unipotent(const Extended& p, double t);
  /// Real representative of the half-plane map C^-1 g C for a disk
  /// automorphism g; throws DomainError if g does not preserve the disk.
  static Mobius from_disk_automorphism(const ComplexMobius& g);

  /// Disk automorphism C gamma C^-1.
  ComplexMobius disk_automorphism() const;

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

Mobius operator*(const Mobius& lhs, const Mobius& rhs);

/// Cayley transform z -> (i - z)/(i + z), H -> D, inf -> -1.
Extended cayley(const Extended& z);
Complex cayley(Complex z);
/// w -> i(1 - w)/(1 + w), D -> H, -1 -> inf.
Extended cayley_inv(const Extended& w);
Complex cayley_inv(Complex w);

/// Curvature -1 Poincare distance on H.
double poincare_dist(Complex z, Complex w);
/// Carathéodory/Kobayashi distance on H^n: max of coordinate distances.
double polyplane_dist(const PolyPoint& z, const PolyPoint& w);

}  // namespace holoflow
