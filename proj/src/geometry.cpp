#include "holoflow/geometry.hpp"

#include <fmt/format.h>

#include <cmath>

namespace holoflow {

std::string to_string(Domain d) {
  switch (d) {
    case Domain::HalfPlane: return "half-plane";
    case Domain::Disk: return "disk";
    case Domain::Plane: return "plane";
  }
  return "?";
}

bool interior(Domain d, Complex w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
  switch (d) {
    case Domain::HalfPlane: return w.imag() > 0.0;
    case Domain::Disk: return std::abs(w) < 1.0;
    case Domain::Plane: return true;
  }
  return false;
}

bool operator==(const Extended& a, const Extended& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.value == b.value;
}

std::string to_string(const Extended& e) {
  if (e.infinite) return "inf";
  if (e.value.imag() == 0.0) return fmt::format("{:.17g}", e.value.real());
  return fmt::format("{:.17g}{:+.17g}i", e.value.real(), e.value.imag());
}

PolyPoint::PolyPoint(CVector coords, Domain domain) : coords_(std::move(coords)), domain_(domain) {
  if (coords_.size() == 0) throw DomainError("PolyPoint: empty coordinate vector");
  if (coords_.size() > kMaxArity)
    throw DomainError(fmt::format("PolyPoint: {} coordinates exceeds the supported maximum {}",
                                  coords_.size(), kMaxArity));
  for (Eigen::Index j = 0; j < coords_.size(); ++j) {
    if (!interior(domain_, coords_[j]))
      throw DomainError(fmt::format("PolyPoint: coordinate {} = ({:.17g}, {:.17g}) is not interior to the {}",
                                    j + 1, coords_[j].real(), coords_[j].imag(), to_string(domain_)));
  }
}

PolyPoint PolyPoint::diagonal(Complex lambda, int n, Domain domain) {
  return PolyPoint(CVector::Constant(n, lambda), domain);
}

// ---------------------------------------------------------------------------
// ComplexMobius

Extended ComplexMobius::apply(const Extended& z) const {
  if (z.infinite) {
    if (c == 0.0) return Extended::infinity();
    return Extended(a / c);
  }
  const Complex den = c * z.value + d;
  if (den == 0.0) return Extended::infinity();
  return Extended((a * z.value + b) / den);
}

Complex ComplexMobius::apply_finite(Complex z) const {
  const Complex den = c * z + d;
  if (den == 0.0)
    throw EvalError(fmt::format("Mobius pole at ({:.17g}, {:.17g})", z.real(), z.imag()));
  return (a * z + b) / den;
}

Complex ComplexMobius::derivative(Complex z) const {
  const Complex den = c * z + d;
  if (den == 0.0) throw EvalError("Mobius derivative at the pole");
  return det() / (den * den);
}

ComplexMobius ComplexMobius::inverse() const { return {d, -b, -c, a}; }

ComplexMobius ComplexMobius::normalized() const {
  const Complex s = std::sqrt(det());
  if (s == 0.0) throw DomainError("degenerate Mobius transformation");
  return {a / s, b / s, c / s, d / s};
}

ComplexMobius ComplexMobius::cayley() { return {-1.0, kI, 1.0, kI}; }
ComplexMobius ComplexMobius::cayley_inverse() { return {-kI, kI, 1.0, 1.0}; }

ComplexMobius ComplexMobius::rotation(double angle) { return {std::polar(1.0, angle), 0.0, 0.0, 1.0}; }

ComplexMobius ComplexMobius::blaschke(Complex a) {
  if (std::abs(a) >= 1.0) throw DomainError("blaschke: |a| must be < 1");
  return {1.0, -a, -std::conj(a), 1.0};
}

ComplexMobius operator*(const ComplexMobius& l, const ComplexMobius& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

// ---------------------------------------------------------------------------
// Mobius

Mobius::Mobius(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det))
    throw DomainError(fmt::format("Mobius: determinant {:.17g} is not positive", det));
  const double s = 1.0 / std::sqrt(det);
  a_ = a * s;
  b_ = b * s;
  c_ = c * s;
  d_ = d * s;
  // PSL2: pick the representative with c > 0, or c == 0 and d > 0.
  if (c_ < 0.0 || (c_ == 0.0 && d_ < 0.0)) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

MobiusKind Mobius::kind(double tol) const {
  if (std::abs(b_) <= tol && std::abs(c_) <= tol && std::abs(a_ - d_) <= tol) return MobiusKind::Identity;
  const double tr = std::abs(trace());
  if (std::abs(tr - 2.0) <= tol) return MobiusKind::Parabolic;
  return tr < 2.0 ? MobiusKind::Elliptic : MobiusKind::Hyperbolic;
}

std::vector<Extended> Mobius::boundary_fixed_points(double tol) const {
  std::vector<Extended> out;
  if (kind(tol) == MobiusKind::Identity) return out;  // every point is fixed
  if (std::abs(c_) <= tol) {
    out.push_back(Extended::infinity());
    if (std::abs(d_ - a_) > tol) out.emplace_back(b_ / (d_ - a_));
    return out;
  }
  const double disc = (d_ - a_) * (d_ - a_) + 4.0 * b_ * c_;
  if (disc < -tol) return out;  // elliptic: fixed point lies inside H
  if (std::abs(trace() * trace() - 4.0) <= tol) {
    out.emplace_back((a_ - d_) / (2.0 * c_));
    return out;
  }
  const double root = std::sqrt(std::max(disc, 0.0));
  out.emplace_back((a_ - d_ - root) / (2.0 * c_));
  out.emplace_back((a_ - d_ + root) / (2.0 * c_));
  return out;
}

Mobius Mobius::scaling(double s) {
  if (!(s > 0.0)) throw DomainError("Mobius::scaling: factor must be positive");
  return {s, 0.0, 0.0, 1.0};
}

Mobius Mobius::unipotent(const Extended& p, double t) {
  if (p.infinite) return translation(t);
  if (p.value.imag() != 0.0) throw DomainError("unipotent: fixed point must lie on R u {inf}");
  const double q = p.value.real();
  return {1.0 + t * q, -t * q * q, t, 1.0 - t * q};
}

Mobius Mobius::from_disk_automorphism(const ComplexMobius& g) {
  const ComplexMobius h = (ComplexMobius::cayley_inverse() * g * ComplexMobius::cayley()).normalized();
  const double scale = std::max({std::abs(h.a), std::abs(h.b), std::abs(h.c), std::abs(h.d)});
  const double tol = 1e-9 * scale;
  if (std::abs(h.a.imag()) > tol || std::abs(h.b.imag()) > tol || std::abs(h.c.imag()) > tol ||
      std::abs(h.d.imag()) > tol)
    throw DomainError("from_disk_automorphism: map does not preserve the unit disk");
  return {h.a.real(), h.b.real(), h.c.real(), h.d.real()};
}

ComplexMobius Mobius::disk_automorphism() const {
  return ComplexMobius::cayley() * complex() * ComplexMobius::cayley_inverse();
}

Mobius operator*(const Mobius& l, const Mobius& r) {
  return {l.a() * r.a() + l.b() * r.c(), l.a() * r.b() + l.b() * r.d(), l.c() * r.a() + l.d() * r.c(),
          l.c() * r.b() + l.d() * r.d()};
}

// ---------------------------------------------------------------------------

Extended cayley(const Extended& z) { return ComplexMobius::cayley().apply(z); }

Complex cayley(Complex z) {
  if (z == -kI) throw EvalError("cayley: pole at -i");
  return (kI - z) / (kI + z);
}

Extended cayley_inv(const Extended& w) { return ComplexMobius::cayley_inverse().apply(w); }

Complex cayley_inv(Complex w) {
  if (w == -1.0) throw EvalError("cayley_inv: pole at -1");
  return kI * (1.0 - w) / (1.0 + w);
}

double poincare_dist(Complex z, Complex w) {
  if (!(z.imag() > 0.0) || !(w.imag() > 0.0)) throw DomainError("poincare_dist: arguments must lie in H");
  const double ratio = std::abs(z - w) / std::abs(z - std::conj(w));
  return 2.0 * std::atanh(ratio);
}

double polyplane_dist(const PolyPoint& z, const PolyPoint& w) {
  if (z.domain() != Domain::HalfPlane || w.domain() != Domain::HalfPlane)
    throw DomainError("polyplane_dist: points must lie in H^n");
  if (z.size() != w.size()) throw DomainError("polyplane_dist: dimension mismatch");
  double best = 0.0;
  for (int j = 0; j < z.size(); ++j) best = std::max(best, poincare_dist(z[j], w[j]));
  return best;
}

}  // namespace holoflow
