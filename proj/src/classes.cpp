#include "holoflow/classes.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace holoflow {

std::span<const Complex> default_class_samples() {
  static const std::array<Complex, 4> samples{Complex(0.0, 1.0), Complex(0.0, 2.0), Complex(1.0, 1.0),
                                              Complex(-3.0, 0.5)};
  return samples;
}

ClassReport check_class(const HoloMap& f_in, MapClass map_class, std::span<const Complex> samples, double tol) {
  ClassReport report;
  report.map_class = map_class;
  report.tol = tol;
  report.samples.assign(samples.begin(), samples.end());
  const HoloMap f = half_plane_model(f_in);
  const int n = f.arity();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  CVector base;
  try {
    base = partials(f, PolyPoint::diagonal(kI, n, Domain::HalfPlane));
  } catch (const Error& e) {
    report.alpha = RVector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    report.max_diag_residual = report.max_deriv_residual = kInf;
    report.failure = e.what();
    return report;
  }
  report.alpha = base.real();

  const RVector reference = map_class == MapClass::C ? RVector::Constant(n, 1.0 / n) : report.alpha;
  double diag = 0.0;
  double deriv = base.imag().cwiseAbs().maxCoeff();
  for (const Complex lambda : samples) {
    try {
      const PolyPoint p = PolyPoint::diagonal(lambda, n, Domain::HalfPlane);
      const Jet j = eval_jet(f, p);
      diag = std::max(diag, std::abs(j.value - lambda));
      for (int k = 0; k < n; ++k) deriv = std::max(deriv, std::abs(j.grad[k] - reference[k]));
    } catch (const Error& e) {
      diag = deriv = kInf;
      if (report.failure.empty()) report.failure = e.what();
    }
  }
  report.max_diag_residual = diag;
  report.max_deriv_residual = deriv;

  bool ok = diag <= tol && deriv <= tol;
  if (map_class == MapClass::D) {
    ok = ok && (report.alpha.array() >= -tol).all() && std::abs(report.alpha.sum() - 1.0) <= n * tol;
  }
  report.pass = ok;
  return report;
}

HoloMap half_plane_model(const HoloMap& f) {
  switch (f.source()) {
    case Domain::HalfPlane: return f;
    case Domain::Disk: return cayley_conjugate(f);
    case Domain::Plane: break;
  }
  throw DomainError("map on C^n has no half-plane model");
}

HoloMap cayley_conjugate(const HoloMap& f) {
  const int n = f.arity();
  auto swap_model = [](Domain d) {
    if (d == Domain::HalfPlane) return Domain::Disk;
    if (d == Domain::Disk) return Domain::HalfPlane;
    return d;
  };
  if (f.source() == Domain::Disk) {
    // H^n -> D^n -> target, then back to H.
    const HoloMap inner = pre_compose(std::vector<ComplexMobius>(n, ComplexMobius::cayley()), f, Domain::HalfPlane);
    return post_compose(ComplexMobius::cayley_inverse(), inner, swap_model(f.target()));
  }
  if (f.source() == Domain::HalfPlane) {
    const HoloMap inner =
        pre_compose(std::vector<ComplexMobius>(n, ComplexMobius::cayley_inverse()), f, Domain::Disk);
    return post_compose(ComplexMobius::cayley(), inner, swap_model(f.target()));
  }
  throw DomainError("cayley_conjugate: map on C^n");
}

HoloMap conjugate_by(const ComplexMobius& m, const HoloMap& f) {
  const HoloMap inner = pre_compose(std::vector<ComplexMobius>(f.arity(), m.inverse()), f, f.source());
  return post_compose(m, inner, f.target());
}

HoloMap conjugate_action(const Mobius& g, const HoloMap& f) {
  switch (f.source()) {
    case Domain::HalfPlane: return conjugate_by(g.complex(), f);
    case Domain::Disk: return conjugate_by(g.disk_automorphism(), f);
    case Domain::Plane: break;
  }
  throw DomainError("conjugate_action: map on C^n");
}

HoloMap normalize_to_c(const HoloMap& f_in, const RVector& alpha) {
  const HoloMap f = half_plane_model(f_in);
  const int n = f.arity();
  if (n == 1) throw DomainError("normalize_to_c: undefined for n = 1 (the map is already the identity)");
  if (alpha.size() != n) throw DomainError("normalize_to_c: alpha has the wrong length");
  const RVector weights = (RVector::Ones(n) - alpha) / (n - 1.0);
  const HoloMap g = linear_map(weights);
  return ((1.0 / n) * f + ((n - 1.0) / n) * g).with_target(Domain::HalfPlane);
}

}  // namespace holoflow
