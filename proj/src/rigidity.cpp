#include "holoflow/rigidity.hpp"

#include "holoflow/parallel.hpp"
#include "holoflow/sampling.hpp"

#include <Eigen/LU>
#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>

namespace holoflow {

CircleSamples::CircleSamples(double radius, CVector values) : radius_(radius), values_(std::move(values)) {
  if (!(radius_ > 0.0)) throw DomainError("CircleSamples: radius must be positive");
  if (values_.size() < 8) throw DomainError("CircleSamples: need at least 8 samples");
}

CircleSamples CircleSamples::sample(const std::function<Complex(Complex)>& phi, double radius, int count) {
  if (count < 8) throw DomainError("CircleSamples: need at least 8 samples");
  CVector v(count);
  for (int k = 0; k < count; ++k) v[k] = phi(std::polar(radius, 2.0 * std::numbers::pi * k / count));
  return {radius, std::move(v)};
}

Complex CircleSamples::node(int k) const { return std::polar(radius_, 2.0 * std::numbers::pi * k / size()); }

Complex poisson_eval(const CircleSamples& s, Complex z) {
  const double r = s.radius();
  if (!(std::abs(z) < r)) throw DomainError(fmt::format("poisson_eval: |z| = {:.17g} >= r = {:.17g}", std::abs(z), r));
  if (z == 0.0) return s.values().mean();
  const double num = r * r - std::norm(z);
  Complex acc = 0.0;
  for (int k = 0; k < s.size(); ++k) acc += s.values()[k] * (num / std::norm(s.node(k) - z));
  return acc / static_cast<double>(s.size());
}

double abs_identity_residual(const CircleSamples& s, double center_tol) {
  const double center = poisson_eval(s, 0.0).real();
  if (std::abs(center) > center_tol)
    throw DomainError(fmt::format("abs_identity_residual: mean value {:.3e} at the center is not 0", center));
  const RVector phi = s.values().real();
  const double abs_int = phi.cwiseAbs().mean();
  const double neg_int = (-phi).cwiseMax(0.0).mean();
  return std::abs(abs_int - 2.0 * neg_int);
}

GrowthCheck growth_bound(const CircleSamples& s, double c) {
  const RVector phi = s.values().real();
  GrowthCheck g;
  g.integral = phi.cwiseAbs().mean();
  g.bound = 2.0 * c * s.radius();
  g.hypothesis = phi.minCoeff() >= -c * s.radius();
  g.holds = g.integral <= g.bound + 1e-8;
  return g;
}

// ---------------------------------------------------------------------------

namespace {

struct DiagChange {
  Eigen::MatrixXd forward;
  Eigen::MatrixXd backward;
};

const DiagChange& diag_change(int n) {
  if (n < 2 || n > kMaxArity) throw DomainError("diagonal coordinates need 2 <= n <= 16");
  static const auto table = [] {
    std::vector<DiagChange> out;
    for (int k = 2; k <= kMaxArity; ++k) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
      m.row(0).setConstant(1.0 / k);
      for (int j = 1; j < k; ++j) {
        m(j, j - 1) = -1.0;
        m(j, j) = 1.0;
      }
      out.push_back({m, m.fullPivLu().inverse()});
    }
    return out;
  }();
  return table[n - 2];
}

}  // namespace

DiagCoords to_diag(const PolyPoint& z) {
  const int n = z.size();
  const CVector v = diag_change(n).forward.cast<Complex>() * z.coords();
  return {v[0], v.tail(n - 1)};
}

CVector from_diag(const DiagCoords& c) {
  const int n = static_cast<int>(c.d.size()) + 1;
  CVector v(n);
  v << c.a, c.d;
  return diag_change(n).backward.cast<Complex>() * v;
}

bool omega_contains(Complex a, const CVector& d) {
  const CVector z = from_diag({a, d});
  return (z.array().imag() > 0.0).all() && z.allFinite();
}

std::vector<CVector> default_d_grid(int n) {
  if (n < 2) throw DomainError("default_d_grid: need n >= 2");
  std::vector<Complex> axis;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) axis.emplace_back(-0.25 + 0.125 * a, -0.25 + 0.125 * b);
  const int m = n - 1;
  long double total = 1;
  for (int k = 0; k < m; ++k) total *= axis.size();
  const std::size_t count = total < 2000 ? static_cast<std::size_t>(total) : 2000;
  std::vector<CVector> out;
  for (std::size_t s = 0; s < count; ++s) {
    auto index = static_cast<unsigned long long>(static_cast<long double>(s) * total / count);
    CVector d(m);
    for (int k = 0; k < m; ++k) {
      d[k] = axis[index % axis.size()];
      index /= axis.size();
    }
    out.push_back(std::move(d));
  }
  return out;
}

RigidityResidual rigidity_residual(const HoloMap& f, Complex a1, Complex a2, const std::vector<CVector>& d_grid) {
  if (f.source() != Domain::HalfPlane) throw DomainError("rigidity_residual: map must be on H^n");
  auto h = [&](Complex a, const CVector& d) {
    if (!omega_contains(a, d)) throw DomainError("rigidity_residual: grid point outside Omega(a)");
    return eval(f, PolyPoint(from_diag({a, d}), Domain::HalfPlane)) - a;
  };
  std::vector<RigidityResidual> per(d_grid.size());
  parallel_for(d_grid.size(), [&](std::size_t k) {
    const Complex h1 = h(a1, d_grid[k]);
    per[k] = {std::abs(h1 - h(a2, d_grid[k])), std::abs(h1)};
  });
  RigidityResidual out;
  for (const auto& p : per) {
    out.a_dependence = std::max(out.a_dependence, p.a_dependence);
    out.sup_h = std::max(out.sup_h, p.sup_h);
  }
  return out;
}

RigidityResidual rigidity_residual(const HoloMap& f) {
  return rigidity_residual(f, kI, 2.0 * kI, default_d_grid(f.arity()));
}

// ---------------------------------------------------------------------------

std::vector<CVector> polarization_v_samples(const std::vector<Rect>& u) {
  const int n = static_cast<int>(u.size());
  if (n < 2) throw DomainError("polarization_check: need n >= 2");
  double re_lo = -INFINITY, re_hi = INFINITY;
  for (const Rect& r : u) {
    re_lo = std::max(re_lo, r.re_lo);
    re_hi = std::min(re_hi, r.re_hi);
  }
  std::vector<double> reals;
  for (double r : {-1.0, 0.0, 1.0})
    if (r >= re_lo && r <= re_hi) reals.push_back(r);
  if (reals.empty() && re_lo <= re_hi) reals.push_back(0.5 * (re_lo + re_hi));

  const int m = n - 1;
  constexpr std::array<int, 5> kSteps{-2, -1, 0, 1, 2};
  long double total = 1;
  for (int k = 0; k < m; ++k) total *= kSteps.size();
  const std::size_t count = total < 2000 ? static_cast<std::size_t>(total) : 2000;

  std::vector<CVector> out;
  for (double scale : {1.0, 0.5, 0.25, 0.1}) {
    for (std::size_t s = 0; s < count; ++s) {
      auto index = static_cast<unsigned long long>(static_cast<long double>(s) * total / count);
      RVector t = RVector::Zero(n);
      for (int k = 0; k < m; ++k) {
        const double c = scale * kSteps[index % kSteps.size()];
        index /= kSteps.size();
        t[k] += c;
        t[k + 1] -= c;
      }
      for (double r : reals) {
        CVector z(n);
        bool inside = true;
        for (int j = 0; j < n && inside; ++j) {
          z[j] = Complex(r, t[j]);
          inside = u[j].contains(z[j]);
        }
        if (inside) out.push_back(std::move(z));
      }
    }
  }
  return out;
}

PolarizationReport polarization_check(const HoloMap& h, const std::vector<Rect>& u, double tol) {
  if (h.arity() != static_cast<int>(u.size())) throw DomainError("polarization_check: arity mismatch");
  const std::vector<CVector> v = polarization_v_samples(u);
  if (v.empty()) throw Error("polarization_check: U n V has no sample points");

  PolarizationReport rep;
  rep.v_samples = v.size();
  for (const auto& z : v) {
    const Complex val = eval_raw(h, z);
    if (std::abs(val) > rep.max_on_v || !rep.witness) {
      rep.max_on_v = std::abs(val);
      rep.witness = z;
      rep.witness_value = val;
    }
  }
  if (rep.max_on_v > tol) {
    rep.message = fmt::format("does not vanish on V: |h| = {:.3e} at the witness point", rep.max_on_v);
    return rep;
  }
  rep.vanishes_on_v = true;
  rep.witness.reset();
  rep.witness_value = 0.0;

  HalfPlaneBox unit;
  unit.re_max = 1.0;
  const auto pts = halton_points(h.arity(), 1000, Domain::Plane, unit);
  rep.u_samples = pts.size();
  for (const auto& p : pts) {
    CVector z(h.arity());
    for (int j = 0; j < h.arity(); ++j) {
      const Rect& r = u[j];
      z[j] = {r.re_lo + 0.5 * (r.re_hi - r.re_lo) * (p[j].real() + 1.0),
              r.im_lo + 0.5 * (r.im_hi - r.im_lo) * (p[j].imag() + 1.0)};
    }
    rep.max_on_u = std::max(rep.max_on_u, std::abs(eval_raw(h, z)));
  }
  rep.message = fmt::format("vanishes on V (max {:.3e}); max on U {:.3e}", rep.max_on_v, rep.max_on_u);
  return rep;
}

}  // namespace holoflow
