#include "holoflow/entire.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <numbers>

namespace holoflow {

using detail::FamilyKind;
using detail::Node;
using detail::NodePtr;
using detail::Op;

namespace {

void check_entire(const Node& n) {
  switch (n.op) {
    case Op::Coord:
    case Op::Const: return;
    case Op::Neg:
    case Op::Exp: check_entire(*n.lhs); return;
    case Op::Pow:
      if (n.index < 0) throw DomainError("EntireMap: negative powers are not entire");
      check_entire(*n.lhs);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      check_entire(*n.lhs);
      check_entire(*n.rhs);
      return;
    case Op::Family:
      if (n.family == FamilyKind::Linear) return;
      break;
    default: break;
  }
  throw DomainError("EntireMap: unsupported node " + detail::describe(n));
}

std::vector<NodePtr> shifted_coordinates(int n, double t) {
  std::vector<NodePtr> out;
  for (int j = 0; j < n; ++j) out.push_back(detail::make_binary(Op::Sub, detail::make_coord(j), detail::make_const(t)));
  return out;
}

EntireMap rewrap(NodePtr root, int n) { return EntireMap(HoloMap(std::move(root), n, Domain::Plane)); }

}  // namespace

EntireMap::EntireMap(HoloMap map) : map_(std::move(map)) {
  if (map_.source() != Domain::Plane) throw DomainError("EntireMap: source must be C^n");
  check_entire(*map_.root());
}

EntireMap EntireMap::coordinate(int j, int n) { return EntireMap(holoflow::coordinate(j, n, Domain::Plane)); }

EntireMap EntireMap::constant(Complex c, int n) { return EntireMap(holoflow::constant(c, n, Domain::Plane)); }

EntireMap EntireMap::mean(int n) {
  return rewrap(detail::make_linear(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n)), n);
}

EntireMap operator+(const EntireMap& a, const EntireMap& b) { return EntireMap(a.map() + b.map()); }
EntireMap operator-(const EntireMap& a, const EntireMap& b) { return EntireMap(a.map() - b.map()); }
EntireMap operator*(const EntireMap& a, const EntireMap& b) { return EntireMap(a.map() * b.map()); }
EntireMap operator*(Complex c, const EntireMap& a) { return EntireMap(c * a.map()); }
EntireMap operator+(const EntireMap& a, Complex c) { return EntireMap(a.map() + c); }
EntireMap exp(const EntireMap& a) { return EntireMap(exp(a.map())); }
EntireMap pow(const EntireMap& a, int k) { return EntireMap(pow(a.map(), k)); }

EntireMap build_F(const EntireMap& phi) {
  const int n = phi.arity();
  const EntireMap g = EntireMap::mean(n);
  const EntireMap on_diagonal =
      rewrap(detail::substitute(phi.map().root(), std::vector<NodePtr>(static_cast<std::size_t>(n), g.map().root())), n);
  return phi - on_diagonal + g;
}

EntireMap right_inverse(const EntireMap& f, double tol) {
  const double res = diagonal_residual(f);
  if (!(res <= tol))
    throw DomainError(fmt::format("right_inverse: diagonal identity violated by {:.3e}", res));
  return f - EntireMap::mean(f.arity());
}

EntireMap shift_L(const EntireMap& phi) {
  return rewrap(detail::substitute(phi.map().root(), shifted_coordinates(phi.arity(), 1.0)), phi.arity());
}

EntireMap translate_prime(const EntireMap& f, double t) {
  return rewrap(detail::substitute(f.map().root(), shifted_coordinates(f.arity(), t)), f.arity()) + t;
}

EntireMap time_one_S(const EntireMap& f) { return translate_prime(f, 1.0); }

EntireMap periodic_point(int k, int n) {
  if (k < 1) throw DomainError("periodic_point: k must be >= 1");
  const Complex c = 2.0 * std::numbers::pi * kI / static_cast<double>(k);
  return build_F(exp(c * EntireMap::coordinate(0, n)));
}

// ---------------------------------------------------------------------------

namespace {

// Product of `axis` over n coordinates, thinned by a deterministic index
// stride to at most `cap` points.
std::vector<CVector> product_grid(const std::vector<Complex>& axis, int n, std::size_t cap) {
  const std::size_t base = axis.size();
  long double total = 1;
  for (int k = 0; k < n; ++k) total *= static_cast<long double>(base);
  const std::size_t count = total < cap ? static_cast<std::size_t>(total) : cap;
  std::vector<CVector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    auto index = static_cast<unsigned long long>(static_cast<long double>(s) * total / count);
    CVector z(n);
    for (int k = 0; k < n; ++k) {
      z[k] = axis[index % base];
      index /= base;
    }
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

const std::vector<CVector>& entire_grid(int n) {
  if (n < 1 || n > kMaxArity) throw DomainError("entire_grid: bad arity");
  static const auto grids = [] {
    std::vector<Complex> axis;
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) axis.emplace_back(-2.0 + 0.5 * a, -2.0 + 0.5 * b);
    std::vector<std::vector<CVector>> out;
    for (int k = 1; k <= kMaxArity; ++k) out.push_back(product_grid(axis, k, 10000));
    return out;
  }();
  return grids[n - 1];
}

const std::vector<Complex>& diagonal_samples() {
  static const std::vector<Complex> samples = [] {
    std::vector<Complex> out;
    for (int a = 0; a < 10; ++a)
      for (int b = 0; b < 10; ++b) out.emplace_back(-2.0 + 4.0 * a / 9.0, -2.0 + 4.0 * b / 9.0);
    return out;
  }();
  return samples;
}

double sup_residual(const EntireMap& f, const EntireMap& g, const std::vector<CVector>& grid) {
  double worst = 0.0;
  for (const auto& z : grid) worst = std::max(worst, std::abs(f(z) - g(z)));
  return worst;
}

double diagonal_residual(const EntireMap& f) {
  double worst = 0.0;
  for (Complex l : diagonal_samples()) worst = std::max(worst, std::abs(f(CVector::Constant(f.arity(), l)) - l));
  return worst;
}

std::optional<Witness> im_negativity_witness(const EntireMap& f) {
  std::vector<Complex> axis;
  for (int a = 0; a < 17; ++a)
    for (double im : {0.1, 0.25, 0.5, 1.0, 2.0}) axis.emplace_back(-2.0 + 0.25 * a, im);
  std::optional<Witness> best;
  for (const auto& z : product_grid(axis, f.arity(), 10000)) {
    const Complex v = f(z);
    if (v.imag() < 0.0 && (!best || v.imag() < best->value.imag())) best = Witness{PolyPoint(z, Domain::HalfPlane), v};
  }
  return best;
}

Complex second_partial(const EntireMap& f, const CVector& z, int j) {
  return cauchy_second_partial(f.map(), PolyPoint(z, Domain::Plane), j);
}

}  // namespace holoflow
