#include "holoflow/holomap.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

namespace holoflow {
namespace detail {

namespace {

NodePtr finish(Node n) { return std::make_shared<const Node>(std::move(n)); }

std::string mobius_text(const ComplexMobius& m) {
  auto c = [](Complex v) {
    if (v.imag() == 0.0) return fmt::format("{:.6g}", v.real());
    return fmt::format("({:.6g}{:+.6g}i)", v.real(), v.imag());
  };
  return fmt::format("M[{}, {}, {}, {}]", c(m.a), c(m.b), c(m.c), c(m.d));
}

}  // namespace

NodePtr make_coord(int j) {
  Node n;
  n.op = Op::Coord;
  n.index = j;
  return finish(std::move(n));
}

NodePtr make_const(Complex c) {
  Node n;
  n.op = Op::Const;
  n.value = c;
  return finish(std::move(n));
}

NodePtr make_unary(Op op, NodePtr x) {
  Node n;
  n.op = op;
  n.lhs = std::move(x);
  return finish(std::move(n));
}

NodePtr make_pow(NodePtr x, int k) {
  Node n;
  n.op = Op::Pow;
  n.index = k;
  n.lhs = std::move(x);
  return finish(std::move(n));
}

NodePtr make_binary(Op op, NodePtr l, NodePtr r) {
  Node n;
  n.op = op;
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return finish(std::move(n));
}

NodePtr make_post(const ComplexMobius& m, NodePtr x) {
  if (x->op == Op::PostMobius) return make_post((m * x->post).normalized(), x->lhs);
  Node n;
  n.op = Op::PostMobius;
  n.post = m.normalized();
  n.lhs = std::move(x);
  return finish(std::move(n));
}

NodePtr make_pre(std::vector<ComplexMobius> ms, NodePtr x) {
  if (x->op == Op::PostMobius) return make_post(x->post, make_pre(std::move(ms), x->lhs));
  if (x->op == Op::PreMobius) {
    if (x->pre.size() != ms.size()) throw DomainError("pre-composition: arity mismatch");
    for (std::size_t j = 0; j < ms.size(); ++j) ms[j] = (x->pre[j] * ms[j]).normalized();
    return make_pre(std::move(ms), x->lhs);
  }
  Node n;
  n.op = Op::PreMobius;
  for (auto& m : ms) m = m.normalized();
  n.pre = std::move(ms);
  n.lhs = std::move(x);
  return finish(std::move(n));
}

NodePtr make_linear(std::vector<double> weights) {
  Node n;
  n.op = Op::Family;
  n.family = FamilyKind::Linear;
  n.weights = std::move(weights);
  return finish(std::move(n));
}

NodePtr make_gnu(double angle) {
  Node n;
  n.op = Op::Family;
  n.family = FamilyKind::GNu;
  n.angle = angle;
  return finish(std::move(n));
}

NodePtr make_hr(const Extended& r) {
  Node n;
  n.op = Op::Family;
  n.family = FamilyKind::HR;
  n.param = r;
  return finish(std::move(n));
}

NodePtr make_average(NodePtr child, double radius, int nodes) {
  Node n;
  n.op = Op::Average;
  n.lhs = std::move(child);
  n.radius = radius;
  n.nodes = nodes;
  return finish(std::move(n));
}

NodePtr substitute(const NodePtr& root, const std::vector<NodePtr>& repl) {
  const Node& n = *root;
  switch (n.op) {
    case Op::Coord:
      if (n.index < 0 || n.index >= static_cast<int>(repl.size()))
        throw DomainError("substitute: coordinate index out of range");
      return repl[n.index];
    case Op::Const: return root;
    case Op::Neg:
    case Op::Exp: return make_unary(n.op, substitute(n.lhs, repl));
    case Op::Pow: return make_pow(substitute(n.lhs, repl), n.index);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return make_binary(n.op, substitute(n.lhs, repl), substitute(n.rhs, repl));
    case Op::PostMobius: return make_post(n.post, substitute(n.lhs, repl));
    case Op::Family:
      if (n.family == FamilyKind::Linear) {
        NodePtr acc;
        for (std::size_t j = 0; j < n.weights.size(); ++j) {
          if (j >= repl.size()) throw DomainError("substitute: arity mismatch");
          NodePtr term = make_binary(Op::Mul, make_const(n.weights[j]), repl[j]);
          acc = acc ? make_binary(Op::Add, acc, term) : term;
        }
        return acc ? acc : make_const(0.0);
      }
      [[fallthrough]];
    case Op::PreMobius:
    case Op::Average: break;
  }
  throw Error("substitute: node kind does not support coordinate substitution: " + describe(n));
}

bool contains(const NodePtr& root, Op op) {
  if (!root) return false;
  if (root->op == op) return true;
  return contains(root->lhs, op) || contains(root->rhs, op);
}

std::string describe(const Node& n) {
  switch (n.op) {
    case Op::Coord: return fmt::format("z{}", n.index + 1);
    case Op::Const:
      if (n.value.imag() == 0.0) return fmt::format("{:.6g}", n.value.real());
      return fmt::format("({:.6g}{:+.6g}i)", n.value.real(), n.value.imag());
    case Op::Neg: return "-(" + describe(*n.lhs) + ")";
    case Op::Exp: return "exp(" + describe(*n.lhs) + ")";
    case Op::Pow: return fmt::format("({})^{}", describe(*n.lhs), n.index);
    case Op::Add: return "(" + describe(*n.lhs) + " + " + describe(*n.rhs) + ")";
    case Op::Sub: return "(" + describe(*n.lhs) + " - " + describe(*n.rhs) + ")";
    case Op::Mul: return describe(*n.lhs) + "*" + describe(*n.rhs);
    case Op::Div: return describe(*n.lhs) + "/" + describe(*n.rhs);
    case Op::PostMobius: return mobius_text(n.post) + "(" + describe(*n.lhs) + ")";
    case Op::PreMobius: {
      std::string s = "(" + describe(*n.lhs) + ")o(";
      for (std::size_t j = 0; j < n.pre.size(); ++j) s += (j ? ", " : "") + mobius_text(n.pre[j]);
      return s + ")";
    }
    case Op::Family:
      switch (n.family) {
        case FamilyKind::Linear: {
          std::string s = "linear(";
          for (std::size_t j = 0; j < n.weights.size(); ++j) s += fmt::format("{}{:.6g}", j ? ", " : "", n.weights[j]);
          return s + ")";
        }
        case FamilyKind::GNu: return fmt::format("g_nu({:.6g})", n.angle);
        case FamilyKind::HR: return "h_r(" + to_string(n.param) + ")";
      }
      break;
    case Op::Average: return fmt::format("average({:.6g}, {}; {})", n.radius, n.nodes, describe(*n.lhs));
  }
  return "?";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Evaluation engine

namespace {

using detail::FamilyKind;
using detail::Node;
using detail::Op;

Jet operator+(const Jet& a, const Jet& b) { return {a.value + b.value, a.grad + b.grad}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.value - b.value, a.grad - b.grad}; }
Jet operator*(const Jet& a, const Jet& b) { return {a.value * b.value, a.grad * b.value + b.grad * a.value}; }
Jet operator/(const Jet& a, const Jet& b) {
  const Complex q = a.value / b.value;
  return {q, (a.grad - b.grad * q) / b.value};
}

Complex value_of(Complex v) { return v; }
Complex value_of(const Jet& j) { return j.value; }

template <class T> T variable(const Complex* z, int j, int n);
template <> Complex variable<Complex>(const Complex* z, int j, int) { return z[j]; }
template <> Jet variable<Jet>(const Complex* z, int j, int n) {
  Jet out{z[j], Gradient::Zero(n)};
  out.grad[j] = 1.0;
  return out;
}

template <class T> T lift(Complex c, int n);
template <> Complex lift<Complex>(Complex c, int) { return c; }
template <> Jet lift<Jet>(Complex c, int n) { return {c, Gradient::Zero(n)}; }

Complex negate(Complex v) { return -v; }
Jet negate(const Jet& v) { return {-v.value, -v.grad}; }

Complex exponential(Complex v) { return std::exp(v); }
Jet exponential(const Jet& v) {
  const Complex e = std::exp(v.value);
  return {e, v.grad * e};
}

Complex int_power(Complex x, int k) {
  Complex base = k < 0 ? 1.0 / x : x;
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  Complex out = 1.0;
  while (e) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

Complex power(Complex v, int k) { return int_power(v, k); }
Jet power(const Jet& v, int k) {
  if (k == 0) return {1.0, Gradient::Zero(v.grad.size())};
  const Complex lower = int_power(v.value, k - 1);
  return {lower * v.value, v.grad * (static_cast<double>(k) * lower)};
}

Complex mobius(const ComplexMobius& m, Complex v) { return m.apply_finite(v); }
Jet mobius(const ComplexMobius& m, const Jet& v) { return {m.apply_finite(v.value), v.grad * m.derivative(v.value)}; }

// Shared rational form (p m - z w)/(p - m), m = (z + w)/2, of g_nu and h_r.
template <class T> T rational_extremal(Complex p, const Complex* z, int n, const Node& node);

template <> Complex rational_extremal<Complex>(Complex p, const Complex* z, int, const Node& node) {
  const Complex m = 0.5 * (z[0] + z[1]);
  const Complex den = p - m;
  if (den == 0.0) throw EvalError("pole of " + detail::describe(node));
  return (p * m - z[0] * z[1]) / den;
}

template <> Jet rational_extremal<Jet>(Complex p, const Complex* z, int n, const Node& node) {
  Jet out{rational_extremal<Complex>(p, z, n, node), Gradient::Zero(n)};
  const Complex den = p - 0.5 * (z[0] + z[1]);
  out.grad[0] = (p - z[1]) * (p - z[1]) / (2.0 * den * den);
  out.grad[1] = (p - z[0]) * (p - z[0]) / (2.0 * den * den);
  return out;
}

template <class T> T family(const Node& node, const Complex* z, int n) {
  switch (node.family) {
    case FamilyKind::Linear: {
      if (static_cast<int>(node.weights.size()) != n) throw DomainError("linear map: arity mismatch");
      T acc = lift<T>(0.0, n);
      for (int j = 0; j < n; ++j) acc = acc + lift<T>(node.weights[j], n) * variable<T>(z, j, n);
      return acc;
    }
    case FamilyKind::GNu:
      if (n != 2) throw DomainError("g_nu: arity must be 2");
      return rational_extremal<T>(std::polar(1.0, node.angle), z, n, node);
    case FamilyKind::HR:
      if (n != 2) throw DomainError("h_r: arity must be 2");
      if (node.param.infinite) {
        T half = lift<T>(0.5, n);
        return half * variable<T>(z, 0, n) + half * variable<T>(z, 1, n);
      }
      return rational_extremal<T>(node.param.value, z, n, node);
  }
  throw EvalError("unknown family");
}

// 15-point Gauss-Kronrod rule with embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kAverageTol = 1e-12;
constexpr int kMaxDepth = 48;

double magnitude(Complex v) { return std::abs(v); }
double magnitude(const Jet& j) {
  double m = std::abs(j.value);
  for (Eigen::Index k = 0; k < j.grad.size(); ++k) m = std::max(m, std::abs(j.grad[k]));
  return m;
}
Complex scaled(Complex v, double s) { return v * s; }
Jet scaled(const Jet& v, double s) { return {v.value * s, v.grad * s}; }

template <class T> T eval_node(const Node& node, const Complex* z, int n);

template <class T> struct Panel {
  T kronrod;
  double error;
};

template <class F> auto gauss_kronrod(F&& integrand, double lo, double hi) {
  using T = decltype(integrand(0.0));
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const T fc = integrand(c);
  T k = scaled(fc, kWgk[7]);
  T g = scaled(fc, kWg[3]);
  for (int i = 0; i < 7; ++i) {
    const T f1 = integrand(c - h * kXgk[i]);
    const T f2 = integrand(c + h * kXgk[i]);
    const T sum = f1 + f2;
    k = k + scaled(sum, kWgk[i]);
    if (i % 2 == 1) g = g + scaled(sum, kWg[i / 2]);
  }
  k = scaled(k, h);
  g = scaled(g, h);
  return Panel<T>{k, magnitude(k - g)};
}

template <class T, class F> T adaptive(F&& integrand, double lo, double hi, double tol, int depth) {
  Panel<T> p = gauss_kronrod(integrand, lo, hi);
  if (p.error <= tol * (hi - lo) || depth >= kMaxDepth) return p.kronrod;
  const double mid = 0.5 * (lo + hi);
  return adaptive<T>(integrand, lo, mid, tol, depth + 1) + adaptive<T>(integrand, mid, hi, tol, depth + 1);
}

template <class T> T average_node(const Node& node, const Complex* z, int n) {
  const double r = node.radius;
  std::array<Complex, kMaxArity> shifted{};
  auto integrand = [&](double t) {
    for (int j = 0; j < n; ++j) shifted[j] = z[j] - t;
    T v = eval_node<T>(*node.lhs, shifted.data(), n);
    return v + lift<T>(t, n);
  };
  const int panels = std::max(1, (node.nodes + 14) / 15);
  const double width = 2.0 * r / panels;
  T acc = lift<T>(0.0, n);
  for (int p = 0; p < panels; ++p) {
    const double lo = -r + p * width;
    const double hi = (p + 1 == panels) ? r : lo + width;
    acc = acc + adaptive<T>(integrand, lo, hi, kAverageTol, 0);
  }
  return scaled(acc, 1.0 / (2.0 * r));
}

template <class T> T eval_node(const Node& node, const Complex* z, int n) {
  switch (node.op) {
    case Op::Coord:
      if (node.index >= n) throw DomainError(fmt::format("coordinate z{} used in a map of arity {}", node.index + 1, n));
      return variable<T>(z, node.index, n);
    case Op::Const: return lift<T>(node.value, n);
    case Op::Neg: return negate(eval_node<T>(*node.lhs, z, n));
    case Op::Exp: return exponential(eval_node<T>(*node.lhs, z, n));
    case Op::Pow: {
      T x = eval_node<T>(*node.lhs, z, n);
      if (node.index < 0 && value_of(x) == 0.0) throw EvalError("division by zero in " + detail::describe(node));
      return power(x, node.index);
    }
    case Op::Add: return eval_node<T>(*node.lhs, z, n) + eval_node<T>(*node.rhs, z, n);
    case Op::Sub: return eval_node<T>(*node.lhs, z, n) - eval_node<T>(*node.rhs, z, n);
    case Op::Mul: return eval_node<T>(*node.lhs, z, n) * eval_node<T>(*node.rhs, z, n);
    case Op::Div: {
      T den = eval_node<T>(*node.rhs, z, n);
      if (value_of(den) == 0.0) throw EvalError("division by zero in " + detail::describe(node));
      return eval_node<T>(*node.lhs, z, n) / den;
    }
    case Op::PostMobius: {
      T x = eval_node<T>(*node.lhs, z, n);
      try {
        return mobius(node.post, x);
      } catch (const EvalError&) {
        throw EvalError("Mobius pole in " + detail::describe(node));
      }
    }
    case Op::PreMobius: {
      if (static_cast<int>(node.pre.size()) != n) throw DomainError("pre-composition: arity mismatch");
      std::array<Complex, kMaxArity> w{};
      for (int j = 0; j < n; ++j) w[j] = node.pre[j].apply_finite(z[j]);
      T inner = eval_node<T>(*node.lhs, w.data(), n);
      if constexpr (std::is_same_v<T, Jet>) {
        for (int j = 0; j < n; ++j) inner.grad[j] *= node.pre[j].derivative(z[j]);
      }
      return inner;
    }
    case Op::Family: return family<T>(node, z, n);
    case Op::Average: return average_node<T>(node, z, n);
  }
  throw EvalError("unknown node");
}

void check_input(const HoloMap& f, const PolyPoint& z) {
  if (z.size() != f.arity())
    throw DomainError(fmt::format("arity mismatch: map takes {} variables, point has {}", f.arity(), z.size()));
  if (z.domain() != f.source())
    throw DomainError("domain mismatch: map is defined on the " + to_string(f.source()) + ", point lies in the " +
                      to_string(z.domain()));
}

void check_output(const HoloMap& f, Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvalError("non-finite value of " + f.to_string());
  if (f.target() != Domain::Plane && !interior(f.target(), v))
    throw EvalError(fmt::format("value ({:.17g}, {:.17g}) leaves the declared target ({})", v.real(), v.imag(),
                                to_string(f.target())));
}

}  // namespace

HoloMap::HoloMap(detail::NodePtr root, int arity, Domain source, Domain target)
    : root_(std::move(root)), arity_(arity), source_(source), target_(target) {
  if (!root_) throw Error("HoloMap: null expression");
  if (arity_ < 1 || arity_ > kMaxArity) throw DomainError(fmt::format("HoloMap: unsupported arity {}", arity_));
}

Complex HoloMap::operator()(const PolyPoint& z) const { return eval(*this, z); }

Complex eval(const HoloMap& f, const PolyPoint& z) {
  check_input(f, z);
  const Complex v = eval_node<Complex>(*f.root(), z.coords().data(), f.arity());
  check_output(f, v);
  return v;
}

Jet eval_jet(const HoloMap& f, const PolyPoint& z) {
  check_input(f, z);
  Jet j = eval_node<Jet>(*f.root(), z.coords().data(), f.arity());
  check_output(f, j.value);
  return j;
}

Complex eval_raw(const HoloMap& f, const CVector& z) {
  if (z.size() != f.arity()) throw DomainError("arity mismatch");
  return eval_node<Complex>(*f.root(), z.data(), f.arity());
}

Jet eval_jet_raw(const HoloMap& f, const CVector& z) {
  if (z.size() != f.arity()) throw DomainError("arity mismatch");
  return eval_node<Jet>(*f.root(), z.data(), f.arity());
}

// ---------------------------------------------------------------------------
// Builders

namespace {

void check_compatible(const HoloMap& a, const HoloMap& b) {
  if (a.arity() != b.arity()) throw DomainError("combining maps of different arity");
  if (a.source() != b.source()) throw DomainError("combining maps on different domains");
}

HoloMap combine(Op op, const HoloMap& a, const HoloMap& b) {
  check_compatible(a, b);
  return {detail::make_binary(op, a.root(), b.root()), a.arity(), a.source()};
}

HoloMap with_const(Op op, const HoloMap& a, Complex c, bool const_first) {
  auto k = detail::make_const(c);
  return {const_first ? detail::make_binary(op, k, a.root()) : detail::make_binary(op, a.root(), k), a.arity(),
          a.source()};
}

}  // namespace

HoloMap coordinate(int j, int n, Domain source) {
  if (j < 0 || j >= n) throw DomainError("coordinate: index out of range");
  return {detail::make_coord(j), n, source, source};
}

HoloMap constant(Complex c, int n, Domain source) { return {detail::make_const(c), n, source}; }

HoloMap linear_map(const RVector& alpha) {
  std::vector<double> w(alpha.data(), alpha.data() + alpha.size());
  const bool nonneg = (alpha.array() >= 0.0).all() && alpha.sum() > 0.0;
  return {detail::make_linear(std::move(w)), static_cast<int>(alpha.size()), Domain::HalfPlane,
          nonneg ? Domain::HalfPlane : Domain::Plane};
}

HoloMap mean_map(int n) { return linear_map(RVector::Constant(n, 1.0 / n)); }

HoloMap projection(int j, int n) {
  RVector alpha = RVector::Zero(n);
  if (j < 0 || j >= n) throw DomainError("projection: index out of range");
  alpha[j] = 1.0;
  return linear_map(alpha);
}

HoloMap operator+(const HoloMap& a, const HoloMap& b) { return combine(Op::Add, a, b); }
HoloMap operator-(const HoloMap& a, const HoloMap& b) { return combine(Op::Sub, a, b); }
HoloMap operator*(const HoloMap& a, const HoloMap& b) { return combine(Op::Mul, a, b); }
HoloMap operator/(const HoloMap& a, const HoloMap& b) { return combine(Op::Div, a, b); }
HoloMap operator-(const HoloMap& a) { return {detail::make_unary(Op::Neg, a.root()), a.arity(), a.source()}; }
HoloMap operator+(const HoloMap& a, Complex c) { return with_const(Op::Add, a, c, false); }
HoloMap operator+(Complex c, const HoloMap& a) { return with_const(Op::Add, a, c, true); }
HoloMap operator-(const HoloMap& a, Complex c) { return with_const(Op::Sub, a, c, false); }
HoloMap operator-(Complex c, const HoloMap& a) { return with_const(Op::Sub, a, c, true); }
HoloMap operator*(Complex c, const HoloMap& a) { return with_const(Op::Mul, a, c, true); }
HoloMap operator*(const HoloMap& a, Complex c) { return with_const(Op::Mul, a, c, false); }
HoloMap operator/(const HoloMap& a, Complex c) { return with_const(Op::Div, a, c, false); }
HoloMap operator/(Complex c, const HoloMap& a) { return with_const(Op::Div, a, c, true); }
HoloMap exp(const HoloMap& a) { return {detail::make_unary(Op::Exp, a.root()), a.arity(), a.source()}; }
HoloMap pow(const HoloMap& a, int k) { return {detail::make_pow(a.root(), k), a.arity(), a.source()}; }

HoloMap post_compose(const ComplexMobius& m, const HoloMap& f, Domain target) {
  return {detail::make_post(m, f.root()), f.arity(), f.source(), target};
}

HoloMap pre_compose(const std::vector<ComplexMobius>& ms, const HoloMap& f, Domain source) {
  if (static_cast<int>(ms.size()) != f.arity()) throw DomainError("pre_compose: one Mobius map per coordinate");
  return {detail::make_pre(ms, f.root()), f.arity(), source, f.target()};
}

}  // namespace holoflow
