#pragma once

#include "holoflow/geometry.hpp"

#include <memory>
#include <string>
#include <vector>

namespace holoflow {

namespace detail {

enum class Op { Coord, Const, Neg, Exp, Pow, Add, Sub, Mul, Div, PostMobius, PreMobius, Family, Average };

enum class FamilyKind { Linear, GNu, HR };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One node of an immutable expression tree. Only the fields relevant to
/// `op` are meaningful.
struct Node {
  Op op = Op::Const;
  int index = 0;      // Coord: variable index; Pow: exponent
  Complex value{};    // Const
  NodePtr lhs, rhs;   // operands; unary nodes use lhs
  ComplexMobius post; // PostMobius
  std::vector<ComplexMobius> pre;  // PreMobius, one map per coordinate
  FamilyKind family = FamilyKind::Linear;
  std::vector<double> weights;  // Linear family
  double angle = 0.0;           // GNu family
  Extended param;               // HR family
  double radius = 0.0;          // Average: half-width r
  int nodes = 0;                // Average: node budget N
};

NodePtr make_coord(int j);
NodePtr make_const(Complex c);
NodePtr make_unary(Op op, NodePtr x);
NodePtr make_pow(NodePtr x, int k);
NodePtr make_binary(Op op, NodePtr l, NodePtr r);
/// Post-composition; consecutive Mobius nodes are merged.
NodePtr make_post(const ComplexMobius& m, NodePtr x);
/// Coordinate-wise pre-composition; pushed below post nodes and merged.
NodePtr make_pre(std::vector<ComplexMobius> ms, NodePtr x);
NodePtr make_linear(std::vector<double> weights);
NodePtr make_gnu(double angle);
NodePtr make_hr(const Extended& r);
NodePtr make_average(NodePtr child, double radius, int nodes);

/// Rewrites every Coord(j) leaf into replacements[j].
NodePtr substitute(const NodePtr& root, const std::vector<NodePtr>& replacements);

bool contains(const NodePtr& root, Op op);
std::string describe(const Node& node);

}  // namespace detail

/// Holomorphic map from a tagged n-dimensional domain to C, stored as an
/// immutable expression tree. Copies share the tree; safe to evaluate from
/// many threads.
///
/// The target tag is a checked claim: evaluation throws EvalError when a
/// value leaves the declared target (Im > 0 for HalfPlane, |w| < 1 for Disk).
class HoloMap {
 public:
  HoloMap(detail::NodePtr root, int arity, Domain source, Domain target = Domain::Plane);

  int arity() const { return arity_; }
  Domain source() const { return source_; }
  Domain target() const { return target_; }
  const detail::NodePtr& root() const { return root_; }

  HoloMap with_target(Domain target) const { return {root_, arity_, source_, target}; }

  Complex operator()(const PolyPoint& z) const;
  std::string to_string() const { return detail::describe(*root_); }

 private:
  detail::NodePtr root_;
  int arity_;
  Domain source_;
  Domain target_;
};

/// Value together with the exact gradient.
struct Jet {
  Complex value{};
  Gradient grad;
};

/// Checked evaluation: arity and domain of `z` must match, value must be
/// finite and inside the declared target.
Complex eval(const HoloMap& f, const PolyPoint& z);
/// Checked evaluation with forward-mode derivatives.
Jet eval_jet(const HoloMap& f, const PolyPoint& z);
/// Raw evaluation at a coordinate vector; no domain or target checks.
Complex eval_raw(const HoloMap& f, const CVector& z);
Jet eval_jet_raw(const HoloMap& f, const CVector& z);

// Builders -----------------------------------------------------------------

HoloMap coordinate(int j, int n, Domain source = Domain::HalfPlane);
HoloMap constant(Complex c, int n, Domain source = Domain::HalfPlane);
/// sum_j alpha_j z_j on H^n; target HalfPlane when alpha >= 0 and nonzero.
HoloMap linear_map(const RVector& alpha);
HoloMap mean_map(int n);
HoloMap projection(int j, int n);

HoloMap operator+(const HoloMap& a, const HoloMap& b);
HoloMap operator-(const HoloMap& a, const HoloMap& b);
HoloMap operator*(const HoloMap& a, const HoloMap& b);
HoloMap operator/(const HoloMap& a, const HoloMap& b);
HoloMap operator-(const HoloMap& a);
HoloMap operator+(const HoloMap& a, Complex c);
HoloMap operator+(Complex c, const HoloMap& a);
HoloMap operator-(const HoloMap& a, Complex c);
HoloMap operator-(Complex c, const HoloMap& a);
HoloMap operator*(Complex c, const HoloMap& a);
HoloMap operator*(const HoloMap& a, Complex c);
HoloMap operator/(const HoloMap& a, Complex c);
HoloMap operator/(Complex c, const HoloMap& a);
HoloMap exp(const HoloMap& a);
HoloMap pow(const HoloMap& a, int k);

/// value -> m(value); the result lives in `target`.
HoloMap post_compose(const ComplexMobius& m, const HoloMap& f, Domain target);
/// z -> f(m_1(z_1), ..., m_n(z_n)); `source` is the new source model.
HoloMap pre_compose(const std::vector<ComplexMobius>& ms, const HoloMap& f, Domain source);

}  // namespace holoflow
