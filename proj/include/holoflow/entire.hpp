#pragma once

#include "holoflow/calculus.hpp"

#include <optional>
#include <vector>

namespace holoflow {

/// Entire map C^n -> C: an expression over coordinates, constants, +, -, *,
/// exp and nonnegative integer powers. Without division every value is
/// finite.
class EntireMap {
 public:
  /// Throws DomainError if `map` is not on C^n or uses division, Mobius,
  /// family or averaging nodes.
  explicit EntireMap(HoloMap map);

  static EntireMap coordinate(int j, int n);
  static EntireMap constant(Complex c, int n);
  /// g(z) = (1/n) sum_j z_j.
  static EntireMap mean(int n);

  int arity() const { return map_.arity(); }
  const HoloMap& map() const { return map_; }
  Complex operator()(const CVector& z) const { return eval_raw(map_, z); }

 private:
  HoloMap map_;
};

EntireMap operator+(const EntireMap& a, const EntireMap& b);
EntireMap operator-(const EntireMap& a, const EntireMap& b);
EntireMap operator*(const EntireMap& a, const EntireMap& b);
EntireMap operator*(Complex c, const EntireMap& a);
EntireMap operator+(const EntireMap& a, Complex c);
EntireMap exp(const EntireMap& a);
EntireMap pow(const EntireMap& a, int k);

/// phi(z) - phi(g(z) 1) + g(z); satisfies f(l, ..., l) = l.
EntireMap build_F(const EntireMap& phi);
/// f - g; throws DomainError if f violates the diagonal identity by more
/// than tol on the diagonal samples.
EntireMap right_inverse(const EntireMap& f, double tol = 1e-9);
/// phi(z_1 - 1, ..., z_n - 1).
EntireMap shift_L(const EntireMap& phi);
/// f(z_1 - t, ..., z_n - t) + t.
EntireMap translate_prime(const EntireMap& f, double t);
EntireMap time_one_S(const EntireMap& f);
/// build_F(exp(2 pi i z_1 / k)); a period-k point of the flow.
EntireMap periodic_point(int k, int n = 2);

/// |Re z_j|, |Im z_j| <= 2 with 9 points per axis, thinned to 10^4 points.
const std::vector<CVector>& entire_grid(int n);
/// 100 points l on |Re l|, |Im l| <= 2 for diagonal-identity checks.
const std::vector<Complex>& diagonal_samples();

double sup_residual(const EntireMap& f, const EntireMap& g, const std::vector<CVector>& grid);
double diagonal_residual(const EntireMap& f);

struct Witness {
  PolyPoint point;
  Complex value;
};

/// Grid point of H^n (Re in [-2, 2], Im in (0, 2]) where Im f is most
/// negative; nullopt when Im f >= 0 on the whole grid.
std::optional<Witness> im_negativity_witness(const EntireMap& f);

/// d^2 f/dz_j^2 at z by the Cauchy integral.
Complex second_partial(const EntireMap& f, const CVector& z, int j);

}  // namespace holoflow
