#pragma once

#include "holoflow/holomap.hpp"

#include <doctest.h>

#include <complex>
#include <vector>

namespace test {

using holoflow::Complex;
using holoflow::CVector;
using holoflow::Domain;
using holoflow::PolyPoint;

inline PolyPoint hp(std::initializer_list<Complex> z) {
  CVector v(static_cast<Eigen::Index>(z.size()));
  Eigen::Index k = 0;
  for (Complex c : z) v[k++] = c;
  return {v, Domain::HalfPlane};
}

inline PolyPoint dp(std::initializer_list<Complex> z) {
  CVector v(static_cast<Eigen::Index>(z.size()));
  Eigen::Index k = 0;
  for (Complex c : z) v[k++] = c;
  return {v, Domain::Disk};
}

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

/// 7 x 7 grid on H^2: Re in [-3, 3], Im in [0.2, 4].
inline std::vector<PolyPoint> h2_grid() {
  std::vector<Complex> axis;
  for (double re : {-3.0, -1.0, 0.0, 2.5})
    for (double im : {0.2, 1.0, 4.0}) axis.emplace_back(re, im);
  std::vector<PolyPoint> out;
  for (Complex a : axis)
    for (Complex b : axis) out.push_back(hp({a, b}));
  return out;
}

inline double sup_diff(const holoflow::HoloMap& f, const holoflow::HoloMap& g, const std::vector<PolyPoint>& pts) {
  double worst = 0.0;
  for (const auto& z : pts) worst = std::max(worst, std::abs(holoflow::eval(f, z) - holoflow::eval(g, z)));
  return worst;
}

}  // namespace test
