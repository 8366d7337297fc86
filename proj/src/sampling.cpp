#include "holoflow/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace holoflow {

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

namespace {

constexpr std::array<int, 2 * kMaxArity> kPrimes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,  37,  41,  43,  47,  53,
                                                 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

Complex place(double u, double v, Domain model, const HalfPlaneBox& box, double r_max) {
  if (model == Domain::Disk) return std::polar(r_max * std::sqrt(u), 2.0 * std::numbers::pi * v);
  if (model == Domain::HalfPlane) return {box.re_max * (2.0 * u - 1.0), box.im_min + (box.im_max - box.im_min) * v};
  return {box.re_max * (2.0 * u - 1.0), box.re_max * (2.0 * v - 1.0)};
}

}  // namespace

std::vector<PolyPoint> halton_points(int n, std::size_t count, Domain model, const HalfPlaneBox& box, double r_max) {
  std::vector<PolyPoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    CVector z(n);
    for (int j = 0; j < n; ++j) {
      // Skip index 0, which sits on the region's corner for every base.
      z[j] = place(radical_inverse(k + 1, kPrimes[2 * j]), radical_inverse(k + 1, kPrimes[2 * j + 1]), model, box,
                   r_max);
    }
    out.emplace_back(std::move(z), model);
  }
  return out;
}

std::vector<PolyPoint> random_points(int n, std::size_t count, Domain model, std::uint64_t seed,
                                     const HalfPlaneBox& box, double r_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PolyPoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    CVector z(n);
    for (int j = 0; j < n; ++j) {
      const double u = unit(rng);
      const double v = unit(rng);
      z[j] = place(u, v, model, box, r_max);
    }
    out.emplace_back(std::move(z), model);
  }
  return out;
}

}  // namespace holoflow
