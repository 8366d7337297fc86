#pragma once

#include "holoflow/geometry.hpp"

#include <cstdint>
#include <vector>

namespace holoflow {

/// Radical inverse of `index` in `base` (van der Corput).
double radical_inverse(std::uint64_t index, int base);

/// Box used to sample H^n: Re in [-re_max, re_max], Im in [im_min, im_max].
struct HalfPlaneBox {
  double re_max = 5.0;
  double im_min = 1e-3;
  double im_max = 5.0;
};

/// Deterministic Halton points in H^n (inside `box`) or D^n (|z| <= r_max).
std::vector<PolyPoint> halton_points(int n, std::size_t count, Domain model, const HalfPlaneBox& box = {},
                                     double r_max = 1.0 - 1e-3);

/// Seeded pseudo-random points, same regions as halton_points.
std::vector<PolyPoint> random_points(int n, std::size_t count, Domain model, std::uint64_t seed,
                                     const HalfPlaneBox& box = {}, double r_max = 1.0 - 1e-3);

}  // namespace holoflow
