#pragma once

#include "holoflow/classes.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace holoflow {

/// Finite stand-in for a compact exhaustion K_1 c K_2 c ... of H^n (or its
/// Cayley image in D^n). Level j samples |Re z_i| <= j, 1/j <= Im z_i <= j
/// on a product grid, thinned by a deterministic index stride above `cap`.
class Exhaustion {
 public:
  static constexpr int kDefaultDepth = 6;
  static constexpr int kDefaultPointsPerAxis = 5;
  static constexpr std::size_t kDefaultCap = 2000;

  explicit Exhaustion(int arity, Domain model = Domain::HalfPlane, int depth = kDefaultDepth,
                      int points_per_axis = kDefaultPointsPerAxis, std::size_t cap = kDefaultCap);

  int arity() const { return arity_; }
  Domain model() const { return model_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  /// Grid of level j, 1-based.
  const std::vector<PolyPoint>& level(int j) const { return levels_.at(j - 1); }
  /// Spacing of the real-axis grid at level j.
  double spacing(int j) const;

 private:
  int arity_;
  Domain model_;
  int per_axis_;
  std::vector<std::vector<PolyPoint>> levels_;
};

/// f_t(z) = f(z_1 - t, ..., z_n - t) + t.
HoloMap translate(const HoloMap& f, double t);

/// Conjugation by gamma_t from the unipotent subgroup fixing p in R u {inf}.
HoloMap unipotent_flow(const HoloMap& f, const Extended& p, double t);

inline constexpr int kDefaultAverageNodes = 512;

/// (1/2r) int_{-r}^{r} f_t dt, evaluated lazily per point by a Gauss-Kronrod
/// rule whose initial composite partition uses about `nodes` nodes and is
/// refined adaptively.
HoloMap average(const HoloMap& f, double r, int nodes = kDefaultAverageNodes);

/// Sum_j 2^-j d_j/(1 + d_j), d_j = max over level j of |f - g|.
double co_metric(const HoloMap& f, const HoloMap& g, const Exhaustion& ex);

/// Max of |f - g| over every level of the exhaustion.
double grid_sup(const HoloMap& f, const HoloMap& g, const Exhaustion& ex);

struct OrbitStats {
  double r = 0.0;
  double epsilon = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, distance)
  double fraction_within = 0.0;
};

struct OrbitOptions {
  int samples = 2001;
  /// t ranges over [-half_width * r, half_width * r].
  double half_width = 0.5;
  /// Seeded uniform times instead of the equispaced grid.
  std::optional<std::uint64_t> seed;
};

OrbitStats orbit_stats(const HoloMap& f, const HoloMap& target, double r, double epsilon, const Exhaustion& ex,
                       const OrbitOptions& options = {});

/// sum_j alpha_j z_j with alpha the diagonal partials of f; throws Error
/// when f fails the class-D check.
HoloMap invariant_target(const HoloMap& f);

struct PeriodicityResult {
  double residual = 0.0;            // max over grids of |f_T - f|
  double distance_to_target = 0.0;  // co_metric(f, invariant_target(f))
  /// residual ~ 0 while f is far from its invariant target: impossible
  /// for a genuine member of D, so it signals a bug.
  bool inconsistent = false;
};

PeriodicityResult periodicity_residual(const HoloMap& f, double period, const Exhaustion& ex);

}  // namespace holoflow
