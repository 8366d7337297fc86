#include "holoflow/flow.hpp"

#include "holoflow/parallel.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>

namespace holoflow {

Exhaustion::Exhaustion(int arity, Domain model, int depth, int points_per_axis, std::size_t cap)
    : arity_(arity), model_(model), per_axis_(points_per_axis) {
  if (arity < 1 || arity > kMaxArity) throw DomainError("Exhaustion: bad arity");
  if (depth < 1) throw DomainError("Exhaustion: depth must be >= 1");
  if (points_per_axis < 2) throw DomainError("Exhaustion: need at least 2 points per axis");
  if (cap < 1) throw DomainError("Exhaustion: cap must be >= 1");
  if (model == Domain::Plane) throw DomainError("Exhaustion: only half-plane and disk models");

  for (int j = 1; j <= depth; ++j) {
    std::vector<Complex> axis;
    for (int a = 0; a < per_axis_; ++a) {
      const double re = -j + 2.0 * j * a / (per_axis_ - 1);
      for (int b = 0; b < per_axis_; ++b) {
        const double im = 1.0 / j + (j - 1.0 / j) * b / (per_axis_ - 1);
        axis.emplace_back(re, im);
      }
    }
    const std::size_t base = axis.size();
    std::size_t total = 1;
    for (int k = 0; k < arity; ++k) total *= base;
    const std::size_t count = std::min(total, cap);
    std::vector<PolyPoint> grid;
    grid.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
      std::size_t index = count == total ? s : static_cast<std::size_t>(static_cast<long double>(s) * total / count);
      CVector z(arity);
      for (int k = 0; k < arity; ++k) {
        const Complex w = axis[index % base];
        z[k] = model == Domain::Disk ? cayley(w) : w;
        index /= base;
      }
      grid.emplace_back(std::move(z), model);
    }
    levels_.push_back(std::move(grid));
  }
}

double Exhaustion::spacing(int j) const { return 2.0 * j / (per_axis_ - 1); }

HoloMap translate(const HoloMap& f, double t) {
  if (f.source() != Domain::HalfPlane) throw DomainError("translate: map must be in the half-plane model");
  return conjugate_by(Mobius::translation(t).complex(), f);
}

HoloMap unipotent_flow(const HoloMap& f, const Extended& p, double t) {
  if (f.source() != Domain::HalfPlane) throw DomainError("unipotent_flow: map must be in the half-plane model");
  if (!p.is_real()) throw DomainError("unipotent_flow: fixed point must lie on R u {inf}");
  if (p.infinite) return translate(f, t);
  return conjugate_action(Mobius::unipotent(p, t), f);
}

HoloMap average(const HoloMap& f, double r, int nodes) {
  if (f.source() != Domain::HalfPlane) throw DomainError("average: map must be in the half-plane model");
  if (!(r > 0.0)) throw DomainError("average: r must be positive");
  if (nodes < 2) throw DomainError("average: need at least 2 nodes");
  return {detail::make_average(f.root(), r, nodes), f.arity(), Domain::HalfPlane, Domain::HalfPlane};
}

namespace {

void check_pair(const HoloMap& f, const HoloMap& g, const Exhaustion& ex) {
  if (f.arity() != g.arity() || f.arity() != ex.arity()) throw DomainError("co_metric: arity mismatch");
  if (f.source() != g.source() || f.source() != ex.model()) throw DomainError("co_metric: model mismatch");
}

double level_sup(const HoloMap& f, const HoloMap& g, const std::vector<PolyPoint>& grid) {
  std::vector<double> diff(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { diff[k] = std::abs(eval(f, grid[k]) - eval(g, grid[k])); });
  double best = 0.0;
  for (double d : diff) best = std::max(best, d);
  return best;
}

}  // namespace

double co_metric(const HoloMap& f, const HoloMap& g, const Exhaustion& ex) {
  check_pair(f, g, ex);
  double total = 0.0;
  for (int j = 1; j <= ex.depth(); ++j) {
    const double d = level_sup(f, g, ex.level(j));
    total += std::ldexp(d / (1.0 + d), -j);
  }
  return total;
}

double grid_sup(const HoloMap& f, const HoloMap& g, const Exhaustion& ex) {
  check_pair(f, g, ex);
  double best = 0.0;
  for (int j = 1; j <= ex.depth(); ++j) best = std::max(best, level_sup(f, g, ex.level(j)));
  return best;
}

OrbitStats orbit_stats(const HoloMap& f, const HoloMap& target, double r, double epsilon, const Exhaustion& ex,
                       const OrbitOptions& options) {
  if (!(r > 0.0)) throw DomainError("orbit_stats: r must be positive");
  if (!(epsilon > 0.0)) throw DomainError("orbit_stats: epsilon must be positive");
  if (options.samples < 2) throw DomainError("orbit_stats: need at least 2 samples");
  const double lo = -options.half_width * r;
  const double hi = options.half_width * r;
  const auto m = static_cast<std::size_t>(options.samples);

  std::vector<double> times(m);
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::uniform_real_distribution<double> uniform(lo, hi);
    for (auto& t : times) t = uniform(rng);
  } else {
    for (std::size_t k = 0; k < m; ++k) times[k] = lo + (hi - lo) * static_cast<double>(k) / (m - 1);
  }

  std::vector<double> dist(m);
  parallel_for(m, [&](std::size_t k) { dist[k] = co_metric(translate(f, times[k]), target, ex); });

  OrbitStats out;
  out.r = r;
  out.epsilon = epsilon;
  out.samples.reserve(m);
  std::size_t within = 0;
  for (std::size_t k = 0; k < m; ++k) {
    out.samples.emplace_back(times[k], dist[k]);
    if (dist[k] <= epsilon) ++within;
  }
  out.fraction_within = static_cast<double>(within) / static_cast<double>(m);
  return out;
}

HoloMap invariant_target(const HoloMap& f) {
  const ClassReport report = check_class(f, MapClass::D);
  if (!report.pass) {
    throw Error(fmt::format("invariant_target: class D check failed (diagonal residual {:.3g}, derivative residual "
                            "{:.3g}){}",
                            report.max_diag_residual, report.max_deriv_residual,
                            report.failure.empty() ? "" : ": " + report.failure));
  }
  return linear_map(report.alpha);
}

PeriodicityResult periodicity_residual(const HoloMap& f_in, double period, const Exhaustion& ex) {
  if (!(period > 0.0)) throw DomainError("periodicity_residual: period must be positive");
  const HoloMap f = half_plane_model(f_in);
  PeriodicityResult out;
  out.residual = grid_sup(translate(f, period), f, ex);
  out.distance_to_target = co_metric(f, invariant_target(f), ex);
  out.inconsistent = out.residual <= 1e-9 && out.distance_to_target >= 1e-3;
  return out;
}

}  // namespace holoflow
