#include "holoflow/experiment.hpp"

#include "holoflow/dim2.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/parser.hpp"
#include "holoflow/rigidity.hpp"
#include "holoflow/sampling.hpp"
#include "holoflow/schwarz.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace holoflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<NamedMap> holomorphic_families(const ExperimentConfig& cfg) {
  std::vector<NamedMap> out;
  for (const auto& text : cfg.families) {
    if (text == "shipped") {
      for (auto& f : shipped_families()) out.push_back(std::move(f));
      continue;
    }
    Family fam = parse_family(text);
    if (!fam.map) throw Error(fmt::format("family '{}' is not a holomorphic map on H^n or D^n", text));
    out.push_back({text, *fam.map});
  }
  return out;
}

/// Runs `body`, prefixing any library error with the row context.
template <class F> void with_context(const std::string& context, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    throw Error(fmt::format("{}: {}", context, e.what()));
  }
}

std::vector<std::pair<double, double>> read_threshold_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot read threshold file {}", path.string()));
  std::vector<std::pair<double, double>> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
      throw Error(fmt::format("threshold file {}: malformed row '{}'", path.string(), line));
    out.emplace_back(std::stod(a), std::stod(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// flow-orbit

void run_flow_orbit(const ExperimentConfig& cfg, RunReport& rep) {
  const NamedMap fam = holomorphic_families(cfg).front();
  const HoloMap f = half_plane_model(fam.map);
  const HoloMap target =
      cfg.target ? half_plane_model(*parse_family(*cfg.target).map) : invariant_target(f);
  const Exhaustion ex(f.arity(), Domain::HalfPlane, cfg.depth);
  OrbitOptions opts;
  opts.samples = cfg.samples;
  opts.half_width = cfg.half_width;
  opts.seed = cfg.seed;

  Table& main = rep.tables.emplace_back();
  main.header = {"family", "r", "epsilon", "samples", "fraction_within", "min_distance", "max_distance"};
  std::vector<double> fractions;
  for (double r : cfg.r) {
    with_context(fmt::format("flow-orbit r = {}", r), [&] {
      const OrbitStats s = orbit_stats(f, target, r, cfg.epsilon, ex, opts);
      double lo = INFINITY, hi = 0.0;
      for (const auto& [t, d] : s.samples) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      main.rows.push_back({fam.name, r, cfg.epsilon, std::int64_t{cfg.samples}, s.fraction_within, lo, hi});
      fractions.push_back(s.fraction_within);
    });
  }

  double max_drop = 0.0;
  for (std::size_t k = 1; k < fractions.size(); ++k) max_drop = std::max(max_drop, fractions[k - 1] - fractions[k]);
  rep.metrics["fraction_at_max_r"] = fractions.back();
  rep.metrics["max_drop"] = max_drop;

  if (cfg.threshold_file) {
    double margin = INFINITY;
    for (const auto& [r, need] : read_threshold_file(*cfg.threshold_file)) {
      std::size_t k = 0;
      while (k < cfg.r.size() && cfg.r[k] != r) ++k;
      if (k == cfg.r.size()) throw Error(fmt::format("threshold file lists r = {} which is not in the ladder", r));
      margin = std::min(margin, fractions[k] - need);
    }
    rep.metrics["threshold_margin"] = margin;
  }
}

// ---------------------------------------------------------------------------
// average-convergence

void run_average(const ExperimentConfig& cfg, RunReport& rep) {
  const NamedMap fam = holomorphic_families(cfg).front();
  const HoloMap f = half_plane_model(fam.map);
  const HoloMap target =
      cfg.target ? half_plane_model(*parse_family(*cfg.target).map) : invariant_target(f);
  const Exhaustion ex(f.arity(), Domain::HalfPlane, cfg.depth);

  Table& main = rep.tables.emplace_back();
  main.header = {"family", "r", "nodes", "co_metric"};
  std::vector<double> values;
  for (double r : cfg.r) {
    with_context(fmt::format("average-convergence r = {}", r), [&] {
      const double d = co_metric(average(f, r, cfg.nodes), target, ex);
      main.rows.push_back({fam.name, r, std::int64_t{cfg.nodes}, d});
      values.push_back(d);
    });
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < values.size(); ++k) decreasing = decreasing && values[k] < values[k - 1];
  rep.metrics["strictly_decreasing"] = decreasing ? 1.0 : 0.0;
  rep.metrics["co_metric_at_max_r"] = values.back();
}

// ---------------------------------------------------------------------------
// defect-scan

std::vector<PolyPoint> scan_points(const ExperimentConfig& cfg, int n, Domain model, const HalfPlaneBox& box = {},
                                   double r_max = 1.0 - 1e-3) {
  const auto count = static_cast<std::size_t>(cfg.samples);
  if (cfg.seed) return random_points(n, count, model, *cfg.seed, box, r_max);
  return halton_points(n, count, model, box, r_max);
}

void run_defect(const ExperimentConfig& cfg, RunReport& rep) {
  constexpr std::array<double, 8> kEdges{-INFINITY, -1e-9, 1e-9, 1e-6, 1e-3, 1e-1, 1.0, INFINITY};
  Table& main = rep.tables.emplace_back();
  main.header = {"family", "t", "samples", "min_defect", "max_defect", "max_abs_defect"};
  Table hist;
  hist.suffix = "histogram";
  hist.header = {"family", "t", "bin_lo", "bin_hi", "count"};

  std::vector<double> times{0.0};
  for (double t : cfg.t)
    if (t != 0.0) times.push_back(t);

  double global_min = INFINITY, global_abs = 0.0;
  for (const auto& fam : holomorphic_families(cfg)) {
    for (double t : times) {
      with_context(fmt::format("defect-scan family {} t = {}", fam.name, t), [&] {
        const HoloMap f = t == 0.0 ? fam.map : translate(half_plane_model(fam.map), t);
        const auto pts = scan_points(cfg, f.arity(), f.source());
        std::vector<double> d(pts.size());
        parallel_for(pts.size(), [&](std::size_t k) { d[k] = schwarz_defect(f, pts[k]).defect; });
        double lo = INFINITY, hi = -INFINITY, abs_max = 0.0;
        std::array<std::int64_t, kEdges.size() - 1> counts{};
        for (double v : d) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          abs_max = std::max(abs_max, std::abs(v));
          for (std::size_t b = 0; b + 1 < kEdges.size(); ++b)
            if (v >= kEdges[b] && v < kEdges[b + 1]) ++counts[b];
        }
        main.rows.push_back({fam.name, t, std::int64_t{cfg.samples}, lo, hi, abs_max});
        for (std::size_t b = 0; b < counts.size(); ++b)
          hist.rows.push_back({fam.name, t, kEdges[b], kEdges[b + 1], counts[b]});
        global_min = std::min(global_min, lo);
        global_abs = std::max(global_abs, abs_max);
      });
    }
  }
  rep.metrics["min_defect"] = global_min;
  rep.metrics["max_abs_defect"] = global_abs;
  rep.tables.push_back(std::move(hist));
}

void run_class(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"family", "alpha", "max_diag_residual", "max_deriv_residual", "pass"};
  double worst = 0.0;
  for (const auto& fam : holomorphic_families(cfg)) {
    const ClassReport c = check_class(fam.map, MapClass::C, default_class_samples(), cfg.tol);
    std::string alpha;
    for (Eigen::Index j = 0; j < c.alpha.size(); ++j) alpha += fmt::format("{}{:.17g}", j ? " " : "", c.alpha[j]);
    main.rows.push_back({fam.name, alpha, c.max_diag_residual, c.max_deriv_residual, std::int64_t{c.pass}});
    worst = std::max({worst, c.max_diag_residual, c.max_deriv_residual});
  }
  rep.metrics["max_residual"] = worst;
}

void run_derivatives(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"family", "samples", "max_rel_error"};
  HalfPlaneBox box;
  box.re_max = 4.0;
  box.im_min = 0.1;
  box.im_max = 4.0;
  double worst = 0.0;
  for (const auto& fam : holomorphic_families(cfg)) {
    with_context("derivatives family " + fam.name, [&] {
      const auto pts = scan_points(cfg, fam.map.arity(), fam.map.source(), box, 0.9);
      std::vector<double> err(pts.size());
      parallel_for(pts.size(), [&](std::size_t k) {
        const CVector exact = partials(fam.map, pts[k], DerivativeRoute::Exact);
        const CVector quad = partials(fam.map, pts[k], DerivativeRoute::Cauchy);
        err[k] = (quad - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff();
      });
      const double e = *std::max_element(err.begin(), err.end());
      main.rows.push_back({fam.name, std::int64_t{cfg.samples}, e});
      worst = std::max(worst, e);
    });
  }
  rep.metrics["max_rel_error"] = worst;
}

// ---------------------------------------------------------------------------
// equivariance

void run_aut_disk(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"pair", "a", "b", "c", "d", "nu_angle", "residual"};
  double worst = 0.0;
  for (int k = 0; k < cfg.pairs; ++k) {
    const auto idx = static_cast<std::uint64_t>(k + 1);
    const Complex a = std::polar(0.8 * radical_inverse(idx, 2), 2.0 * std::numbers::pi * radical_inverse(idx, 3));
    const double theta = 2.0 * std::numbers::pi * radical_inverse(idx, 5);
    const double nu = 2.0 * std::numbers::pi * radical_inverse(idx, 7);
    const Mobius gamma =
        Mobius::from_disk_automorphism(ComplexMobius::rotation(theta) * ComplexMobius::blaschke(a));
    const double res = equivariance_residual(gamma, nu);
    main.rows.push_back({std::int64_t{k}, gamma.a(), gamma.b(), gamma.c(), gamma.d(), nu, res});
    worst = std::max(worst, res);
  }
  rep.metrics["max_residual"] = worst;
}

void run_flow_identity(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"kind", "parameter", "t", "residual"};
  const Exhaustion ex(2, Domain::HalfPlane, cfg.depth);
  double bet = 0.0, hr = 0.0;
  for (const auto& text : cfg.phi) {
    const SchurParam phi = SchurParam::phi(parse_expression(text, Domain::HalfPlane));
    const HoloMap base = be_map(phi);
    for (double t : cfg.t) {
      with_context(fmt::format("bet_flow phi = {} t = {}", text, t), [&] {
        const double res = grid_sup(bet_flow(phi, t), translate(base, t), ex);
        main.rows.push_back({std::string("bet"), text, t, res});
        bet = std::max(bet, res);
      });
    }
  }
  for (double r : cfg.r) {
    for (double t : cfg.t) {
      const double res = grid_sup(translate(h_r(r), t), h_r(r + t), ex);
      main.rows.push_back({std::string("h_r"), fmt::format("{:.17g}", r), t, res});
      hr = std::max(hr, res);
    }
  }
  rep.metrics["max_bet_residual"] = bet;
  rep.metrics["max_hr_residual"] = hr;
}

// ---------------------------------------------------------------------------
// rigidity

void run_rigidity_residual(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"family", "a_dependence", "sup_h"};
  for (const auto& fam : holomorphic_families(cfg)) {
    with_context("rigidity family " + fam.name, [&] {
      const RigidityResidual r = rigidity_residual(half_plane_model(fam.map));
      main.rows.push_back({fam.name, r.a_dependence, r.sup_h});
    });
  }
}

void run_harmonic(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"test", "function", "value"};
  const auto interior = halton_points(1, 100, Domain::Disk, {}, 0.9);

  double poisson_max = 0.0;
  for (int k = 0; k <= 5; ++k) {
    for (int part = 0; part < 2; ++part) {
      auto phi = [&](Complex z) {
        const Complex p = std::pow(z, k);
        return Complex(part == 0 ? p.real() : p.imag(), 0.0);
      };
      const CircleSamples s = CircleSamples::sample(phi, 1.0, cfg.nodes);
      double err = 0.0;
      for (const auto& z : interior) err = std::max(err, std::abs(poisson_eval(s, z[0]) - phi(z[0])));
      main.rows.push_back({std::string("poisson"), fmt::format("{}(z^{})", part == 0 ? "Re" : "Im", k), err});
      poisson_max = std::max(poisson_max, err);
    }
  }

  const std::vector<std::pair<std::string, std::function<Complex(Complex)>>> centered{
      {"Im z", [](Complex z) { return Complex(z.imag(), 0.0); }},
      {"Re z^2", [](Complex z) { return Complex((z * z).real(), 0.0); }},
      {"Re(exp(z) - 1)", [](Complex z) { return Complex((std::exp(z) - 1.0).real(), 0.0); }},
  };
  double abs_max = 0.0, growth_excess = -INFINITY;
  for (const auto& [name, phi] : centered) {
    const CircleSamples s = CircleSamples::sample(phi, 1.0, cfg.nodes);
    const double res = abs_identity_residual(s);
    main.rows.push_back({std::string("abs_identity"), name, res});
    abs_max = std::max(abs_max, res);
    const double c = std::max(0.0, -s.values().real().minCoeff()) / s.radius();
    const GrowthCheck g = growth_bound(s, c);
    main.rows.push_back({std::string("growth_excess"), name, g.integral - g.bound});
    growth_excess = std::max(growth_excess, g.integral - g.bound);
  }
  rep.metrics["poisson_max_error"] = poisson_max;
  rep.metrics["abs_identity_max"] = abs_max;
  rep.metrics["growth_max_excess"] = growth_excess;
}

void run_polarization(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"trial", "kind", "n", "vanishes_on_v", "max_on_v", "max_on_u"};
  std::mt19937_64 rng(cfg.seed.value_or(0));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::int64_t wrong = 0;
  for (int k = 0; k <= cfg.samples; ++k) {
    const int n = 2 + k % 3;
    const std::vector<Rect> u(static_cast<std::size_t>(n), Rect{-2.0, 2.0, -2.0, 2.0});
    HoloMap h = constant(0.0, n, Domain::Plane);
    if (k > 0)
      for (int j = 0; j < n; ++j) h = h + Complex(normal(rng), normal(rng)) * coordinate(j, n, Domain::Plane);
    const PolarizationReport p = polarization_check(h, u, cfg.tol);
    const bool expect_vanish = k == 0;
    if (p.vanishes_on_v != expect_vanish) ++wrong;
    main.rows.push_back({std::int64_t{k}, std::string(k == 0 ? "zero" : "linear"), std::int64_t{n},
                         std::int64_t{p.vanishes_on_v}, p.max_on_v, p.vanishes_on_v ? p.max_on_u : kNaN});
  }
  rep.metrics["misclassified"] = static_cast<double>(wrong);
}

// ---------------------------------------------------------------------------
// entire-demo

EntireMap random_polynomial(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const EntireMap z = EntireMap::coordinate(0, 2);
  const EntireMap w = EntireMap::coordinate(1, 2);
  EntireMap acc = EntireMap::constant(0.0, 2);
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) {
      const Complex c(u(rng), u(rng));
      acc = acc + c * (pow(z, a) * pow(w, b));
    }
  return acc;
}

void run_entire(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"test", "subject", "value"};
  const auto& grid = entire_grid(2);
  std::mt19937_64 rng(cfg.seed.value_or(0));
  std::uniform_int_distribution<int> degree(0, 4);

  double intertwining = 0.0, diagonal = 0.0, round_trip = 0.0;
  for (int k = 0; k < cfg.samples; ++k) {
    const EntireMap phi = random_polynomial(rng, degree(rng));
    const EntireMap f = build_F(phi);
    const std::string subject = fmt::format("poly{}", k);
    const double it = sup_residual(build_F(shift_L(phi)), time_one_S(f), grid);
    const double dg = diagonal_residual(f);
    const double rt = sup_residual(build_F(right_inverse(f)), f, grid);
    main.rows.push_back({std::string("intertwining"), subject, it});
    main.rows.push_back({std::string("diagonal"), subject, dg});
    main.rows.push_back({std::string("round_trip"), subject, rt});
    intertwining = std::max(intertwining, it);
    diagonal = std::max(diagonal, dg);
    round_trip = std::max(round_trip, rt);
  }

  const std::vector<int> periods = cfg.periods.empty() ? std::vector<int>{1, 2, 3} : cfg.periods;
  double periodic = 0.0, second = INFINITY;
  for (int k : periods) {
    const EntireMap f = periodic_point(k);
    EntireMap g = f;
    for (int s = 0; s < k; ++s) g = time_one_S(g);
    const double res = sup_residual(g, f, grid);
    const double d2 = std::abs(second_partial(f, CVector::Zero(2), 0));
    main.rows.push_back({std::string("periodic"), fmt::format("periodic({})", k), res});
    main.rows.push_back({std::string("second_partial"), fmt::format("periodic({})", k), d2});
    periodic = std::max(periodic, res);
    second = std::min(second, d2);
  }

  const EntireMap p1 = periodic_point(1);
  const auto witness = im_negativity_witness(p1);
  if (witness) {
    const auto& z = witness->point;
    main.rows.push_back({std::string("witness_im"),
                         fmt::format("periodic(1) at ({:.17g}{:+.17g}i; {:.17g}{:+.17g}i)", z[0].real(), z[0].imag(),
                                     z[1].real(), z[1].imag()),
                         witness->value.imag()});
  }

  // Orbit of periodic(1) stays at a fixed positive distance from the mean.
  const EntireMap mean = EntireMap::mean(2);
  double drift = 0.0, closest = INFINITY;
  for (double t : {0.0, 0.25, 0.5, 0.75}) {
    const double d0 = sup_residual(translate_prime(p1, t), mean, grid);
    const double d1 = sup_residual(translate_prime(p1, t + 1.0), mean, grid);
    main.rows.push_back({std::string("orbit_distance"), fmt::format("t={}", t), d0});
    drift = std::max(drift, std::abs(d1 - d0));
    closest = std::min(closest, d0);
  }

  rep.metrics["intertwining_max"] = intertwining;
  rep.metrics["diagonal_max"] = diagonal;
  rep.metrics["round_trip_max"] = round_trip;
  rep.metrics["periodic_max"] = periodic;
  rep.metrics["second_partial_min"] = second;
  rep.metrics["witness_found"] = witness ? 1.0 : 0.0;
  rep.metrics["orbit_period_drift"] = drift;
  rep.metrics["orbit_min_distance"] = closest;
}

// ---------------------------------------------------------------------------
// periodicity

void run_periodicity(const ExperimentConfig& cfg, RunReport& rep) {
  Table& main = rep.tables.emplace_back();
  main.header = {"family", "period", "residual", "distance_to_target", "inconsistent"};
  const std::vector<double> periods = cfg.t.empty() ? std::vector<double>{1.0} : cfg.t;
  std::int64_t inconsistent = 0;
  for (const auto& fam : holomorphic_families(cfg)) {
    const Exhaustion ex(fam.map.arity(), Domain::HalfPlane, cfg.depth);
    for (double T : periods) {
      with_context(fmt::format("periodicity family {} period {}", fam.name, T), [&] {
        const PeriodicityResult p = periodicity_residual(fam.map, T, ex);
        main.rows.push_back({fam.name, T, p.residual, p.distance_to_target, std::int64_t{p.inconsistent}});
        inconsistent += p.inconsistent;
      });
    }
  }
  rep.metrics["inconsistent_count"] = static_cast<double>(inconsistent);
}

// ---------------------------------------------------------------------------

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", *d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return fmt::format("{}", *i);
  return std::get<std::string>(c);
}

std::optional<double> cell_number(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::nullopt;
}


}  // namespace

CheckResult evaluate_threshold(const Threshold& th, const RunReport& rep) {
  CheckResult out{th, kNaN, false};
  if (th.where.empty()) {
    if (auto it = rep.metrics.find(th.metric); it != rep.metrics.end()) {
      out.value = it->second;
      out.pass = (!th.min || out.value >= *th.min) && (!th.max || out.value <= *th.max);
      return out;
    }
  }
  const Table& t = rep.tables.front();
  auto column = [&](const std::string& name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw Error(fmt::format("threshold refers to unknown metric or column '{}'", name));
    return static_cast<std::size_t>(it - t.header.begin());
  };
  const std::size_t col = column(th.metric);
  std::vector<std::pair<std::size_t, std::string>> filters;
  for (const auto& [k, v] : th.where) filters.emplace_back(column(k), v);

  bool any = false;
  double worst = th.max ? -INFINITY : INFINITY;
  for (const auto& row : t.rows) {
    bool match = true;
    for (const auto& [c, v] : filters) match = match && cell_text(row[c]) == v;
    if (!match) continue;
    const auto v = cell_number(row[col]);
    if (!v) throw Error(fmt::format("column '{}' is not numeric", th.metric));
    any = true;
    // NaN rows (not applicable) never satisfy a bound.
    if (std::isnan(*v)) {
      worst = kNaN;
      break;
    }
    worst = th.max ? std::max(worst, *v) : std::min(worst, *v);
  }
  if (!any) return out;
  out.value = worst;
  out.pass = (!th.min || worst >= *th.min) && (!th.max || worst <= *th.max);
  return out;
}

std::string CheckResult::describe() const {
  std::string where;
  for (const auto& [k, v] : threshold.where) where += fmt::format("{}{}={}", where.empty() ? " [" : ", ", k, v);
  if (!where.empty()) where += "]";
  const std::string bound =
      threshold.min ? fmt::format(">= {:.6g}", *threshold.min) : fmt::format("<= {:.6g}", *threshold.max);
  return fmt::format("{} {}{}: {:.6g} {} ", pass ? "PASS" : "FAIL", threshold.metric, where, value, bound);
}

bool RunReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string RunReport::summary() const {
  std::string out = fmt::format("experiment {} (mode {}), {} rows, {:.2f} s\n", to_string(config.id), config.mode,
                                tables.empty() ? 0 : tables.front().rows.size(), seconds);
  for (const auto& c : config.class_reports) out += "  " + c + "\n";
  for (const auto& [k, v] : metrics) out += fmt::format("  {} = {:.17g}\n", k, v);
  for (const auto& c : checks) out += "  " + c.describe() + "\n";
  out += pass() ? "all thresholds pass\n" : "threshold failure\n";
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = cfg;
  switch (cfg.id) {
    case ExperimentId::FlowOrbit: run_flow_orbit(cfg, rep); break;
    case ExperimentId::AverageConvergence: run_average(cfg, rep); break;
    case ExperimentId::DefectScan:
      if (cfg.mode == "defect") run_defect(cfg, rep);
      else if (cfg.mode == "class") run_class(cfg, rep);
      else run_derivatives(cfg, rep);
      break;
    case ExperimentId::Equivariance:
      if (cfg.mode == "aut-disk") run_aut_disk(cfg, rep);
      else run_flow_identity(cfg, rep);
      break;
    case ExperimentId::Rigidity:
      if (cfg.mode == "residual") run_rigidity_residual(cfg, rep);
      else if (cfg.mode == "harmonic") run_harmonic(cfg, rep);
      else run_polarization(cfg, rep);
      break;
    case ExperimentId::EntireDemo: run_entire(cfg, rep); break;
    case ExperimentId::Periodicity: run_periodicity(cfg, rep); break;
  }
  for (const auto& th : cfg.thresholds) rep.checks.push_back(evaluate_threshold(th, rep));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string format_csv(const Table& table, ExperimentId id) {
  auto field = [](std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out = fmt::format("# holoflow {}{} csv v1\n", to_string(id), table.suffix.empty() ? "" : " " + table.suffix);
  for (std::size_t k = 0; k < table.header.size(); ++k) out += (k ? "," : "") + field(table.header[k]);
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + field(cell_text(row[k]));
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> write_csv(const RunReport& report, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<std::pair<fs::path, fs::path>> staged;  // (temporary, final)
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& [tmp, fin] : staged) fs::remove(tmp, ec);
  };
  try {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    for (const Table& t : report.tables) {
      fs::path target = path;
      if (!t.suffix.empty())
        target = path.parent_path() / (path.stem().string() + "_" + t.suffix + path.extension().string());
      fs::path tmp = target;
      tmp += ".partial";
      staged.emplace_back(tmp, target);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << format_csv(t, report.config.id);
      out.close();
      if (!out) throw Error(fmt::format("failed to write {}", tmp.string()));
    }
    std::vector<fs::path> written;
    for (const auto& [tmp, fin] : staged) {
      fs::rename(tmp, fin);
      written.push_back(fin);
    }
    return written;
  } catch (const fs::filesystem_error& e) {
    cleanup();
    throw Error(e.what());
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace holoflow
