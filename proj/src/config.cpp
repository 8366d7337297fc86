#include "holoflow/experiment.hpp"

#include "holoflow/classes.hpp"
#include "holoflow/parser.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <fstream>
#include <set>
#include <sstream>

namespace holoflow {

namespace {

constexpr std::array<std::pair<ExperimentId, const char*>, 7> kNames{{
    {ExperimentId::FlowOrbit, "flow-orbit"},
    {ExperimentId::AverageConvergence, "average-convergence"},
    {ExperimentId::DefectScan, "defect-scan"},
    {ExperimentId::Equivariance, "equivariance"},
    {ExperimentId::Rigidity, "rigidity"},
    {ExperimentId::EntireDemo, "entire-demo"},
    {ExperimentId::Periodicity, "periodicity"},
}};

const std::map<ExperimentId, std::vector<std::string>> kModes{
    {ExperimentId::FlowOrbit, {"orbit"}},
    {ExperimentId::AverageConvergence, {"co-metric"}},
    {ExperimentId::DefectScan, {"defect", "class", "derivatives"}},
    {ExperimentId::Equivariance, {"aut-disk", "flow"}},
    {ExperimentId::Rigidity, {"residual", "harmonic", "polarization"}},
    {ExperimentId::EntireDemo, {"demo"}},
    {ExperimentId::Periodicity, {"residual"}},
};

const std::set<std::string> kKeys{"experiment", "mode",    "family",  "families",       "target",     "phi",
                                  "r",          "t",       "periods", "epsilon",        "depth",      "nodes",
                                  "samples",    "pairs",   "half_width", "tol",         "seed",       "output",
                                  "threshold_file", "thresholds"};

ConfigError at(const YAML::Node& node, const std::string& what) {
  if (!node.IsDefined()) return ConfigError(what);
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return ConfigError(what);
  return ConfigError(what, m.line + 1, m.column + 1);
}

template <class T> T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw at(node, fmt::format("'{}' has the wrong type", key));
  }
}

template <class T> std::vector<T> list(const YAML::Node& node, const std::string& key) {
  if (node.IsScalar()) return {scalar<T>(node, key)};
  if (!node.IsSequence()) throw at(node, fmt::format("'{}' must be a value or a list", key));
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(item, key));
  return out;
}

void require_positive(const YAML::Node& root, const std::string& key, double v) {
  if (!(v > 0.0)) throw at(root[key], fmt::format("'{}' must be positive, got {}", key, v));
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line, int column)
    : Error(line > 0 ? fmt::format("line {}, column {}: {}", line, column, what) : what), line_(line), column_(column) {}

std::string to_string(ExperimentId id) {
  for (const auto& [k, name] : kNames)
    if (k == id) return name;
  return "?";
}

std::optional<ExperimentId> experiment_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ConfigError("config must be a key-value table", 1, 1);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKeys.count(key)) throw at(kv.first, fmt::format("unknown key '{}'", key));
  }

  ExperimentConfig cfg;
  if (!root["experiment"]) throw ConfigError("missing 'experiment'", 1, 1);
  const auto id_text = scalar<std::string>(root["experiment"], "experiment");
  const auto id = experiment_from_string(id_text);
  if (!id) throw at(root["experiment"], fmt::format("unknown experiment '{}'", id_text));
  cfg.id = *id;

  const auto& modes = kModes.at(cfg.id);
  cfg.mode = root["mode"] ? scalar<std::string>(root["mode"], "mode") : modes.front();
  if (std::find(modes.begin(), modes.end(), cfg.mode) == modes.end())
    throw at(root["mode"], fmt::format("mode '{}' is not valid for {}", cfg.mode, id_text));

  if (root["family"] && root["families"]) throw at(root["families"], "give either 'family' or 'families'");
  if (root["family"]) cfg.families = {scalar<std::string>(root["family"], "family")};
  if (root["families"]) cfg.families = list<std::string>(root["families"], "families");
  if (root["target"]) cfg.target = scalar<std::string>(root["target"], "target");
  if (root["phi"]) cfg.phi = list<std::string>(root["phi"], "phi");

  switch (cfg.id) {
    case ExperimentId::FlowOrbit: cfg.r = {25, 50, 100, 200, 400}; break;
    case ExperimentId::AverageConvergence: cfg.r = {10, 100, 1000}; break;
    default: break;
  }
  if (root["r"]) cfg.r = list<double>(root["r"], "r");
  if (root["t"]) cfg.t = list<double>(root["t"], "t");
  if (root["periods"]) cfg.periods = list<int>(root["periods"], "periods");
  for (double v : cfg.r) require_positive(root, "r", v);
  for (int v : cfg.periods) require_positive(root, "periods", v);

  if (root["epsilon"]) cfg.epsilon = scalar<double>(root["epsilon"], "epsilon");
  if (root["depth"]) cfg.depth = scalar<int>(root["depth"], "depth");
  if (root["nodes"]) cfg.nodes = scalar<int>(root["nodes"], "nodes");
  if (root["samples"]) cfg.samples = scalar<int>(root["samples"], "samples");
  if (root["pairs"]) cfg.pairs = scalar<int>(root["pairs"], "pairs");
  if (root["half_width"]) cfg.half_width = scalar<double>(root["half_width"], "half_width");
  if (root["tol"]) cfg.tol = scalar<double>(root["tol"], "tol");
  require_positive(root, "epsilon", cfg.epsilon);
  require_positive(root, "depth", cfg.depth);
  require_positive(root, "nodes", cfg.nodes);
  require_positive(root, "samples", cfg.samples);
  require_positive(root, "pairs", cfg.pairs);
  require_positive(root, "half_width", cfg.half_width);
  require_positive(root, "tol", cfg.tol);
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed");

  cfg.output = root["output"] ? scalar<std::string>(root["output"], "output") : id_text + ".csv";
  if (root["threshold_file"])
    cfg.threshold_file = base_dir / scalar<std::string>(root["threshold_file"], "threshold_file");

  if (const YAML::Node th = root["thresholds"]) {
    if (!th.IsSequence()) throw at(th, "'thresholds' must be a list");
    for (const auto& item : th) {
      if (!item.IsMap() || !item["metric"]) throw at(item, "each threshold needs a 'metric'");
      for (const auto& kv : item) {
        const auto k = kv.first.as<std::string>();
        if (k != "metric" && k != "where" && k != "min" && k != "max")
          throw at(kv.first, fmt::format("unknown threshold key '{}'", k));
      }
      Threshold t;
      t.metric = scalar<std::string>(item["metric"], "metric");
      if (item["where"]) {
        if (!item["where"].IsMap()) throw at(item["where"], "'where' must be a table");
        for (const auto& kv : item["where"]) t.where[kv.first.as<std::string>()] = scalar<std::string>(kv.second, "where");
      }
      if (item["min"]) t.min = scalar<double>(item["min"], "min");
      if (item["max"]) t.max = scalar<double>(item["max"], "max");
      if (!t.min && !t.max) throw at(item, "threshold needs 'min' or 'max'");
      // One bound per check keeps each reported value unambiguous.
      if (t.min && t.max) {
        Threshold lo = t;
        lo.max.reset();
        t.min.reset();
        cfg.thresholds.push_back(lo);
      }
      cfg.thresholds.push_back(t);
    }
  }

  // Families are parsed up front; errors carry a position.
  const bool needs_family = cfg.id == ExperimentId::FlowOrbit || cfg.id == ExperimentId::AverageConvergence ||
                            cfg.id == ExperimentId::Periodicity ||
                            (cfg.id == ExperimentId::DefectScan) ||
                            (cfg.id == ExperimentId::Rigidity && cfg.mode == "residual");
  if (needs_family && cfg.families.empty()) throw ConfigError(fmt::format("{} needs 'family' or 'families'", id_text));
  if ((cfg.id == ExperimentId::FlowOrbit || cfg.id == ExperimentId::AverageConvergence) && cfg.families.size() != 1)
    throw at(root["families"], fmt::format("{} takes exactly one family", id_text));

  const bool needs_c = cfg.id == ExperimentId::FlowOrbit || cfg.id == ExperimentId::AverageConvergence ||
                       cfg.id == ExperimentId::Rigidity;
  const YAML::Node fam_node = root["family"] ? root["family"] : root["families"];
  for (std::size_t k = 0; k < cfg.families.size(); ++k) {
    if (cfg.families[k] == "shipped") continue;
    const YAML::Node item = fam_node.IsSequence() ? fam_node[k] : fam_node;
    Family fam;
    try {
      fam = parse_family(cfg.families[k]);
    } catch (const ParseError& e) {
      const YAML::Mark m = item.Mark();
      throw ConfigError(fmt::format("family '{}': {}", cfg.families[k], e.what()), m.line + 1,
                        m.column + e.column());
    }
    if (needs_c) {
      if (!fam.map) throw at(item, fmt::format("family '{}' is not a holomorphic map on H^n or D^n", cfg.families[k]));
      const ClassReport rep = check_class(*fam.map, MapClass::C, default_class_samples(), cfg.tol);
      if (!rep.pass)
        throw at(item, fmt::format("family '{}' fails the class-C check: diagonal residual {:.3e}, derivative "
                                   "residual {:.3e}{}",
                                   cfg.families[k], rep.max_diag_residual, rep.max_deriv_residual,
                                   rep.failure.empty() ? "" : " (" + rep.failure + ")"));
      cfg.class_reports.push_back(fmt::format("{}: class C, diagonal residual {:.3e}, derivative residual {:.3e}",
                                              cfg.families[k], rep.max_diag_residual, rep.max_deriv_residual));
    }
  }
  if (cfg.target) {
    try {
      if (!parse_family(*cfg.target).map) throw at(root["target"], "target must be a holomorphic map");
    } catch (const ParseError& e) {
      const YAML::Mark m = root["target"].Mark();
      throw ConfigError(fmt::format("target: {}", e.what()), m.line + 1, m.column + e.column());
    }
  }
  for (std::size_t k = 0; k < cfg.phi.size(); ++k) {
    try {
      parse_expression(cfg.phi[k], Domain::HalfPlane);
    } catch (const ParseError& e) {
      const YAML::Node node = root["phi"].IsSequence() ? root["phi"][k] : root["phi"];
      throw ConfigError(fmt::format("phi: {}", e.what()), node.Mark().line + 1, node.Mark().column + e.column());
    }
  }
  if (cfg.id == ExperimentId::Equivariance && cfg.mode == "flow" && cfg.phi.empty())
    throw ConfigError("equivariance mode flow needs 'phi'");
  if (cfg.threshold_file && !std::filesystem::exists(*cfg.threshold_file))
    throw at(root["threshold_file"], fmt::format("threshold file {} not found", cfg.threshold_file->string()));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace holoflow
