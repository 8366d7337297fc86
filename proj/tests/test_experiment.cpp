#include "support.hpp"

#include "holoflow/experiment.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace holoflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "holoflow_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int cli(const std::string& args) {
  const std::string cmd = std::string(HOLOFLOW_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int config_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kSmallOrbit = R"(experiment: flow-orbit
family: h_r(0)
r: [25]
samples: 21
output: small.csv
thresholds:
  - {metric: fraction_at_max_r, min: 0.9}
)";

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("config defaults") {
    const ExperimentConfig c = parse_config("experiment: flow-orbit\nfamily: h_r(0)\nr: [25]\noutput: a.csv\n");
    CHECK(c.id == ExperimentId::FlowOrbit);
    CHECK(c.depth == 6);
    CHECK(c.samples == 2001);
    CHECK(c.epsilon == 0.05);
    CHECK(c.half_width == 0.5);
    CHECK(c.nodes == 512);
    CHECK_FALSE(c.seed.has_value());
    REQUIRE(c.families.size() == 1);
    CHECK(c.families[0] == "h_r(0)");
  }

  TEST_CASE("class check runs at load time") {
    const ExperimentConfig c = parse_config("experiment: flow-orbit\nfamily: be(z+w)\nr: [25]\noutput: a.csv\n");
    REQUIRE(c.class_reports.size() == 1);
    CHECK(c.class_reports[0].find("be(z+w)") != std::string::npos);
    CHECK_THROWS_AS(parse_config("experiment: flow-orbit\nfamily: proj(1)*2\nr: [25]\noutput: a.csv\n"), ConfigError);
  }

  TEST_CASE("invalid configs are rejected with a location") {
    CHECK(config_error_line("experiment: flow-orbit\nfamily: h_r(0)\nr: [25]\nepsilon: -1\noutput: a.csv\n") == 4);
    CHECK(config_error_line("experiment: flow-orbit\nfamily: h_r(0)\nr: [25]\nbogus: 1\noutput: a.csv\n") == 4);
    CHECK(config_error_line("experiment: flow-orbit\nfamily: h_r(q)\nr: [25]\noutput: a.csv\n") == 2);
    CHECK(config_error_line("experiment: nonsense\n") == 1);
    CHECK(config_error_line("experiment: flow-orbit\nmode: class\nfamily: h_r(0)\nr: [25]\noutput: a.csv\n") == 2);
    CHECK(config_error_line("experiment: flow-orbit\nfamily: h_r(0)\nr: [0]\noutput: a.csv\n") > 0);
    CHECK(parse_config("experiment: flow-orbit\nfamily: h_r(0)\nr: [25]\n").output == "flow-orbit.csv");
    CHECK_THROWS_AS(parse_config("[1, 2"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
  }

  TEST_CASE("CSV format") {
    Table t;
    t.header = {"family", "r", "count"};
    t.rows.push_back({std::string("linear(0.5, 0.5)"), 0.1, std::int64_t{3}});
    t.rows.push_back({std::string("mean"), 1.0 / 3.0, std::int64_t{-1}});
    const std::string csv = format_csv(t, ExperimentId::FlowOrbit);
    CHECK(csv ==
          "# holoflow flow-orbit csv v1\n"
          "family,r,count\n"
          "\"linear(0.5, 0.5)\",0.10000000000000001,3\n"
          "mean,0.33333333333333331,-1\n");
    t.suffix = "hist";
    CHECK(format_csv(t, ExperimentId::DefectScan).rfind("# holoflow defect-scan hist csv v1\n", 0) == 0);
  }

  TEST_CASE("write_csv is atomic") {
    const fs::path dir = scratch("write");
    RunReport rep;
    rep.config.id = ExperimentId::Periodicity;
    Table main;
    main.header = {"a"};
    main.rows.push_back({1.0});
    Table extra = main;
    extra.suffix = "detail";
    rep.tables = {main, extra};
    const auto written = write_csv(rep, dir / "out.csv");
    REQUIRE(written.size() == 2);
    CHECK(fs::exists(dir / "out.csv"));
    CHECK(fs::exists(dir / "out_detail.csv"));
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".partial");

    put(dir / "blocker", "not a directory");
    CHECK_THROWS(write_csv(rep, dir / "blocker" / "out.csv"));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 3);
  }

  TEST_CASE("run and thresholds") {
    const RunReport rep = run_experiment(parse_config(kSmallOrbit));
    REQUIRE_FALSE(rep.tables.empty());
    CHECK(rep.tables[0].rows.size() == 1);
    CHECK(rep.metrics.count("fraction_at_max_r") == 1);
    REQUIRE(rep.checks.size() == 1);
    CHECK_FALSE(rep.checks[0].pass);
    CHECK_FALSE(rep.pass());
    CHECK(rep.summary().find("FAIL") != std::string::npos);
  }

  TEST_CASE("CLI exit codes") {
    const fs::path dir = scratch("cli");
    const std::string configs = std::string(HOLOFLOW_SOURCE_DIR) + "/configs/";
    CHECK(cli("run --config " + configs + "c03_class_membership.yaml --out " + dir.string()) == 0);
    CHECK(cli("defect-scan --config " + configs + "c03_class_membership.yaml --out " + dir.string()) == 0);

    put(dir / "small.yaml", kSmallOrbit);
    CHECK(cli("run --config " + (dir / "small.yaml").string() + " --out " + dir.string()) == 1);
    CHECK(fs::exists(dir / "small.csv"));

    put(dir / "bad.yaml", "experiment: flow-orbit\nbogus: 1\n");
    CHECK(cli("run --config " + (dir / "bad.yaml").string() + " --out " + dir.string()) == 2);
    CHECK(cli("run --config " + (dir / "missing.yaml").string()) == 2);
    CHECK(cli("rigidity --config " + (dir / "small.yaml").string() + " --out " + dir.string()) == 2);
    CHECK(cli("run --config " + (dir / "small.yaml").string() + " --tol -1") == 2);
    CHECK(cli("") == 2);
  }

  TEST_CASE("output is byte-identical across runs and thread counts") {
    const fs::path dir = scratch("determinism");
    const std::string cfg = std::string(HOLOFLOW_SOURCE_DIR) + "/configs/c12_determinism.yaml";
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    fs::create_directories(dir / "c");
    CHECK(cli("run --config " + cfg + " --out " + (dir / "a").string()) == 0);
    CHECK(cli("run --config " + cfg + " --out " + (dir / "b").string()) == 0);
    CHECK(cli("run --threads 4 --config " + cfg + " --out " + (dir / "c").string()) == 0);
    const std::string a = slurp(dir / "a" / "c12_determinism.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "b" / "c12_determinism.csv"));
    CHECK(a == slurp(dir / "c" / "c12_determinism.csv"));
  }
}
