#include <doctest.h>

#include "loclab/runner.hpp"

#include <algorithm>
#include <fstream>

using namespace loclab;
using namespace loclab::runner;

namespace {

int count_lines(const std::string& text) {
  int n = 0;
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '\r' && text[i + 1] == '\n') ++n;
  }
  return n;
}

ExperimentConfig fast_matrix_config() {
  ExperimentConfig c;
  c.system = "standard_zero";
  c.size = 32;
  c.experiments = {"matrix"};
  return c;
}

}  // namespace

TEST_CASE("config validation names its failures") {
  ExperimentConfig c = fast_matrix_config();
  CHECK_NOTHROW(c.validate());

  c.system = "foo";
  CHECK_THROWS_AS(c.validate(), UnknownSystemError);

  c = fast_matrix_config();
  c.size = 48;
  CHECK_THROWS_AS(c.validate(), InfeasibleSizeError);
  c.size = 1024;
  CHECK_THROWS_AS(c.validate(), InfeasibleSizeError);

  c = fast_matrix_config();
  c.system = "lattice_fock";
  c.size = 12;
  CHECK_THROWS_AS(c.validate(), InfeasibleSizeError);
  c.size = 6;
  CHECK_NOTHROW(c.validate());

  c = fast_matrix_config();
  c.system = "tensor_counterexample";
  c.size = 64;
  CHECK_THROWS_AS(c.validate(), InfeasibleSizeError);

  c = fast_matrix_config();
  c.system = "pathological_only_d0";
  c.d0_start = 30;
  c.d0_width = 8;
  CHECK_THROWS_AS(c.validate(), InvalidRegionError);

  c = fast_matrix_config();
  c.system = "cylinder_threshold";
  c.model = "line_isotropic";
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = fast_matrix_config();
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = fast_matrix_config();
  c.experiments = {"matrix", "nonsense"};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = fast_matrix_config();
  c.system = "measure_effect";
  c.experiments = {"leakage"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config parsing is strict") {
  ExperimentConfig c = parse_config_text(R"({
    "system": "standard_relativistic",
    "size": 64,
    "spacing": 0.5,
    "mass": 2.0,
    "seed": 9,
    "experiments": ["matrix", "leakage"],
    "leakage_gap": 4.0,
    "leakage_time": 1.5
  })");
  CHECK(c.system == "standard_relativistic");
  CHECK(c.size == 64);
  CHECK(c.spacing == doctest::Approx(0.5));
  CHECK(c.mass == doctest::Approx(2.0));
  CHECK(c.seed == 9);
  CHECK(c.experiments == std::vector<std::string>{"matrix", "leakage"});
  CHECK(c.leakage_gap == doctest::Approx(4.0));

  CHECK_THROWS_AS(parse_config_text("{\"sistem\": \"x\"}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{\"size\": \"many\"}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("catalog census and constructor round-trip") {
  auto entries = list_systems();
  CHECK(entries.size() >= 10);
  bool has_cylinder = false;
  for (const auto& e : entries) {
    if (e.name == "cylinder_threshold") has_cylinder = true;
    CHECK(!e.kind.empty());
    CHECK(!e.parameters.empty());
    CHECK(!e.provenance.empty());

    ExperimentConfig c;
    c.system = e.name;
    c.size = e.name == "lattice_fock" ? 6 : e.name == "tensor_counterexample" ? 16 : 32;
    CHECK_NOTHROW(build_from_config(c));
  }
  CHECK(has_cylinder);
}

TEST_CASE("defaults bind the right space model") {
  ExperimentConfig c = fast_matrix_config();
  CHECK(build_from_config(c).model.kind == spacetime::ModelKind::line_distinguished_frame);
  c.system = "dirac_positive";
  CHECK(build_from_config(c).model.kind == spacetime::ModelKind::line_isotropic);
  c.system = "measure_effect";
  CHECK(build_from_config(c).model.kind == spacetime::ModelKind::circle);
}

TEST_CASE("fixed seed gives byte-identical reports") {
  ExperimentConfig c = fast_matrix_config();
  c.experiments = {"matrix", "borchers"};
  c.seed = 5;
  const std::string a = run_to_json(c);
  const std::string b = run_to_json(c);
  CHECK(a == b);
  CHECK(reports_equal(a, b));
  CHECK_NOTHROW(validate_report_schema(a));

  ExperimentConfig other = c;
  other.seed = 6;
  CHECK(!reports_equal(a, run_to_json(other)));
}

TEST_CASE("schema gate rejects mismatches") {
  std::string report = run_to_json(fast_matrix_config());
  std::string tampered = report;
  const std::string tag = "loclab-report/1";
  tampered.replace(tampered.find(tag), tag.size(), "loclab-report/9");
  CHECK_THROWS_AS(validate_report_schema(tampered), SchemaError);
  CHECK_THROWS_AS(validate_report_schema("{}"), ConfigError);
  CHECK_THROWS_AS(validate_report_schema("nope"), ConfigError);
}

TEST_CASE("csv flattening: one row per verdict, RFC 4180 framing") {
  std::string report = run_to_json(fast_matrix_config());
  std::string csv = report_to_csv(report);
  // Header plus the full condition census.
  CHECK(count_lines(csv) == 1 + 11);
  CHECK(csv.substr(0, 10) == "experiment");
  CHECK(csv.find('\n') != std::string::npos);
  // Every newline is CRLF.
  for (size_t i = 0; i < csv.size(); ++i) {
    if (csv[i] == '\n') {
      REQUIRE(i > 0);
      CHECK(csv[i - 1] == '\r');
    }
  }
  CHECK(csv.find("localizability") != std::string::npos);
  CHECK(csv.find("trivial_dynamics") != std::string::npos);
}

TEST_CASE("csv leakage rows carry gap, time, probability") {
  ExperimentConfig c;
  c.system = "standard_nonrelativistic";
  c.size = 64;
  c.experiments = {"leakage"};
  c.leakage_gap = 3.0;
  c.leakage_time = 1.0;
  std::string csv = report_to_csv(run_to_json(c));
  CHECK(count_lines(csv) == 1 + 2);  // t = 0 and t = leakage_time
  std::string header = csv.substr(0, csv.find('\r'));
  CHECK(header.find("gap") != std::string::npos);
  CHECK(header.find("time") != std::string::npos);
  CHECK(header.find("probability") != std::string::npos);
}

TEST_CASE("human rendering shows the glyph table") {
  std::string report = run_to_json(fast_matrix_config());
  std::string text = render_human(report);
  CHECK(text.find("✓") != std::string::npos);  // passes
  CHECK(text.find("✗") != std::string::npos);  // the NAV decree
  CHECK(text.find("conclusion") != std::string::npos);
  CHECK(text.find("trivial_dynamics") != std::string::npos);
}

TEST_CASE("multi-experiment report keeps config order") {
  ExperimentConfig c = fast_matrix_config();
  c.experiments = {"busch", "matrix"};
  std::string report = run_to_json(c);
  const size_t busch_at = report.find("\"experiment\": \"busch\"");
  const size_t matrix_at = report.find("\"experiment\": \"matrix\"");
  REQUIRE(busch_at != std::string::npos);
  REQUIRE(matrix_at != std::string::npos);
  CHECK(busch_at < matrix_at);
}
