// loclab: build a localization system, run the configured experiments, and
// print or save the report.
//
//   loclab run <config.json> [--out <path>] [--format json|csv] [overrides]
//   loclab list
//   loclab matrix --system <name> [--size <N>] [overrides]
//
// Machine output goes to --out (or stdout); the human-readable table and
// timings go to stderr so piped output stays parseable.
// Exit codes: 0 success, 1 invalid config, 2 experiment failure.

#include "loclab/runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

using loclab::runner::ExperimentConfig;

struct Overrides {
  std::string system, model, out, format;
  int size = 0;
  double mass = 0.0, spacing = 0.0;
  unsigned long long seed = 0;
  bool seed_set = false;

  void add_flags(CLI::App& app) {
    app.add_option("--system", system, "system name (see `loclab list`)");
    app.add_option("--size", size, "lattice sites");
    app.add_option("--mass", mass, "particle mass");
    app.add_option("--spacing", spacing, "lattice spacing");
    app.add_option("--model", model, "space model override");
    app.add_option("--seed", seed, "random seed")->each([this](const std::string&) {
      seed_set = true;
    });
  }

  void apply(ExperimentConfig& c) const {
    if (!system.empty()) c.system = system;
    if (size > 0) c.size = size;
    if (mass > 0.0) c.mass = mass;
    if (spacing > 0.0) c.spacing = spacing;
    if (!model.empty()) c.model = model;
    if (seed_set) c.seed = seed;
    if (!out.empty()) c.out_path = out;
    if (!format.empty()) c.format = format;
  }
};

int execute(const ExperimentConfig& c, bool human_to_stdout) {
  const auto started = std::chrono::steady_clock::now();
  const std::string report = loclab::runner::run_to_json(c);
  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - started);

  std::string payload = report;
  if (c.format == "csv") payload = loclab::runner::report_to_csv(report);

  if (!c.out_path.empty()) {
    std::ofstream out(c.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "loclab: cannot write " << c.out_path << "\n";
      return 2;
    }
    out << payload;
  } else if (!human_to_stdout) {
    std::cout << payload;
  }

  std::ostream& human = human_to_stdout ? std::cout : std::cerr;
  human << loclab::runner::render_human(report);
  std::cerr << "completed in " << elapsed.count() << " s\n";
  return 0;
}

int run_command(const std::string& config_path, const Overrides& o) {
  ExperimentConfig c = loclab::runner::parse_config_file(config_path);
  o.apply(c);
  c.validate();
  return execute(c, false);
}

int matrix_command(const Overrides& o) {
  ExperimentConfig c;
  c.experiments = {"matrix"};
  o.apply(c);
  c.validate();
  return execute(c, true);
}

int list_command() {
  for (const auto& e : loclab::runner::list_systems()) {
    std::cout << e.name << "  [" << e.kind << "]\n"
              << "    parameters: " << e.parameters << "\n"
              << "    " << e.provenance << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"localization-system laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_overrides;
  CLI::App* run = app.add_subcommand("run", "execute a config file");
  run->add_option("config", config_path, "JSON config")->required();
  run_overrides.add_flags(*run);
  run->add_option("--out", run_overrides.out, "write the report here");
  run->add_option("--format", run_overrides.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* list = app.add_subcommand("list", "catalog of systems");

  Overrides matrix_overrides;
  CLI::App* matrix = app.add_subcommand("matrix", "condition matrix for one system");
  matrix_overrides.add_flags(*matrix);
  matrix->get_option("--system")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(config_path, run_overrides);
    if (list->parsed()) return list_command();
    if (matrix->parsed()) return matrix_command(matrix_overrides);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const loclab::ConfigError& e) {
    std::cerr << "loclab: " << e.what() << "\n";
    return 1;
  } catch (const loclab::Error& e) {
    std::cerr << "loclab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "loclab: " << e.what() << "\n";
    return 2;
  }
}
