#include "loclab/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace loclab {
namespace runner {

using ordered_json = nlohmann::ordered_json;
using axioms::ConditionId;
using axioms::Outcome;
using axioms::TolerancePolicy;
using axioms::Verdict;
using opkernel::Operator;
using spacetime::ModelKind;
using spacetime::Region;
using spacetime::SpaceModel;
using zoo::LocalizationSystem;

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct SystemTraits {
  const char* name;
  const char* kind;
  const char* parameters;
  const char* provenance;
  ModelKind default_model;
  bool circle_only;
  bool takes_anchor;   // uses d0_start / d0_width
  bool fock_sizing;    // size means fermionic sites, 4..10
  bool tensor_sizing;  // dimension is size^2, cap size at 32
};

const SystemTraits kCatalog[] = {
    {"standard_zero", "sharp", "size, spacing, model",
     "position indicators with frozen-phase dynamics (H = 0); every dynamical "
     "condition holds trivially",
     ModelKind::line_distinguished_frame, false, false, false, false},
    {"standard_nonrelativistic", "sharp", "size, spacing, mass, model",
     "position indicators evolving under p^2/2m; spreads instantly, failing "
     "microcausality alone",
     ModelKind::line_distinguished_frame, false, false, false, false},
    {"standard_relativistic", "sharp", "size, spacing, mass, model",
     "position indicators under sqrt(p^2 + m^2); still fails microcausality "
     "alone despite the relativistic dispersion",
     ModelKind::line_distinguished_frame, false, false, false, false},
    {"momentum_hamiltonian", "sharp", "size, spacing, model",
     "position indicators with H = P, unbounded below; the energy condition "
     "is the only failure (divergence certified across refinements)",
     ModelKind::line_distinguished_frame, false, false, false, false},
    {"frozen", "sharp", "size, spacing, mass, model",
     "time-independent indicators decreed over nontrivial dynamics; only "
     "time covariance fails",
     ModelKind::line_distinguished_frame, false, false, false, false},
    {"pathological_only_d0", "sharp", "size, spacing, mass, d0, model",
     "assignment vanishes off one anchored region; only probability "
     "conservation fails (a covering containing d0 has a moving join)",
     ModelKind::line_distinguished_frame, false, true, false, false},
    {"pathological_all_but_d0", "sharp", "size, spacing, mass, d0, model",
     "assignment is the identity off one anchored region; only "
     "localizability fails",
     ModelKind::line_distinguished_frame, false, true, false, false},
    {"tensor_counterexample", "sharp", "size (<= 32), spacing, mass, d0, model",
     "product construction whose covering joins move with time while "
     "localizability and microcausality survive",
     ModelKind::line_distinguished_frame, false, true, false, true},
    {"cylinder_threshold", "sharp", "size, spacing",
     "localization thresholded at measure 2/3 on the circle; monotonicity "
     "and probability conservation fail with explicit witnesses",
     ModelKind::circle, true, false, false, false},
    {"measure_effect", "unsharp", "size, spacing",
     "the scalar effect measure(d) * I on the circle: every premise of the "
     "unsharp no-go holds yet nothing vanishes, dynamics exactly trivial",
     ModelKind::circle, true, false, false, false},
    {"dirac_positive", "unsharp", "size, spacing, mass, model",
     "1+1 lattice Dirac hamiltonian compressed to its positive-energy "
     "subspace; genuine effects strictly inside (0, 1), superluminal "
     "signalling measurable as a microcausality failure",
     ModelKind::line_isotropic, false, false, false, false},
    {"lattice_fock", "number", "size (= sites, 4..10), spacing",
     "fermionic occupation numbers with nearest-neighbor hopping; additive, "
     "number-conserving, energy bounded below, microcausality fails",
     ModelKind::circle, true, false, true, false},
};

const SystemTraits& traits_for(const std::string& name) {
  for (const SystemTraits& t : kCatalog) {
    if (name == t.name) return t;
  }
  throw UnknownSystemError("unknown system \"" + name + "\" (see `loclab list`)");
}

ModelKind resolve_model(const ExperimentConfig& c, const SystemTraits& t) {
  if (c.model.empty()) return t.default_model;
  auto k = spacetime::model_kind_from_string(c.model);
  if (!k) {
    throw ConfigError("unknown space model \"" + c.model + "\"");
  }
  if (t.circle_only && *k != ModelKind::circle) {
    throw ConfigError(std::string(t.name) + " requires the circle model");
  }
  return *k;
}

Region anchor_region(const ExperimentConfig& c, const SpaceModel& m) {
  const int width = c.d0_width < 0 ? std::max(1, c.size / 8) : c.d0_width;
  if (width < 1 || c.d0_start < 0 || c.d0_start + width > m.sites) {
    throw InvalidRegionError("anchor region [" + std::to_string(c.d0_start) + ", " +
                             std::to_string(c.d0_start + width) +
                             ") does not fit on " + std::to_string(m.sites) + " sites");
  }
  return spacetime::make_interval(m, c.d0_start, width);
}

const std::vector<std::string> kKnownExperiments = {"matrix",     "leakage", "busch",
                                                    "hegerfeldt", "borchers", "lemmas"};

// ---- serialization helpers -------------------------------------------------

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["system"] = c.system;
  j["size"] = c.size;
  j["spacing"] = c.spacing;
  j["mass"] = c.mass;
  j["model"] = c.model;
  j["d0_start"] = c.d0_start;
  j["d0_width"] = c.d0_width;
  j["seed"] = c.seed;
  j["experiments"] = c.experiments;
  j["leakage_gap"] = c.leakage_gap;
  j["leakage_time"] = c.leakage_time;
  j["pass_tol"] = c.pass_tol;
  j["fail_tol"] = c.fail_tol;
  j["format"] = c.format;
  return j;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::not_applicable: return "not_applicable";
  }
  return "fail";
}

ordered_json verdict_to_json(const Verdict& v) {
  ordered_json j;
  j["condition"] = axioms::to_string(v.condition);
  j["outcome"] = outcome_name(v.outcome);
  j["residual"] = v.residual;
  j["samples"] = v.samples_examined;
  j["witness"] = v.witness;
  j["detail"] = v.detail;
  return j;
}

ordered_json matrix_to_json(const nogo::ConditionMatrix& cm) {
  ordered_json j;
  j["experiment"] = "matrix";
  j["system"] = cm.system_label;
  j["conclusion_kind"] = nogo::to_string(cm.conclusion_kind);
  j["conclusion_residual"] = cm.conclusion_residual;
  j["conclusion_holds"] = cm.conclusion_holds;
  j["trivial_dynamics_residual"] = cm.trivial_dynamics_residual;
  j["vanishing_residual"] = cm.vanishing_residual;
  j["premises"] = ordered_json::array();
  for (ConditionId c : cm.premises) j["premises"].push_back(axioms::to_string(c));
  j["premises_strictly_hold"] = cm.premises_strictly_hold;
  j["no_premise_fails"] = cm.no_premise_fails;
  j["consistent"] = cm.consistent;
  j["verdicts"] = ordered_json::array();
  for (const Verdict& v : cm.verdicts) j["verdicts"].push_back(verdict_to_json(v));
  return j;
}

ordered_json leakage_experiment(const LocalizationSystem& s, const ExperimentConfig& c) {
  const SpaceModel& m = s.model;
  const int width = std::max(1, m.sites / 8);
  const int gap_sites = static_cast<int>(std::llround(c.leakage_gap / m.spacing));
  if (gap_sites < 1 || 2 * width + gap_sites + 1 >= m.sites) {
    throw InvalidRegionError("leakage gap " + std::to_string(c.leakage_gap) +
                             " does not fit on the lattice");
  }
  // Nearest sites sit gap_sites apart, so the measured distance equals the
  // requested physical gap (up to spacing rounding).
  Region initial = spacetime::make_interval(m, 0, width);
  Region probe = spacetime::make_interval(m, width - 1 + gap_sites, width);

  ordered_json j;
  j["experiment"] = "leakage";
  j["system"] = s.name;
  j["initial"] = initial.to_string();
  j["probe"] = probe.to_string();
  j["entries"] = ordered_json::array();
  for (double t : {0.0, c.leakage_time}) {
    nogo::LeakageReport r = nogo::superluminal_leakage(s, initial, probe, t);
    ordered_json e;
    e["time"] = r.time;
    e["gap"] = r.gap;
    e["leaked_probability"] = r.leaked_probability;
    e["spacelike_clear"] = r.spacelike_clear;
    j["entries"].push_back(std::move(e));
  }
  return j;
}

ordered_json busch_experiment(const LocalizationSystem& s) {
  axioms::RegionCatalog cat = axioms::make_catalog(s.model);
  ordered_json j;
  j["experiment"] = "busch";
  j["system"] = s.name;
  j["entries"] = ordered_json::array();
  for (const Region& d : cat.singles) {
    nogo::BuschReport r = nogo::busch_spectrum(s, d);
    ordered_json e;
    e["region"] = d.to_string();
    e["min_eigenvalue"] = r.min_eigenvalue;
    e["max_eigenvalue"] = r.max_eigenvalue;
    e["gap_to_one"] = r.gap_to_one;
    j["entries"].push_back(std::move(e));
  }
  return j;
}

ordered_json hegerfeldt_experiment(unsigned long long seed) {
  opkernel::Rng rng(seed);
  ordered_json j;
  j["experiment"] = "hegerfeldt";
  j["instances"] = 100;
  j["entries"] = ordered_json::array();
  int anomalous = 0;
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = 5.0 * i / 100;
  for (int i = 0; i < 100; ++i) {
    const int dim = rng.uniform_int(4, 16);
    Operator h = Operator::make(rng.random_hermitian(dim), opkernel::OpClass::hermitian);
    const int rank = rng.uniform_int(1, dim - 1);
    Operator a = rng.random_projection(dim, rank);
    opkernel::StateVector psi = opkernel::StateVector::normalized(rng.random_vector(dim));
    nogo::ZeroSetReport r = nogo::hegerfeldt_zero_set(h, a, psi, grid);
    if (r.classification == nogo::ZeroSetClass::anomalous) ++anomalous;
    ordered_json e;
    e["dim"] = dim;
    e["classification"] = nogo::to_string(r.classification);
    e["max_abs"] = r.max_abs;
    e["zero_fraction"] = r.zero_fraction;
    j["entries"].push_back(std::move(e));
  }
  j["anomalous_count"] = anomalous;
  return j;
}

ordered_json borchers_experiment(unsigned long long seed) {
  opkernel::Rng rng(seed + 1);
  ordered_json j;
  j["experiment"] = "borchers";
  j["instances"] = 20;
  j["entries"] = ordered_json::array();
  int witnesses = 0;
  for (int i = 0; i < 20; ++i) {
    const int dim = rng.uniform_int(6, 12);
    const int r1 = rng.uniform_int(1, dim / 2 - 1);
    const int r2 = rng.uniform_int(1, dim - dim / 2);
    Matrix v = rng.random_unitary(dim);
    Matrix d1 = Matrix::Zero(dim, dim);
    Matrix d2 = Matrix::Zero(dim, dim);
    for (int k = 0; k < r1; ++k) d1(k, k) = 1.0;
    for (int k = 0; k < r2; ++k) d2(dim / 2 + k, dim / 2 + k) = 1.0;
    Operator e = Operator::make(Matrix(v * d1 * v.adjoint()), opkernel::OpClass::projection);
    Operator f = Operator::make(Matrix(v * d2 * v.adjoint()), opkernel::OpClass::projection);
    Operator h = Operator::make(rng.random_hermitian(dim), opkernel::OpClass::hermitian);
    nogo::BorchersReport r = nogo::borchers_probe(e, f, h, 0.5);
    const bool contrapositive_witness =
        !r.commutes_on_interval && r.product_max > 1e-6 && r.consistent;
    if (contrapositive_witness) ++witnesses;
    ordered_json entry;
    entry["dim"] = dim;
    entry["commutes_on_interval"] = r.commutes_on_interval;
    entry["interval_commutator_max"] = r.interval_commutator_max;
    entry["commutator_witness_time"] = r.commutator_witness_time;
    entry["product_max"] = r.product_max;
    entry["product_witness_time"] = r.product_witness_time;
    entry["consistent"] = r.consistent;
    entry["contrapositive_witness"] = contrapositive_witness;
    j["entries"].push_back(std::move(entry));
  }
  j["witness_count"] = witnesses;
  return j;
}

ordered_json lemmas_experiment(const TolerancePolicy& p) {
  nogo::LemmaSuiteReport r = nogo::appendix_lemma_suite(p);
  ordered_json j;
  j["experiment"] = "lemmas";
  j["all_ok"] = r.all_ok;
  j["entries"] = ordered_json::array();
  for (const nogo::LemmaEntry& e : r.entries) {
    ordered_json entry;
    entry["lemma"] = e.lemma;
    entry["instance"] = e.instance;
    entry["status"] =
        e.status == nogo::LemmaEntry::Status::proved ? "proved" : "vacuous";
    entry["premise_residual"] = e.premise_residual;
    entry["conclusion_residual"] = e.conclusion_residual;
    entry["ok"] = e.ok;
    j["entries"].push_back(std::move(entry));
  }
  return j;
}

ordered_json parse_document(const std::string& text, const char* what) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError(std::string(what) + ": malformed JSON");
  }
  return j;
}

// ---- CSV -------------------------------------------------------------------

const char* kCsvColumns[] = {
    "experiment", "system",   "item",      "condition",           "outcome",
    "residual",   "samples",  "witness",   "conclusion_kind",     "conclusion_residual",
    "conclusion_holds",       "gap",       "time",                "probability",
    "min_eigenvalue",         "max_eigenvalue",                   "gap_to_one",
    "classification",         "status",    "ok"};

std::string csv_quote(const std::string& field) {
  const bool needs =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::string cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return ordered_json(v).dump();
}

void emit_row(std::string& out, const ordered_json& row) {
  bool first = true;
  for (const char* col : kCsvColumns) {
    if (!first) out += ",";
    first = false;
    out += row.contains(col) ? cell(row.at(col)) : "";
  }
  out += "\r\n";
}

void csv_rows_for(const ordered_json& result, std::string& out) {
  const std::string exp = result.at("experiment").get<std::string>();
  if (exp == "matrix") {
    for (const auto& v : result.at("verdicts")) {
      ordered_json row;
      row["experiment"] = exp;
      row["system"] = result.at("system");
      row["condition"] = v.at("condition");
      row["outcome"] = v.at("outcome");
      row["residual"] = v.at("residual");
      row["samples"] = v.at("samples");
      row["witness"] = v.at("witness");
      row["conclusion_kind"] = result.at("conclusion_kind");
      row["conclusion_residual"] = result.at("conclusion_residual");
      row["conclusion_holds"] = result.at("conclusion_holds");
      emit_row(out, row);
    }
    return;
  }
  if (exp == "leakage") {
    for (const auto& e : result.at("entries")) {
      ordered_json row;
      row["experiment"] = exp;
      row["system"] = result.at("system");
      row["item"] = result.at("initial").get<std::string>() + " -> " +
                    result.at("probe").get<std::string>();
      row["gap"] = e.at("gap");
      row["time"] = e.at("time");
      row["probability"] = e.at("leaked_probability");
      emit_row(out, row);
    }
    return;
  }
  if (exp == "busch") {
    for (const auto& e : result.at("entries")) {
      ordered_json row;
      row["experiment"] = exp;
      row["system"] = result.at("system");
      row["item"] = e.at("region");
      row["min_eigenvalue"] = e.at("min_eigenvalue");
      row["max_eigenvalue"] = e.at("max_eigenvalue");
      row["gap_to_one"] = e.at("gap_to_one");
      emit_row(out, row);
    }
    return;
  }
  if (exp == "hegerfeldt") {
    int idx = 0;
    for (const auto& e : result.at("entries")) {
      ordered_json row;
      row["experiment"] = exp;
      row["item"] = "instance " + std::to_string(idx++);
      row["classification"] = e.at("classification");
      row["residual"] = e.at("max_abs");
      emit_row(out, row);
    }
    return;
  }
  if (exp == "borchers") {
    int idx = 0;
    for (const auto& e : result.at("entries")) {
      ordered_json row;
      row["experiment"] = exp;
      row["item"] = "instance " + std::to_string(idx++);
      row["residual"] = e.at("interval_commutator_max");
      row["probability"] = e.at("product_max");
      row["ok"] = e.at("contrapositive_witness");
      emit_row(out, row);
    }
    return;
  }
  if (exp == "lemmas") {
    for (const auto& e : result.at("entries")) {
      ordered_json row;
      row["experiment"] = exp;
      row["system"] = e.at("lemma");
      row["item"] = e.at("instance");
      row["residual"] = e.at("conclusion_residual");
      row["status"] = e.at("status");
      row["ok"] = e.at("ok");
      emit_row(out, row);
    }
    return;
  }
  throw ConfigError("report contains an unknown experiment \"" + exp + "\"");
}

// ---- human rendering -------------------------------------------------------

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

const char* glyph(const std::string& outcome) {
  if (outcome == "pass") return "✓";
  if (outcome == "fail") return "✗";
  return "—";  // not applicable
}

void render_matrix(const ordered_json& r, std::ostringstream& os) {
  os << "system: " << r.at("system").get<std::string>() << "\n";
  os << "conclusion: " << r.at("conclusion_kind").get<std::string>()
     << (r.at("conclusion_holds").get<bool>() ? " holds" : " FAILS")
     << " (residual " << sci(r.at("conclusion_residual").get<double>()) << ")\n";
  os << "premises strictly hold: "
     << (r.at("premises_strictly_hold").get<bool>() ? "yes" : "no")
     << "; no premise fails: " << (r.at("no_premise_fails").get<bool>() ? "yes" : "no")
     << "; consistent: " << (r.at("consistent").get<bool>() ? "yes" : "NO") << "\n";
  os << "  " << std::left << std::setw(26) << "condition" << std::setw(5) << " "
     << std::setw(12) << "residual" << "witness\n";
  for (const auto& v : r.at("verdicts")) {
    const std::string outcome = v.at("outcome").get<std::string>();
    os << "  " << std::left << std::setw(26) << v.at("condition").get<std::string>()
       << std::setw(5) << glyph(outcome) << std::setw(12)
       << sci(v.at("residual").get<double>());
    const std::string witness = v.at("witness").get<std::string>();
    if (!witness.empty()) os << witness;
    os << "\n";
  }
}

// ---- experiment dispatch ---------------------------------------------------

bool needs_system(const std::string& e) {
  return e == "matrix" || e == "leakage" || e == "busch";
}

}  // namespace

void ExperimentConfig::validate() const {
  const SystemTraits& t = traits_for(system);
  if (t.fock_sizing) {
    if (size < 4 || size > 10) {
      throw InfeasibleSizeError("lattice_fock needs 4..10 sites, got " +
                                std::to_string(size));
    }
  } else if (t.tensor_sizing) {
    if (!power_of_two(size) || size < 16 || size > 32) {
      throw InfeasibleSizeError(
          "tensor_counterexample needs a power-of-two size in [16, 32], got " +
          std::to_string(size));
    }
  } else {
    if (!power_of_two(size) || size < 16 || size > 512) {
      throw InfeasibleSizeError("size must be a power of two in [16, 512], got " +
                                std::to_string(size));
    }
  }
  if (!(spacing > 0.0) || !(mass > 0.0)) {
    throw ConfigError("spacing and mass must be positive");
  }
  if (!(pass_tol > 0.0) || !(fail_tol >= pass_tol)) {
    throw ConfigError("tolerances must satisfy 0 < pass_tol <= fail_tol");
  }
  if (format != "json" && format != "csv") {
    throw ConfigError("unsupported format \"" + format + "\"");
  }
  if (experiments.empty()) {
    throw ConfigError("experiment list is empty");
  }
  for (const std::string& e : experiments) {
    if (std::find(kKnownExperiments.begin(), kKnownExperiments.end(), e) ==
        kKnownExperiments.end()) {
      throw ConfigError("unknown experiment \"" + e + "\"");
    }
  }
  resolve_model(*this, t);  // validates the name / circle constraint
  if (t.takes_anchor) {
    anchor_region(*this, spacetime::make_model(ModelKind::circle, size, spacing));
  }
  if (!(leakage_gap > 0.0) || leakage_time < 0.0) {
    throw ConfigError("leakage gap must be positive and time nonnegative");
  }
  const bool wants_leakage =
      std::find(experiments.begin(), experiments.end(), "leakage") != experiments.end();
  if (wants_leakage && std::string(t.kind) != "sharp") {
    throw ConfigError("leakage needs a sharp system, " + system + " is " + t.kind);
  }
}

std::vector<CatalogEntry> list_systems() {
  std::vector<CatalogEntry> out;
  for (const SystemTraits& t : kCatalog) {
    out.push_back({t.name, t.kind, t.parameters, t.provenance});
  }
  return out;
}

LocalizationSystem build_from_config(const ExperimentConfig& c) {
  c.validate();
  const SystemTraits& t = traits_for(c.system);
  if (t.fock_sizing) {
    return zoo::build_lattice_fock(c.size, 1.0, c.spacing);
  }
  const SpaceModel m = spacetime::make_model(resolve_model(c, t), c.size, c.spacing);
  if (c.system == "standard_zero") return zoo::build_standard(m, zoo::Dispersion::zero, c.mass);
  if (c.system == "standard_nonrelativistic")
    return zoo::build_standard(m, zoo::Dispersion::nonrelativistic, c.mass);
  if (c.system == "standard_relativistic")
    return zoo::build_standard(m, zoo::Dispersion::relativistic, c.mass);
  if (c.system == "momentum_hamiltonian")
    return zoo::build_standard(m, zoo::Dispersion::momentum, c.mass);
  if (c.system == "frozen") return zoo::build_frozen(m, c.mass);
  if (c.system == "pathological_only_d0")
    return zoo::build_pathological(m, c.mass, anchor_region(c, m),
                                   zoo::PathologyMode::only_d0);
  if (c.system == "pathological_all_but_d0")
    return zoo::build_pathological(m, c.mass, anchor_region(c, m),
                                   zoo::PathologyMode::all_but_d0);
  if (c.system == "tensor_counterexample")
    return zoo::build_tensor_counterexample(m, c.mass, anchor_region(c, m));
  if (c.system == "cylinder_threshold") return zoo::build_cylinder_threshold(m);
  if (c.system == "measure_effect") return zoo::build_measure_effect(m);
  if (c.system == "dirac_positive") return zoo::build_dirac_positive(m, c.mass);
  throw UnknownSystemError("unknown system \"" + c.system + "\"");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ordered_json j = parse_document(text, "config");
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "system") c.system = value.get<std::string>();
      else if (key == "size") c.size = value.get<int>();
      else if (key == "spacing") c.spacing = value.get<double>();
      else if (key == "mass") c.mass = value.get<double>();
      else if (key == "model") c.model = value.get<std::string>();
      else if (key == "d0_start") c.d0_start = value.get<int>();
      else if (key == "d0_width") c.d0_width = value.get<int>();
      else if (key == "seed") c.seed = value.get<unsigned long long>();
      else if (key == "experiments") c.experiments = value.get<std::vector<std::string>>();
      else if (key == "leakage_gap") c.leakage_gap = value.get<double>();
      else if (key == "leakage_time") c.leakage_time = value.get<double>();
      else if (key == "pass_tol") c.pass_tol = value.get<double>();
      else if (key == "fail_tol") c.fail_tol = value.get<double>();
      else if (key == "out") c.out_path = value.get<std::string>();
      else if (key == "format") c.format = value.get<std::string>();
      else throw ConfigError("config: unknown key \"" + key + "\"");
    } catch (const ordered_json::exception&) {
      throw ConfigError("config: key \"" + key + "\" has the wrong type");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string run_to_json(const ExperimentConfig& c) {
  c.validate();
  TolerancePolicy policy;
  policy.pass_tol = c.pass_tol;
  policy.fail_tol = c.fail_tol;
  policy.validate();

  const bool build = std::any_of(c.experiments.begin(), c.experiments.end(),
                                 [](const std::string& e) { return needs_system(e); });
  std::optional<LocalizationSystem> sys;
  if (build) sys = build_from_config(c);

  ordered_json report;
  report["schema"] = kReportSchema;
  report["config"] = config_to_json(c);
  report["results"] = ordered_json::array();
  for (const std::string& e : c.experiments) {
    if (e == "matrix") {
      report["results"].push_back(matrix_to_json(nogo::condition_matrix(*sys, policy)));
    } else if (e == "leakage") {
      report["results"].push_back(leakage_experiment(*sys, c));
    } else if (e == "busch") {
      report["results"].push_back(busch_experiment(*sys));
    } else if (e == "hegerfeldt") {
      report["results"].push_back(hegerfeldt_experiment(c.seed));
    } else if (e == "borchers") {
      report["results"].push_back(borchers_experiment(c.seed));
    } else if (e == "lemmas") {
      report["results"].push_back(lemmas_experiment(policy));
    }
  }
  return report.dump(2) + "\n";
}

void validate_report_schema(const std::string& report_json) {
  ordered_json j = parse_document(report_json, "report");
  if (!j.is_object() || !j.contains("schema") || !j.at("schema").is_string()) {
    throw ConfigError("report: missing schema tag");
  }
  const std::string schema = j.at("schema").get<std::string>();
  if (schema != kReportSchema) {
    throw SchemaError("report schema \"" + schema + "\" does not match \"" +
                      kReportSchema + "\"");
  }
  if (!j.contains("config") || !j.contains("results") || !j.at("results").is_array()) {
    throw ConfigError("report: missing config echo or results");
  }
}

std::string report_to_csv(const std::string& report_json) {
  validate_report_schema(report_json);
  ordered_json j = parse_document(report_json, "report");
  std::string out;
  bool first = true;
  for (const char* col : kCsvColumns) {
    if (!first) out += ",";
    first = false;
    out += col;
  }
  out += "\r\n";
  for (const auto& result : j.at("results")) {
    csv_rows_for(result, out);
  }
  return out;
}

bool reports_equal(const std::string& report_a, const std::string& report_b) {
  return parse_document(report_a, "report") == parse_document(report_b, "report");
}

std::string render_human(const std::string& report_json) {
  validate_report_schema(report_json);
  ordered_json j = parse_document(report_json, "report");
  std::ostringstream os;
  for (const auto& r : j.at("results")) {
    const std::string exp = r.at("experiment").get<std::string>();
    if (exp == "matrix") {
      render_matrix(r, os);
    } else if (exp == "leakage") {
      os << "leakage: " << r.at("initial").get<std::string>() << " -> "
         << r.at("probe").get<std::string>() << "\n";
      for (const auto& e : r.at("entries")) {
        os << "  t=" << e.at("time").get<double>() << "  gap="
           << e.at("gap").get<double>() << "  leaked="
           << sci(e.at("leaked_probability").get<double>()) << "\n";
      }
    } else if (exp == "busch") {
      os << "effect spectra (" << r.at("system").get<std::string>() << ")\n";
      for (const auto& e : r.at("entries")) {
        os << "  " << std::left << std::setw(16) << e.at("region").get<std::string>()
           << "spectrum [" << sci(e.at("min_eigenvalue").get<double>()) << ", 1 - "
           << sci(e.at("gap_to_one").get<double>()) << "]\n";
      }
    } else if (exp == "hegerfeldt") {
      os << "zero-set dichotomy: " << r.at("anomalous_count").get<int>()
         << " anomalous of " << r.at("instances").get<int>() << "\n";
    } else if (exp == "borchers") {
      os << "commutation probes: " << r.at("witness_count").get<int>()
         << " contrapositive witnesses of " << r.at("instances").get<int>() << "\n";
    } else if (exp == "lemmas") {
      os << "lemma suite: " << (r.at("all_ok").get<bool>() ? "all ok" : "FAILURES")
         << " (" << r.at("entries").size() << " instances)\n";
      for (const auto& e : r.at("entries")) {
        if (!e.at("ok").get<bool>()) {
          os << "  FAILED " << e.at("lemma").get<std::string>() << " on "
             << e.at("instance").get<std::string>() << "\n";
        }
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace runner
}  // namespace loclab
