#include "loclab/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace loclab {
namespace nogo {

using axioms::ConditionId;
using axioms::Outcome;
using opkernel::OpClass;
using spacetime::ModelKind;
using spacetime::SpaceModel;
using spacetime::Translation;
using zoo::SystemKind;

namespace {

constexpr double kZeroTol = 1e-8;        // |f| at or below this counts as a zero
constexpr double kSparseFraction = 0.05;  // zeros above this fraction are anomalous
constexpr double kOrthoTol = 1e-10;
constexpr double kCommuteTol = 1e-8;
constexpr double kProductTol = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Operator expi(const Operator& h, double t) {
  return opkernel::apply_spectral_function(h, [t](double w) {
    return Complex(std::cos(t * w), std::sin(t * w));
  });
}

double conjugation_distance(const Operator& u, const Matrix& x) {
  return opkernel::operator_norm(Matrix(u.mat * x * u.mat.adjoint() - x));
}

}  // namespace

const char* to_string(ConclusionKind k) {
  switch (k) {
    case ConclusionKind::trivial_dynamics: return "trivial_dynamics";
    case ConclusionKind::localization_vanishes: return "localization_vanishes";
    case ConclusionKind::effects_vanish: return "effects_vanish";
    case ConclusionKind::numbers_vanish: return "numbers_vanish";
  }
  return "trivial_dynamics";
}

const char* to_string(ZeroSetClass c) {
  switch (c) {
    case ZeroSetClass::identically_zero: return "identically_zero";
    case ZeroSetClass::zeros_sparse: return "zeros_sparse";
    case ZeroSetClass::anomalous: return "anomalous";
  }
  return "identically_zero";
}

const Verdict& ConditionMatrix::verdict_for(ConditionId c) const {
  for (const Verdict& v : verdicts) {
    if (v.condition == c) return v;
  }
  throw StructuralError(std::string("ConditionMatrix: no verdict for ") +
                        axioms::to_string(c));
}

ConditionMatrix condition_matrix(const LocalizationSystem& s, const TolerancePolicy& p) {
  p.validate();

  ConditionMatrix cm;
  cm.system_label = s.name + " n=" + std::to_string(s.model.sites);

  Verdict nav = axioms::check_nav(s);
  switch (s.kind) {
    case SystemKind::sharp:
      cm.conclusion_kind = nav.holds() ? ConclusionKind::localization_vanishes
                                       : ConclusionKind::trivial_dynamics;
      break;
    case SystemKind::unsharp:
      cm.conclusion_kind = ConclusionKind::effects_vanish;
      break;
    case SystemKind::number:
      cm.conclusion_kind = ConclusionKind::numbers_vanish;
      break;
  }

  const bool fold_time_only = cm.conclusion_kind == ConclusionKind::trivial_dynamics;
  cm.verdicts = axioms::check_all(s, p, fold_time_only);

  switch (cm.conclusion_kind) {
    case ConclusionKind::trivial_dynamics:
      cm.premises = {ConditionId::localizability, ConditionId::probability_conservation,
                     ConditionId::covariance, ConditionId::energy_bounded_below,
                     ConditionId::microcausality};
      break;
    case ConclusionKind::localization_vanishes:
      cm.premises = {ConditionId::localizability, ConditionId::covariance,
                     ConditionId::energy_bounded_below, ConditionId::microcausality,
                     ConditionId::no_absolute_velocity};
      break;
    case ConclusionKind::effects_vanish:
      cm.premises = {ConditionId::additivity, ConditionId::covariance,
                     ConditionId::energy_bounded_below, ConditionId::microcausality,
                     ConditionId::no_absolute_velocity};
      break;
    case ConclusionKind::numbers_vanish:
      cm.premises = {ConditionId::additivity, ConditionId::covariance,
                     ConditionId::energy_bounded_below, ConditionId::number_conservation,
                     ConditionId::microcausality, ConditionId::no_absolute_velocity};
      break;
  }

  // Both conclusion probes, independent of the bound kind.
  axioms::RegionCatalog cat = axioms::make_catalog(s.model);
  {
    double td = 0.0, vanish = 0.0;
    std::map<double, Operator> props;
    for (double t : p.plain_times) props.emplace(t, zoo::evolution(s, t));
    for (const Region& d : cat.singles) {
      Operator op = s.localize(d);
      vanish = std::max(vanish, opkernel::operator_norm(op));
      for (const auto& [t, u] : props) {
        td = std::max(td, conjugation_distance(u, op.mat));
      }
    }
    cm.trivial_dynamics_residual = td;
    cm.vanishing_residual = vanish;
  }

  cm.conclusion_residual = (cm.conclusion_kind == ConclusionKind::trivial_dynamics)
                               ? cm.trivial_dynamics_residual
                               : cm.vanishing_residual;
  cm.conclusion_holds = cm.conclusion_residual <= p.pass_tol;

  cm.premises_strictly_hold = true;
  cm.no_premise_fails = true;
  for (ConditionId c : cm.premises) {
    const Verdict& v = cm.verdict_for(c);
    if (v.outcome != Outcome::pass) cm.premises_strictly_hold = false;
    if (v.outcome == Outcome::fail) cm.no_premise_fails = false;
  }
  cm.consistent = !(cm.premises_strictly_hold && !cm.conclusion_holds);
  return cm;
}

LeakageReport superluminal_leakage(const LocalizationSystem& s, const Region& d,
                                   const Region& probe, double t) {
  if (s.kind != SystemKind::sharp) {
    throw StructuralError("superluminal_leakage: requires a sharp system");
  }
  if (d.empty() || probe.empty()) {
    throw StructuralError("superluminal_leakage: regions must be nonempty");
  }
  if (t < 0.0) {
    throw StructuralError("superluminal_leakage: time must be nonnegative");
  }
  const SpaceModel& m = s.model;
  if (!spacetime::is_spacelike_clear(m, d, probe, t)) {
    throw StructuralError(
        "superluminal_leakage: configuration is not spacelike-clear (a light signal "
        "could reach the probe; the measurement would be causally allowed)");
  }

  const int n = m.sites;
  auto image_dist = [n](int a, int b) {
    const int raw = std::abs(a - b);
    return std::min(raw, n - raw);
  };
  // True center: the member site minimizing the largest in-region distance
  // (robust for wrapping intervals).
  int center = d.sites.front();
  int best = n;
  for (int c : d.sites) {
    int worst = 0;
    for (int x : d.sites) worst = std::max(worst, image_dist(c, x));
    if (worst < best) {
      best = worst;
      center = c;
    }
  }
  const double sigma = std::max(1.0, d.size() / 4.0);
  CVector amp = CVector::Zero(s.unitaries.hamiltonian.dim());
  if (amp.size() != n) {
    throw StructuralError("superluminal_leakage: needs a position-basis system");
  }
  for (int x : d.sites) {
    const double delta = image_dist(x, center);
    amp[x] = std::exp(-delta * delta / (2.0 * sigma * sigma));
  }
  StateVector psi = StateVector::normalized(amp);

  StateVector psi_t = (t == 0.0) ? psi : zoo::evolve(s, psi, t);
  Operator e_probe = s.localize(probe);
  const double leaked = (e_probe.mat * psi_t.v).squaredNorm();

  LeakageReport r;
  r.initial = d;
  r.probe = probe;
  r.gap = spacetime::region_distance(m, d, probe);
  r.time = t;
  r.leaked_probability = leaked;
  r.spacelike_clear = true;
  return r;
}

BuschReport busch_spectrum(const LocalizationSystem& s, const Region& d) {
  if (d.empty() || d.size() >= s.model.sites) {
    throw StructuralError("busch_spectrum: needs a nonempty proper region");
  }
  Operator a = s.localize(d);
  const auto sd = opkernel::eig_hermitian(a);
  BuschReport r;
  r.region = d;
  r.min_eigenvalue = sd.eigenvalues[0];
  r.max_eigenvalue = sd.eigenvalues[sd.eigenvalues.size() - 1];
  r.gap_to_one = 1.0 - r.max_eigenvalue;
  return r;
}

ZeroSetReport hegerfeldt_zero_set(const Operator& h, const Operator& a,
                                  const StateVector& psi,
                                  const std::vector<double>& grid) {
  if (a.hint != OpClass::effect && a.hint != OpClass::projection) {
    throw StructuralError("hegerfeldt_zero_set: observable must be an effect");
  }
  if (h.dim() != a.dim() || psi.dim() != h.dim()) {
    throw StructuralError("hegerfeldt_zero_set: dimension mismatch");
  }
  if (grid.empty()) {
    throw StructuralError("hegerfeldt_zero_set: empty time grid");
  }
  const auto sd = opkernel::eig_hermitian(h);
  const CVector phi = sd.eigenvectors.adjoint() * psi.v;

  ZeroSetReport r;
  r.times = grid;
  r.values.reserve(grid.size());
  int zeros = 0;
  for (double t : grid) {
    CVector rotated = phi;
    for (int i = 0; i < rotated.size(); ++i) {
      const double w = t * sd.eigenvalues[i];
      rotated[i] *= Complex(std::cos(w), std::sin(w));
    }
    const CVector in_state = sd.eigenvectors * rotated;
    const double f = std::real(Complex(in_state.adjoint() * (a.mat * in_state)));
    r.values.push_back(f);
    r.max_abs = std::max(r.max_abs, std::abs(f));
    if (std::abs(f) <= kZeroTol) ++zeros;
  }
  r.zero_fraction = static_cast<double>(zeros) / grid.size();
  if (r.max_abs <= kZeroTol) {
    r.classification = ZeroSetClass::identically_zero;
  } else if (r.zero_fraction < kSparseFraction) {
    r.classification = ZeroSetClass::zeros_sparse;
  } else {
    r.classification = ZeroSetClass::anomalous;
  }
  r.note = "generator minimum " + fmt(sd.eigenvalues[0]) +
           " (bounded below in finite dimension)";
  return r;
}

BorchersReport borchers_probe(const Operator& e, const Operator& f, const Operator& h,
                              double interval_end) {
  if (e.hint != OpClass::projection || f.hint != OpClass::projection) {
    throw StructuralError("borchers_probe: e and f must be projections");
  }
  if (e.dim() != f.dim() || e.dim() != h.dim()) {
    throw StructuralError("borchers_probe: dimension mismatch");
  }
  if (!(interval_end > 0.0)) {
    throw StructuralError("borchers_probe: interval must have positive length");
  }
  const double ortho = opkernel::operator_norm(Matrix(e.mat * f.mat));
  if (ortho > kOrthoTol) {
    throw StructuralError("borchers_probe: requires e f = 0, got |e f| = " + fmt(ortho));
  }

  BorchersReport r;
  const int interval_points = 25;
  for (int i = 0; i <= interval_points; ++i) {
    const double t = interval_end * i / interval_points;
    Operator u = expi(h, t);
    Matrix ft = u.mat * f.mat * u.mat.adjoint();
    const double c = opkernel::operator_norm(Matrix(e.mat * ft - ft * e.mat));
    if (c > r.interval_commutator_max) {
      r.interval_commutator_max = c;
      r.commutator_witness_time = t;
    }
  }
  r.commutes_on_interval = r.interval_commutator_max <= kCommuteTol;

  const int wide_points = 64;
  const double wide_end = 8.0 * interval_end;
  for (int i = 0; i <= wide_points; ++i) {
    const double t = wide_end * i / wide_points;
    Operator u = expi(h, t);
    const double pv = opkernel::operator_norm(Matrix(e.mat * u.mat * f.mat * u.mat.adjoint()));
    if (pv > r.product_max) {
      r.product_max = pv;
      r.product_witness_time = t;
    }
  }

  r.consistent = !(r.commutes_on_interval && r.product_max > kProductTol);
  if (r.commutes_on_interval) {
    r.note = "commutators vanish on the interval; product stays at " + fmt(r.product_max);
  } else {
    r.note = "contrapositive: product " + fmt(r.product_max) + " at t=" +
             fmt(r.product_witness_time) + " forces commutator " +
             fmt(r.interval_commutator_max) + " at t=" + fmt(r.commutator_witness_time);
  }
  return r;
}

namespace {

void invariance_vanishing_entries(const TolerancePolicy& p, LemmaSuiteReport& report) {
  const SpaceModel iso = spacetime::make_model(ModelKind::line_isotropic, 32, 1.0);
  const Region d0 = spacetime::make_interval(iso, 0, 4);
  std::vector<LocalizationSystem> systems;
  systems.push_back(zoo::build_standard(iso, zoo::Dispersion::zero));
  systems.push_back(zoo::build_standard(iso, zoo::Dispersion::nonrelativistic));
  systems.push_back(zoo::build_pathological(iso, 1.0, d0, zoo::PathologyMode::only_d0));

  const int n = iso.sites;
  std::vector<Translation> timelike = {
      {1.0, 0},
      {n / 8 * iso.spacing / iso.light_speed + 1.0, n / 8},
      {n / 4 * iso.spacing / iso.light_speed + 1.0, -n / 4},
  };

  for (const LocalizationSystem& s : systems) {
    // Premise side conditions: localizability, time covariance, NAV.
    std::vector<Verdict> statics = axioms::check_statics(s, p);
    std::vector<Verdict> cov = axioms::check_covariance(s, p);
    Verdict nav = axioms::check_nav(s);
    const bool side_ok = statics[0].holds() && cov[1].holds() && nav.holds();

    axioms::RegionCatalog cat = axioms::make_catalog(s.model);
    for (const Region& d : cat.singles) {
      LemmaEntry entry;
      entry.lemma = "invariance-vanishing";
      entry.instance = s.name + " on " + d.to_string();
      Operator op = s.localize(d);
      double premise = 0.0;
      for (const Translation& a : timelike) {
        Operator u = expi(s.unitaries.hamiltonian_of(a), 1.0);
        premise = std::max(premise, conjugation_distance(u, op.mat));
      }
      entry.premise_residual = premise;
      if (side_ok && premise <= kCommuteTol) {
        entry.status = LemmaEntry::Status::proved;
        entry.conclusion_residual = opkernel::operator_norm(op);
        entry.ok = entry.conclusion_residual <= kProductTol;
      } else {
        entry.status = LemmaEntry::Status::vacuous;
        entry.ok = true;
      }
      report.entries.push_back(std::move(entry));
    }
  }
}

void covering_join_entries(const TolerancePolicy& p, LemmaSuiteReport& report) {
  const SpaceModel line =
      spacetime::make_model(ModelKind::line_distinguished_frame, 32, 1.0);
  const Region d0 = spacetime::make_interval(line, 0, 4);
  std::vector<LocalizationSystem> systems;
  systems.push_back(zoo::build_standard(line, zoo::Dispersion::nonrelativistic));
  systems.push_back(zoo::build_frozen(line));
  systems.push_back(zoo::build_pathological(line, 1.0, d0, zoo::PathologyMode::all_but_d0));

  for (const LocalizationSystem& s : systems) {
    LemmaEntry entry;
    entry.lemma = "covering-join-invariance";
    entry.instance = s.name;
    std::vector<Verdict> cons = axioms::check_conservation(s, p);
    entry.premise_residual = cons[0].residual;
    if (!cons[0].holds()) {
      entry.status = LemmaEntry::Status::vacuous;
      entry.ok = true;
      report.entries.push_back(std::move(entry));
      continue;
    }
    axioms::RegionCatalog cat = axioms::make_catalog(s.model);
    double worst = 0.0;
    for (const auto& covering : cat.coverings) {
      std::vector<Operator> ops;
      ops.reserve(covering.size());
      for (const Region& d : covering) ops.push_back(s.localize(d));
      Operator join = opkernel::lattice_join(ops);
      for (double t : p.plain_times) {
        Operator u = zoo::evolution(s, t);
        worst = std::max(worst, conjugation_distance(u, join.mat));
      }
    }
    entry.status = LemmaEntry::Status::proved;
    entry.conclusion_residual = worst;
    entry.ok = worst <= kCommuteTol;
    report.entries.push_back(std::move(entry));
  }
}

void block_invariance_entries(LemmaSuiteReport& report) {
  opkernel::Rng rng(7);
  const std::vector<double> premise_grid = {0.3, 0.9};
  const std::vector<double> conclusion_grid = {0.3, 0.9, 2.2};

  for (int instance = 0; instance < 20; ++instance) {
    std::vector<int> dims(3);
    int total = 0;
    for (int& d : dims) {
      d = rng.uniform_int(2, 4);
      total += d;
    }
    Matrix h = Matrix::Zero(total, total);
    std::vector<Matrix> projections;
    int offset = 0;
    for (int d : dims) {
      h.block(offset, offset, d, d) = rng.random_hermitian(d);
      Matrix e = Matrix::Zero(total, total);
      e.block(offset, offset, d, d) = Matrix::Identity(d, d);
      projections.push_back(std::move(e));
      offset += d;
    }
    Operator hop = Operator::make(std::move(h), OpClass::hermitian);

    LemmaEntry entry;
    entry.lemma = "block-invariant-evolution";
    entry.instance = "blocks " + std::to_string(dims[0]) + "+" +
                     std::to_string(dims[1]) + "+" + std::to_string(dims[2]) +
                     " seed-instance " + std::to_string(instance);
    double premise = 0.0;
    for (double t : premise_grid) {
      Operator u = expi(hop, t);
      for (size_t k = 1; k < projections.size(); ++k) {
        Matrix conj = u.mat * projections[k] * u.mat.adjoint();
        premise = std::max(premise, opkernel::operator_norm(
                                        Matrix(projections[0] * conj - conj * projections[0])));
      }
    }
    entry.premise_residual = premise;
    double conclusion = 0.0;
    for (double t : conclusion_grid) {
      Operator u = expi(hop, t);
      conclusion = std::max(conclusion, conjugation_distance(u, projections[0]));
    }
    entry.conclusion_residual = conclusion;
    entry.status = LemmaEntry::Status::proved;
    entry.ok = premise <= kCommuteTol && conclusion <= 1e-10;
    report.entries.push_back(std::move(entry));
  }
}

}  // namespace

LemmaSuiteReport appendix_lemma_suite(const TolerancePolicy& p) {
  p.validate();
  LemmaSuiteReport report;
  invariance_vanishing_entries(p, report);
  covering_join_entries(p, report);
  block_invariance_entries(report);
  report.all_ok = std::all_of(report.entries.begin(), report.entries.end(),
                              [](const LemmaEntry& e) { return e.ok; });
  return report;
}

}  // namespace nogo
}  // namespace loclab
