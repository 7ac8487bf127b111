#include "loclab/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace loclab {
namespace axioms {

using opkernel::OpClass;
using spacetime::CausalClass;
using spacetime::ModelKind;
using spacetime::Translation;
using zoo::SystemKind;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_eigenvalue(const Matrix& hermitian_like) {
  Matrix h = (hermitian_like + hermitian_like.adjoint()) / 2.0;
  Operator op = Operator::make(std::move(h), OpClass::hermitian);
  const auto sd = opkernel::eig_hermitian(op);
  return sd.eigenvalues[sd.eigenvalues.size() - 1];
}

double min_eigenvalue(const Matrix& hermitian_like) {
  Matrix h = (hermitian_like + hermitian_like.adjoint()) / 2.0;
  Operator op = Operator::make(std::move(h), OpClass::hermitian);
  return opkernel::eig_hermitian(op).eigenvalues[0];
}

// Evolution operators are reused across pairs; one entry per probe time.
struct Propagator {
  const LocalizationSystem& s;
  std::map<double, Operator> cache;

  explicit Propagator(const LocalizationSystem& sys) : s(sys) {}

  const Operator& at(double t) {
    auto it = cache.find(t);
    if (it == cache.end()) {
      it = cache.emplace(t, zoo::evolution(s, t)).first;
    }
    return it->second;
  }
};

// Same contract as zoo::localize_op, sharing this checker's propagator cache.
Operator localize_at(const LocalizationSystem& s, Propagator& prop, const Region& d,
                     double t) {
  Operator base = s.localize(d);
  if (s.frozen_assignment || t == 0.0) {
    return base;
  }
  const Operator& u = prop.at(t);
  Matrix conj = u.mat * base.mat * u.mat.adjoint();
  if (base.hint == OpClass::projection || base.hint == OpClass::effect ||
      base.hint == OpClass::hermitian) {
    conj = (conj + conj.adjoint()).eval() / 2.0;
  }
  return Operator::make(std::move(conj), base.hint);
}

struct Tracker {
  double residual = 0.0;
  int samples = 0;
  std::string witness;

  void feed(double r, const std::string& description) {
    ++samples;
    if (r > residual) {
      residual = r;
      witness = description + ": " + fmt(r);
    }
  }
};

Matrix power(Matrix base, int e) {
  Matrix acc = Matrix::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) acc = (acc * base).eval();
    base = (base * base).eval();
    e >>= 1;
  }
  return acc;
}

// Probe times inside (0, bound), commensurate systems rounded onto their
// exact-shift grid.
std::vector<double> probe_times(const LocalizationSystem& s, const TolerancePolicy& p,
                                double bound) {
  std::vector<double> out;
  for (double f : p.time_fractions) {
    double t = f * bound;
    if (s.commensurate_dt) {
      const double dt = *s.commensurate_dt;
      t = std::round(t / dt) * dt;
      if (t <= 0.0) t = dt;
    }
    if (t > 0.0 && t < bound && !std::count(out.begin(), out.end(), t)) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

const char* to_string(ConditionId c) {
  switch (c) {
    case ConditionId::localizability: return "localizability";
    case ConditionId::additivity: return "additivity";
    case ConditionId::covariance: return "covariance";
    case ConditionId::energy_bounded_below: return "energy_bounded_below";
    case ConditionId::microcausality: return "microcausality";
    case ConditionId::strong_causality: return "strong_causality";
    case ConditionId::niws: return "niws";
    case ConditionId::monotonicity: return "monotonicity";
    case ConditionId::probability_conservation: return "probability_conservation";
    case ConditionId::number_conservation: return "number_conservation";
    case ConditionId::no_absolute_velocity: return "no_absolute_velocity";
  }
  return "localizability";
}

std::optional<ConditionId> condition_from_string(const std::string& s) {
  for (ConditionId c : all_conditions()) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

const std::vector<ConditionId>& all_conditions() {
  static const std::vector<ConditionId> order = {
      ConditionId::localizability,
      ConditionId::additivity,
      ConditionId::covariance,
      ConditionId::energy_bounded_below,
      ConditionId::microcausality,
      ConditionId::strong_causality,
      ConditionId::niws,
      ConditionId::monotonicity,
      ConditionId::probability_conservation,
      ConditionId::number_conservation,
      ConditionId::no_absolute_velocity,
  };
  return order;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::not_applicable: return "not_applicable";
  }
  return "pass";
}

void TolerancePolicy::validate() const {
  if (!(pass_tol > 0.0) || !(fail_tol > 0.0) || !(pass_tol < fail_tol)) {
    throw StructuralError("TolerancePolicy: requires 0 < pass_tol < fail_tol");
  }
  if (time_fractions.empty() || plain_times.empty() || refinement.empty()) {
    throw StructuralError("TolerancePolicy: sampling grids must be nonempty");
  }
}

Verdict make_verdict(ConditionId c, double residual, const TolerancePolicy& p,
                     int samples, std::string witness, std::string detail) {
  Verdict v;
  v.condition = c;
  v.residual = residual;
  v.outcome = (residual <= p.pass_tol) ? Outcome::pass : Outcome::fail;
  v.samples_examined = samples;
  if (v.outcome == Outcome::fail) {
    v.witness = std::move(witness);
  }
  v.detail = std::move(detail);
  return v;
}

Verdict not_applicable_verdict(ConditionId c, std::string detail) {
  Verdict v;
  v.condition = c;
  v.outcome = Outcome::not_applicable;
  v.detail = std::move(detail);
  return v;
}

RegionCatalog make_catalog(const SpaceModel& m) {
  const int n = m.sites;
  const int w8 = std::max(1, n / 8);
  const int w4 = std::max(2, n / 4);
  auto iv = [&m](int s, int w) { return spacetime::make_interval(m, s, w); };

  RegionCatalog cat;
  cat.singles = {iv(0, w8), iv(n / 4, w8), iv(0, w4), iv(n / 2, w8)};

  cat.disjoint_pairs = {
      {iv(0, w8), iv(w8, w8), "adjacent"},
      {iv(0, w8), iv(2 * w8, w8), "gap-eighth"},
      {iv(0, w8), iv(w8 + w4, w8), "gap-quarter"},
      {iv(0, w4), iv(w4 + w8, w4), "wide-gap-eighth"},
      {iv(0, w8), iv(n / 2, w8), "antipodal"},
  };
  for (const RegionPair& pr : cat.disjoint_pairs) {
    if (spacetime::region_distance(m, pr.a, pr.b) > 0.0) {
      cat.causal_pairs.push_back(pr);
    }
  }

  cat.chains.push_back({spacetime::nested_chain(m, iv(0, w8)), iv(0, w8), false,
                        "chain-at-origin"});
  cat.chains.push_back({spacetime::nested_chain(m, iv(n / 2, w8)), iv(n / 2, w8), false,
                        "chain-antipodal"});

  cat.sleeves.push_back({{spacetime::expand_region(m, iv(0, w8), std::max(1, n / 16))},
                         iv(0, w8),
                         false,
                         "sleeve-sixteenth"});
  cat.sleeves.push_back({{spacetime::expand_region(m, iv(n / 2, w8), std::max(1, n / 8))},
                         iv(n / 2, w8),
                         false,
                         "sleeve-eighth"});

  // Members hold normalized measure >= 2/3 while the declared limit sits
  // below it; only meaningful for measure-class assignments.
  {
    const int wc = (2 * n + 2) / 3;
    const int wmid = wc + std::max(1, (n - wc) / 2);
    NestedInstance probe;
    probe.family = {iv(0, n), iv(0, std::min(n, wmid)), iv(0, wc)};
    probe.target = iv(0, n / 2);
    probe.declared_limit = true;
    probe.label = "threshold-sleeve";
    cat.threshold_probes.push_back(std::move(probe));
  }

  cat.coverings = spacetime::make_families(m, spacetime::FamilyMode::disjoint_covering);
  cat.coverings.push_back(spacetime::covering_with(m, iv(0, (2 * n + 2) / 3)));
  return cat;
}

std::vector<Verdict> check_statics(const LocalizationSystem& s, const TolerancePolicy& p) {
  p.validate();
  RegionCatalog cat = make_catalog(s.model);
  if (cat.disjoint_pairs.empty()) {
    throw StructuralError("check_statics: sampling plan is empty");
  }

  std::vector<Verdict> out;

  // Localizability: orthogonality of disjoint assignments (sharp), or the
  // effect-sum bound A + A' <= I (unsharp). Number assignments carry no
  // orthogonality requirement.
  if (s.kind == SystemKind::number) {
    out.push_back(not_applicable_verdict(ConditionId::localizability,
                                         "occupation sums carry no orthogonality bound"));
  } else {
    Tracker tr;
    for (const RegionPair& pr : cat.disjoint_pairs) {
      Operator a = s.localize(pr.a);
      Operator b = s.localize(pr.b);
      double r = 0.0;
      if (s.kind == SystemKind::sharp) {
        r = opkernel::operator_norm(Matrix(a.mat * b.mat));
      } else {
        r = std::max(0.0, max_eigenvalue(a.mat + b.mat -
                                         Matrix::Identity(a.dim(), a.dim())));
      }
      tr.feed(r, "pair " + pr.label);
    }
    const char* flavor = (s.kind == SystemKind::sharp) ? "|E E'| over disjoint pairs"
                                                       : "max eig(A + A' - I)";
    out.push_back(make_verdict(ConditionId::localizability, tr.residual, p, tr.samples,
                               tr.witness, flavor));
  }

  // Additivity on disjoint unions, every kind.
  {
    Tracker tr;
    for (const RegionPair& pr : cat.disjoint_pairs) {
      Operator a = s.localize(pr.a);
      Operator b = s.localize(pr.b);
      Operator u = s.localize(spacetime::region_union(pr.a, pr.b));
      tr.feed(opkernel::operator_norm(Matrix(a.mat + b.mat - u.mat)), "pair " + pr.label);
    }
    out.push_back(make_verdict(ConditionId::additivity, tr.residual, p, tr.samples,
                               tr.witness, "|L(a) + L(b) - L(a u b)|"));
  }

  // Monotonicity: sharp systems compare the projection meet of each chain
  // against the target; other kinds check the operator ordering along the
  // chain. Declared-limit probes run only on measure-class assignments.
  {
    Tracker tr;
    std::vector<const NestedInstance*> instances;
    for (const NestedInstance& c : cat.chains) instances.push_back(&c);
    if (s.measure_class_assignment) {
      for (const NestedInstance& c : cat.threshold_probes) instances.push_back(&c);
    }
    for (const NestedInstance* inst : instances) {
      if (s.kind == SystemKind::sharp) {
        std::vector<Operator> members;
        members.reserve(inst->family.size());
        for (const Region& d : inst->family) members.push_back(s.localize(d));
        Operator meet = opkernel::lattice_meet(members);
        Operator target = s.localize(inst->target);
        tr.feed(opkernel::operator_norm(Matrix(meet.mat - target.mat)),
                inst->label + " (meet vs target)");
      } else {
        Operator inner = s.localize(inst->target);
        for (const Region& d : inst->family) {
          Operator outer = s.localize(d);
          const double r = std::max(0.0, -min_eigenvalue(outer.mat - inner.mat));
          tr.feed(r, inst->label + " (ordering)");
        }
      }
    }
    out.push_back(make_verdict(ConditionId::monotonicity, tr.residual, p, tr.samples,
                               tr.witness,
                               s.kind == SystemKind::sharp ? "projection meet vs target"
                                                           : "chain ordering"));
  }
  return out;
}

std::vector<Verdict> check_covariance(const LocalizationSystem& s,
                                      const TolerancePolicy& p) {
  p.validate();
  RegionCatalog cat = make_catalog(s.model);
  const SpaceModel& m = s.model;

  Verdict spatial;
  {
    Tracker tr;
    const std::vector<int> shifts = {1, std::max(1, m.sites / 8)};
    for (int k : shifts) {
      Matrix sk = power(s.unitaries.shift.mat, k);
      for (const Region& d : cat.singles) {
        Operator lhs_base = s.localize(d);
        Matrix lhs = sk * lhs_base.mat * sk.adjoint();
        Operator rhs = s.localize(spacetime::shift_region(m, d, k));
        tr.feed(opkernel::operator_norm(Matrix(lhs - rhs.mat)),
                "shift " + std::to_string(k) + " on " + d.to_string());
      }
    }
    spatial = make_verdict(ConditionId::covariance, tr.residual, p, tr.samples,
                           tr.witness, "spatial-shift");
  }

  Verdict time;
  {
    Tracker tr;
    Propagator prop(s);
    for (double t : p.plain_times) {
      const Operator& u = prop.at(t);
      for (const Region& d : cat.singles) {
        Operator base = s.localize(d);
        Matrix lhs = u.mat * base.mat * u.mat.adjoint();
        if (base.hint == OpClass::projection || base.hint == OpClass::effect ||
            base.hint == OpClass::hermitian) {
          lhs = (lhs + lhs.adjoint()).eval() / 2.0;
        }
        Operator rhs = zoo::localize_op(s, d, t);
        tr.feed(opkernel::operator_norm(Matrix(lhs - rhs.mat)),
                "t=" + fmt(t) + " on " + d.to_string());
      }
    }
    time = make_verdict(ConditionId::covariance, tr.residual, p, tr.samples, tr.witness,
                        "time-translation");
  }
  return {spatial, time};
}

Verdict check_energy(const LocalizationSystem& s, const TolerancePolicy& p,
                     const std::vector<int>& refinement) {
  p.validate();
  std::vector<int> ladder = refinement;
  if (ladder.empty()) {
    ladder = s.refinement_sizes.empty() ? p.refinement : s.refinement_sizes;
  }

  const bool tilted = (s.model.kind == ModelKind::line_isotropic) &&
                      s.unitaries.momentum.has_value();
  const double length = s.model.length();
  const std::vector<double> tilts = {0.0, length / 8.0, length / 4.0};

  std::vector<double> track;
  std::string worst;
  int samples = 0;
  std::ostringstream detail;
  detail << (tilted ? "tilted-generator scan" : "single-generator scan") << "; minima:";

  for (int size : ladder) {
    LocalizationSystem level = s.refine ? s.refine(size) : s;
    double level_min = level.unitaries.h_spec.eigenvalues[0];
    std::string level_worst = "size " + std::to_string(size) + " untilted";
    ++samples;
    if (tilted) {
      const double a = level.model.spacing;
      for (double sigma : tilts) {
        if (sigma == 0.0) continue;
        Translation b;
        b.space = static_cast<int>(std::lround(sigma / a));
        b.time = sigma / level.model.light_speed + 1.0;
        if (b.space == 0) continue;
        Operator hb = level.unitaries.hamiltonian_of(b);
        const double mn = opkernel::eig_hermitian(hb).eigenvalues[0];
        ++samples;
        if (mn < level_min) {
          level_min = mn;
          level_worst = "size " + std::to_string(size) + " tilt s=" +
                        std::to_string(b.space) + " t=" + fmt(b.time);
        }
      }
    }
    track.push_back(level_min);
    detail << " " << fmt(level_min);
    worst = level_worst + " min " + fmt(level_min);
  }

  bool diverges = track.back() < p.divergence_floor;
  for (size_t i = 0; i + 1 < track.size() && diverges; ++i) {
    if (!(track[i] < 0.0) || !(track[i + 1] <= p.divergence_ratio * track[i])) {
      diverges = false;
    }
  }
  const double residual = diverges ? -track.back() : 0.0;
  return make_verdict(ConditionId::energy_bounded_below, residual, p, samples, worst,
                      detail.str());
}

std::vector<Verdict> check_causality(const LocalizationSystem& s,
                                     const TolerancePolicy& p) {
  p.validate();
  RegionCatalog cat = make_catalog(s.model);
  const SpaceModel& m = s.model;
  Propagator prop(s);

  Tracker micro, strong, niws;
  int clear_samples = 0;

  for (const RegionPair& pr : cat.causal_pairs) {
    const double dist = spacetime::region_distance(m, pr.a, pr.b);
    const double bound = dist / m.light_speed;
    Operator op_a = s.localize(pr.a);
    for (double t : probe_times(s, p, bound)) {
      if (!spacetime::is_spacelike_clear(m, pr.a, pr.b, t)) continue;
      ++clear_samples;
      Operator op_bt = localize_at(s, prop, pr.b, t);
      micro.feed(opkernel::commutator_norm(op_a, op_bt),
                 "pair " + pr.label + " t=" + fmt(t));
      if (s.kind == SystemKind::sharp) {
        strong.feed(opkernel::operator_norm(Matrix(op_a.mat * op_bt.mat)),
                    "pair " + pr.label + " t=" + fmt(t));
      }
    }
  }
  if (clear_samples == 0) {
    throw StructuralError("check_causality: no spacelike-clear samples available");
  }

  if (s.kind == SystemKind::sharp) {
    for (const NestedInstance& sl : cat.sleeves) {
      const Region& outer = sl.family.front();
      const Region& inner = sl.target;
      const double gap =
          spacetime::region_distance(m, inner, spacetime::region_complement(m, outer));
      if (!(gap > 0.0) || !std::isfinite(gap)) continue;
      Operator op_in = s.localize(inner);
      const Matrix id = Matrix::Identity(op_in.dim(), op_in.dim());
      for (double t : probe_times(s, p, gap / m.light_speed)) {
        Operator op_out_t = localize_at(s, prop, outer, t);
        niws.feed(opkernel::operator_norm(Matrix((id - op_out_t.mat) * op_in.mat)),
                  sl.label + " t=" + fmt(t));
      }
    }
  }

  std::vector<Verdict> out;
  out.push_back(make_verdict(ConditionId::microcausality, micro.residual, p,
                             micro.samples, micro.witness,
                             "commutators at spacelike-clear pairs"));
  if (s.kind == SystemKind::sharp) {
    out.push_back(make_verdict(ConditionId::strong_causality, strong.residual, p,
                               strong.samples, strong.witness,
                               "products at spacelike-clear pairs"));
    out.push_back(make_verdict(ConditionId::niws, niws.residual, p, niws.samples,
                               niws.witness, "|(I - E_outer(t)) E_inner|"));
  } else {
    out.push_back(not_applicable_verdict(ConditionId::strong_causality,
                                         "stated for projection assignments"));
    out.push_back(not_applicable_verdict(ConditionId::niws,
                                         "stated for projection assignments"));
  }
  return out;
}

std::vector<Verdict> check_conservation(const LocalizationSystem& s,
                                        const TolerancePolicy& p) {
  p.validate();
  RegionCatalog cat = make_catalog(s.model);
  Propagator prop(s);

  Verdict prob = not_applicable_verdict(ConditionId::probability_conservation,
                                        "assignments are not projections");
  Verdict numb = not_applicable_verdict(ConditionId::number_conservation,
                                        "no occupation structure");

  if (s.kind == SystemKind::sharp) {
    Tracker tr;
    auto join_at = [&](const std::vector<Region>& covering, double t) {
      std::vector<Operator> ops;
      ops.reserve(covering.size());
      for (const Region& d : covering) ops.push_back(localize_at(s, prop, d, t));
      return opkernel::lattice_join(ops);
    };
    std::vector<Operator> base;
    base.reserve(cat.coverings.size());
    for (const auto& cov : cat.coverings) base.push_back(join_at(cov, 0.0));
    for (size_t i = 1; i < base.size(); ++i) {
      tr.feed(opkernel::operator_norm(Matrix(base[i].mat - base[0].mat)),
              "coverings " + std::to_string(i) + " vs 0 at t=0");
    }
    for (size_t i = 0; i < cat.coverings.size(); ++i) {
      for (double t : p.plain_times) {
        Operator jt = join_at(cat.coverings[i], t);
        tr.feed(opkernel::operator_norm(Matrix(jt.mat - base[i].mat)),
                "covering " + std::to_string(i) + " t=" + fmt(t) + " vs t=0");
      }
    }
    prob = make_verdict(ConditionId::probability_conservation, tr.residual, p,
                        tr.samples, tr.witness, "covering joins across time");
  }

  if (s.kind == SystemKind::number) {
    Tracker tr;
    auto total_of = [&](const std::vector<Region>& covering) {
      Matrix sum = Matrix::Zero(s.unitaries.hamiltonian.dim(),
                                s.unitaries.hamiltonian.dim());
      for (const Region& d : covering) sum += s.localize(d).mat;
      return sum;
    };
    Matrix total = total_of(cat.coverings[0]);
    for (size_t i = 1; i < cat.coverings.size(); ++i) {
      tr.feed(opkernel::operator_norm(Matrix(total_of(cat.coverings[i]) - total)),
              "partition sums " + std::to_string(i) + " vs 0");
    }
    for (double t : p.plain_times) {
      const Operator& u = prop.at(t);
      tr.feed(opkernel::operator_norm(Matrix(u.mat * total * u.mat.adjoint() - total)),
              "total under evolution t=" + fmt(t));
    }
    numb = make_verdict(ConditionId::number_conservation, tr.residual, p, tr.samples,
                        tr.witness, "partition totals and their evolution");
  }
  return {prob, numb};
}

Verdict check_nav(const LocalizationSystem& s) {
  const SpaceModel& m = s.model;
  if (m.kind == ModelKind::circle) {
    return not_applicable_verdict(ConditionId::no_absolute_velocity,
                                  "closed spatial sections");
  }
  const int n = m.sites;
  std::vector<Translation> samples;
  samples.push_back({0.0, std::max(1, n / 8)});
  samples.push_back({0.0, -std::max(1, n / 4)});
  samples.push_back({0.2 * std::max(1, n / 8) * m.spacing / m.light_speed,
                     std::max(1, n / 8)});

  Tracker tr;
  for (const Translation& a : samples) {
    if (spacetime::classify_translation(m, a) != CausalClass::spacelike) continue;
    spacetime::NavDecomposition nd = spacetime::nav_decompose(m, a);
    const std::string label =
        "a=(t=" + fmt(a.time) + ", s=" + std::to_string(a.space) + ")";
    if (nd.status != spacetime::NavDecomposition::Status::decomposed) {
      tr.feed(1.0, label + " admits no timelike pair");
      continue;
    }
    double r = std::abs((nd.b.time - nd.c.time) - a.time);
    if (nd.b.space - nd.c.space != a.space ||
        spacetime::classify_translation(m, nd.b) != CausalClass::timelike ||
        spacetime::classify_translation(m, nd.c) != CausalClass::timelike) {
      r = 1.0;
    }
    tr.feed(r, label);
  }
  TolerancePolicy p;
  return make_verdict(ConditionId::no_absolute_velocity, tr.residual, p, tr.samples,
                      tr.witness, "spacelike = timelike - timelike");
}

std::vector<Verdict> check_all(const LocalizationSystem& s, const TolerancePolicy& p,
                               bool fold_covariance_time_only) {
  std::vector<Verdict> statics = check_statics(s, p);
  std::vector<Verdict> cov = check_covariance(s, p);
  Verdict energy = check_energy(s, p);
  std::vector<Verdict> causal = check_causality(s, p);
  std::vector<Verdict> cons = check_conservation(s, p);
  Verdict nav = check_nav(s);

  Verdict folded;
  if (fold_covariance_time_only) {
    folded = cov[1];
  } else {
    const Verdict& worse = (cov[0].residual >= cov[1].residual) ? cov[0] : cov[1];
    folded = worse;
    folded.detail = "spatial-shift + time-translation";
    folded.samples_examined = cov[0].samples_examined + cov[1].samples_examined;
    if (cov[0].outcome == Outcome::fail || cov[1].outcome == Outcome::fail) {
      folded.outcome = Outcome::fail;
      folded.witness = worse.witness;
    }
  }

  std::vector<Verdict> out;
  out.reserve(kConditionCount);
  out.push_back(statics[0]);  // localizability
  out.push_back(statics[1]);  // additivity
  out.push_back(folded);      // covariance
  out.push_back(energy);
  out.push_back(causal[0]);   // microcausality
  out.push_back(causal[1]);   // strong_causality
  out.push_back(causal[2]);   // niws
  out.push_back(statics[2]);  // monotonicity
  out.push_back(cons[0]);     // probability_conservation
  out.push_back(cons[1]);     // number_conservation
  out.push_back(nav);
  return out;
}

}  // namespace axioms
}  // namespace loclab
