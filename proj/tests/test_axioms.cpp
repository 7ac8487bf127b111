#include <doctest.h>

#include "loclab/axioms.hpp"

#include <map>

using namespace loclab;
using namespace loclab::axioms;
using spacetime::make_interval;
using spacetime::make_model;
using spacetime::ModelKind;
using spacetime::SpaceModel;
using zoo::Dispersion;
using zoo::PathologyMode;

namespace {

const SpaceModel line32 = make_model(ModelKind::line_distinguished_frame, 32);
const SpaceModel iso32 = make_model(ModelKind::line_isotropic, 32);
const TolerancePolicy kPolicy{};

std::map<ConditionId, Verdict> by_condition(const std::vector<Verdict>& vs) {
  std::map<ConditionId, Verdict> m;
  for (const Verdict& v : vs) m[v.condition] = v;
  return m;
}

}  // namespace

TEST_CASE("tolerance policy rejects inverted thresholds") {
  TolerancePolicy p;
  p.pass_tol = 1e-5;
  p.fail_tol = 1e-8;
  CHECK_THROWS_AS(p.validate(), StructuralError);
  p = TolerancePolicy{};
  p.time_fractions.clear();
  CHECK_THROWS_AS(p.validate(), StructuralError);
}

TEST_CASE("verdict construction follows the residual contract") {
  Verdict pass = make_verdict(ConditionId::additivity, 1e-9, kPolicy, 3, "w");
  CHECK(pass.outcome == Outcome::pass);
  CHECK(pass.witness.empty());
  Verdict mid = make_verdict(ConditionId::additivity, 1e-7, kPolicy, 3, "w");
  CHECK(mid.outcome == Outcome::fail);
  Verdict na = not_applicable_verdict(ConditionId::no_absolute_velocity, "why");
  CHECK(na.outcome == Outcome::not_applicable);
  CHECK(na.detail == "why");
}

TEST_CASE("catalog shape") {
  RegionCatalog cat = make_catalog(line32);
  CHECK(cat.singles.size() == 4);
  CHECK(cat.disjoint_pairs.size() == 5);
  CHECK(!cat.causal_pairs.empty());
  for (const RegionPair& p : cat.causal_pairs) {
    CHECK(spacetime::region_distance(line32, p.a, p.b) > 0.0);
  }
  CHECK(cat.chains.size() == 2);
  for (const NestedInstance& n : cat.chains) {
    CHECK(!n.declared_limit);
    CHECK(n.family.back() == n.target);
  }
  CHECK(cat.sleeves.size() == 2);
  REQUIRE(!cat.threshold_probes.empty());
  for (const NestedInstance& n : cat.threshold_probes) {
    CHECK(n.declared_limit);
    // 2/3-threshold spread: every member at or above, target strictly below.
    for (const auto& member : n.family) {
      CHECK(3 * member.size() >= 2 * line32.sites);
    }
    CHECK(3 * n.target.size() < 2 * line32.sites);
  }
  CHECK(cat.coverings.size() == 3);
  bool has_big_member = false;
  for (const auto& cov : cat.coverings) {
    int total = 0;
    for (const auto& r : cov) total += r.size();
    CHECK(total == 32);
    if (3 * cov.front().size() >= 2 * line32.sites) has_big_member = true;
  }
  CHECK(has_big_member);
}

TEST_CASE("check_all reports all conditions in canonical order") {
  auto s = zoo::build_standard(line32, Dispersion::zero);
  auto verdicts = check_all(s, kPolicy, false);
  REQUIRE(verdicts.size() == static_cast<size_t>(kConditionCount));
  const auto& order = all_conditions();
  for (int i = 0; i < kConditionCount; ++i) {
    CHECK(verdicts[i].condition == order[i]);
  }
}

TEST_CASE("zero dispersion system satisfies everything checkable") {
  auto s = zoo::build_standard(line32, Dispersion::zero);
  auto v = by_condition(check_all(s, kPolicy, false));
  CHECK(v[ConditionId::localizability].holds());
  CHECK(v[ConditionId::additivity].holds());
  CHECK(v[ConditionId::covariance].holds());
  CHECK(v[ConditionId::energy_bounded_below].holds());
  CHECK(v[ConditionId::microcausality].holds());
  CHECK(v[ConditionId::strong_causality].holds());
  CHECK(v[ConditionId::niws].holds());
  CHECK(v[ConditionId::monotonicity].holds());
  CHECK(v[ConditionId::probability_conservation].holds());
  CHECK(v[ConditionId::number_conservation].outcome == Outcome::not_applicable);
  // The distinguished frame decrees no boost structure.
  CHECK(v[ConditionId::no_absolute_velocity].outcome == Outcome::fail);

  auto iso = zoo::build_standard(iso32, Dispersion::zero);
  CHECK(check_nav(iso).holds());
}

TEST_CASE("frozen system fails exactly time covariance") {
  auto s = zoo::build_frozen(line32);
  auto v = by_condition(check_all(s, kPolicy, false));
  CHECK(v[ConditionId::covariance].outcome == Outcome::fail);
  CHECK(v[ConditionId::covariance].residual > kPolicy.fail_tol);
  CHECK(!v[ConditionId::covariance].witness.empty());
  CHECK(v[ConditionId::localizability].holds());
  CHECK(v[ConditionId::probability_conservation].holds());
  CHECK(v[ConditionId::energy_bounded_below].holds());
  CHECK(v[ConditionId::microcausality].holds());

  // Spatial covariance alone is fine; the failure is the time direction.
  auto cov = check_covariance(s, kPolicy);
  REQUIRE(cov.size() == 2);
  CHECK(cov[0].holds());
  CHECK(cov[1].outcome == Outcome::fail);
}

TEST_CASE("free dynamics fails microcausality") {
  auto s = zoo::build_standard(line32, Dispersion::nonrelativistic);
  auto v = by_condition(check_all(s, kPolicy, false));
  CHECK(v[ConditionId::microcausality].outcome == Outcome::fail);
  CHECK(v[ConditionId::microcausality].residual > kPolicy.fail_tol);
  CHECK(v[ConditionId::localizability].holds());
  CHECK(v[ConditionId::covariance].holds());
  CHECK(v[ConditionId::energy_bounded_below].holds());
  CHECK(v[ConditionId::probability_conservation].holds());
}

TEST_CASE("energy refinement scan certifies divergence only for unbounded ladders") {
  TolerancePolicy p;
  p.refinement = {32, 64, 128};
  auto momentum = zoo::build_standard(line32, Dispersion::momentum);
  Verdict bad = check_energy(momentum, p);
  CHECK(bad.outcome == Outcome::fail);
  CHECK(!bad.witness.empty());

  auto nonrel = zoo::build_standard(line32, Dispersion::nonrelativistic);
  CHECK(check_energy(nonrel, p).holds());
  auto zero = zoo::build_standard(line32, Dispersion::zero);
  CHECK(check_energy(zero, p).holds());
}

TEST_CASE("NAV verdict per model kind") {
  CHECK(check_nav(zoo::build_standard(iso32, Dispersion::relativistic)).holds());
  CHECK(check_nav(zoo::build_standard(line32, Dispersion::relativistic)).outcome ==
        Outcome::fail);
  auto circle = zoo::build_measure_effect(make_model(ModelKind::circle, 24));
  Verdict v = check_nav(circle);
  CHECK(v.outcome == Outcome::not_applicable);
  CHECK(!v.detail.empty());
}

TEST_CASE("pathological systems fail exactly their advertised condition") {
  Region d0 = make_interval(line32, 0, 4);  // first block of the N/8 partition

  auto only = zoo::build_pathological(line32, 1.0, d0, PathologyMode::only_d0);
  auto vo = by_condition(check_all(only, kPolicy, true));
  CHECK(vo[ConditionId::probability_conservation].outcome == Outcome::fail);
  CHECK(vo[ConditionId::localizability].holds());
  CHECK(vo[ConditionId::covariance].holds());
  CHECK(vo[ConditionId::energy_bounded_below].holds());
  CHECK(vo[ConditionId::microcausality].holds());

  auto all_but = zoo::build_pathological(line32, 1.0, d0, PathologyMode::all_but_d0);
  auto va = by_condition(check_all(all_but, kPolicy, true));
  CHECK(va[ConditionId::localizability].outcome == Outcome::fail);
  CHECK(va[ConditionId::localizability].residual == doctest::Approx(1.0));
  CHECK(va[ConditionId::probability_conservation].holds());
  CHECK(va[ConditionId::covariance].holds());
  CHECK(va[ConditionId::energy_bounded_below].holds());
  CHECK(va[ConditionId::microcausality].holds());
}

TEST_CASE("measure effect satisfies the unsharp premises with zero residuals") {
  auto s = zoo::build_measure_effect(make_model(ModelKind::circle, 24));
  auto v = by_condition(check_all(s, kPolicy, false));
  CHECK(v[ConditionId::localizability].holds());
  CHECK(v[ConditionId::additivity].residual <= 1e-12);
  CHECK(v[ConditionId::covariance].residual <= 1e-12);
  CHECK(v[ConditionId::energy_bounded_below].holds());
  CHECK(v[ConditionId::microcausality].residual <= 1e-12);
  CHECK(v[ConditionId::monotonicity].holds());
  CHECK(v[ConditionId::probability_conservation].outcome == Outcome::not_applicable);
  CHECK(v[ConditionId::strong_causality].outcome == Outcome::not_applicable);
  CHECK(v[ConditionId::no_absolute_velocity].outcome == Outcome::not_applicable);
}

TEST_CASE("cylinder threshold: monotonicity and conservation break, statics survive") {
  auto s = zoo::build_cylinder_threshold(make_model(ModelKind::circle, 24));
  auto v = by_condition(check_all(s, kPolicy, false));
  CHECK(v[ConditionId::localizability].holds());
  CHECK(v[ConditionId::covariance].holds());
  CHECK(v[ConditionId::energy_bounded_below].holds());
  CHECK(v[ConditionId::monotonicity].outcome == Outcome::fail);
  CHECK(v[ConditionId::monotonicity].residual == doctest::Approx(1.0));
  CHECK(v[ConditionId::probability_conservation].outcome == Outcome::fail);
  CHECK(v[ConditionId::probability_conservation].residual == doctest::Approx(1.0));
  CHECK(!v[ConditionId::probability_conservation].witness.empty());
}

TEST_CASE("number systems get number conservation instead of joins") {
  auto s = zoo::build_lattice_fock(6);
  auto v = by_condition(check_all(s, kPolicy, false));
  CHECK(v[ConditionId::additivity].holds());
  CHECK(v[ConditionId::number_conservation].holds());
  CHECK(v[ConditionId::probability_conservation].outcome == Outcome::not_applicable);
  CHECK(v[ConditionId::energy_bounded_below].holds());
  CHECK(v[ConditionId::microcausality].outcome == Outcome::fail);
  CHECK(v[ConditionId::strong_causality].outcome == Outcome::not_applicable);
  CHECK(v[ConditionId::niws].outcome == Outcome::not_applicable);
  CHECK(v[ConditionId::localizability].outcome == Outcome::not_applicable);
}

TEST_CASE("covariance folding matches the requested shape") {
  auto frozen = zoo::build_frozen(line32);
  auto folded_time = by_condition(check_all(frozen, kPolicy, true));
  auto folded_full = by_condition(check_all(frozen, kPolicy, false));
  // Frozen fails the time direction either way.
  CHECK(folded_time[ConditionId::covariance].outcome == Outcome::fail);
  CHECK(folded_full[ConditionId::covariance].outcome == Outcome::fail);

  Region d0 = make_interval(line32, 0, 4);
  auto only = zoo::build_pathological(line32, 1.0, d0, PathologyMode::only_d0);
  // Spatial covariance fails for the anchored assignment, time covariance
  // holds; the fold decides which one the combined verdict sees.
  CHECK(by_condition(check_all(only, kPolicy, true))[ConditionId::covariance].holds());
  CHECK(by_condition(check_all(only, kPolicy, false))[ConditionId::covariance].outcome ==
        Outcome::fail);
}

TEST_CASE("strong causality is bounded by the niws leak on aligned triples") {
  // With outer containing a, b off outer, and E_outer E_b = 0 exactly:
  // E_a E_b(t) = E_a (1 - E_outer(t)) E_b(t), so the product norm is at most
  // the sleeve leak |(1 - E_outer(t)) E_a|.
  auto s = zoo::build_standard(line32, Dispersion::nonrelativistic);
  Region a = make_interval(line32, 0, 4);
  Region outer = spacetime::expand_region(line32, a, 2);
  Region b = make_interval(line32, 16, 4);
  REQUIRE(spacetime::regions_disjoint(outer, b));

  Operator ea = s.localize(a);
  Operator eo = s.localize(outer);
  Operator eb = s.localize(b);
  for (double t : {0.05, 0.2}) {
    Operator u = zoo::evolution(s, t);
    Matrix ebt = u.mat * eb.mat * u.mat.adjoint();
    Matrix eot = u.mat * eo.mat * u.mat.adjoint();
    const double strong = opkernel::operator_norm(Matrix(ea.mat * ebt));
    const double leak =
        opkernel::operator_norm(Matrix((Matrix::Identity(32, 32) - eot) * ea.mat));
    CHECK(strong <= leak + 1e-12);
  }
}
