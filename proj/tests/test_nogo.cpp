#include <doctest.h>

#include "loclab/nogo.hpp"

using namespace loclab;
using namespace loclab::nogo;
using axioms::ConditionId;
using axioms::Outcome;
using opkernel::OpClass;
using spacetime::make_interval;
using spacetime::make_model;
using spacetime::ModelKind;
using spacetime::Region;
using spacetime::SpaceModel;
using zoo::Dispersion;

namespace {

const SpaceModel line32 = make_model(ModelKind::line_distinguished_frame, 32);
const SpaceModel iso32 = make_model(ModelKind::line_isotropic, 32);
const TolerancePolicy kPolicy{};

}  // namespace

TEST_CASE("zero dispersion, distinguished frame: trivial dynamics, NAV blocked") {
  auto s = zoo::build_standard(line32, Dispersion::zero);
  ConditionMatrix cm = condition_matrix(s, kPolicy);
  CHECK(cm.conclusion_kind == ConclusionKind::trivial_dynamics);
  CHECK(cm.conclusion_holds);
  CHECK(cm.conclusion_residual <= 1e-10);
  CHECK(cm.premises_strictly_hold);
  CHECK(cm.no_premise_fails);
  CHECK(cm.consistent);
  CHECK(cm.verdict_for(ConditionId::no_absolute_velocity).outcome == Outcome::fail);
  // The strengthening to vanishing assignments is blocked, and indeed false.
  CHECK(cm.vanishing_residual == doctest::Approx(1.0));
  CHECK_THROWS_AS(cm.verdict_for(static_cast<ConditionId>(99)), StructuralError);
}

TEST_CASE("zero dispersion on the isotropic line: boosted generators dive") {
  // With no dispersion, the generator along a tilted timelike direction is a
  // pure momentum multiple: its spectrum is symmetric about zero and the
  // refinement scan finds no floor. The energy premise fails honestly, the
  // vanishing conclusion is not forced, and the indicators stay nonzero.
  auto s = zoo::build_standard(iso32, Dispersion::zero);
  ConditionMatrix cm = condition_matrix(s, kPolicy);
  CHECK(cm.conclusion_kind == ConclusionKind::localization_vanishes);
  CHECK(cm.verdict_for(ConditionId::energy_bounded_below).outcome == Outcome::fail);
  CHECK(!cm.premises_strictly_hold);
  CHECK(!cm.conclusion_holds);
  CHECK(cm.consistent);
  CHECK(cm.vanishing_residual == doctest::Approx(1.0));
}

TEST_CASE("measure effect: premises hold leniently, effects do not vanish") {
  auto s = zoo::build_measure_effect(make_model(ModelKind::circle, 24));
  ConditionMatrix cm = condition_matrix(s, kPolicy);
  CHECK(cm.conclusion_kind == ConclusionKind::effects_vanish);
  CHECK(cm.no_premise_fails);
  CHECK(!cm.premises_strictly_hold);  // NAV is not applicable on the circle
  CHECK(cm.consistent);
  CHECK(!cm.conclusion_holds);
  CHECK(cm.vanishing_residual == doctest::Approx(0.25));  // widest single, 6/24
  CHECK(cm.trivial_dynamics_residual <= 1e-12);
}

TEST_CASE("fock system binds the number conclusion") {
  auto s = zoo::build_lattice_fock(6);
  ConditionMatrix cm = condition_matrix(s, kPolicy);
  CHECK(cm.conclusion_kind == ConclusionKind::numbers_vanish);
  CHECK(!cm.conclusion_holds);
  CHECK(!cm.no_premise_fails);  // microcausality fails
  CHECK(cm.consistent);
  bool has_number = false;
  for (ConditionId c : cm.premises) {
    if (c == ConditionId::number_conservation) has_number = true;
  }
  CHECK(has_number);
}

TEST_CASE("leakage: exact zero at t=0, monotone in the probe") {
  auto s = zoo::build_standard(make_model(ModelKind::line_distinguished_frame, 64),
                               Dispersion::nonrelativistic);
  const SpaceModel& m = s.model;
  Region d = make_interval(m, 0, 8);
  Region probe = make_interval(m, 20, 8);
  Region wider = make_interval(m, 19, 10);
  REQUIRE(spacetime::region_subset(probe, wider));

  LeakageReport at0 = superluminal_leakage(s, d, probe, 0.0);
  CHECK(at0.leaked_probability == 0.0);
  CHECK(at0.spacelike_clear);
  CHECK(at0.gap == doctest::Approx(13.0));

  LeakageReport narrow = superluminal_leakage(s, d, probe, 2.0);
  LeakageReport wide = superluminal_leakage(s, d, wider, 2.0);
  CHECK(narrow.leaked_probability >= 0.0);
  CHECK(narrow.leaked_probability <= wide.leaked_probability + 1e-12);

  // Free spreading leaks measurably even across a spacelike gap.
  CHECK(narrow.leaked_probability > 1e-12);
}

TEST_CASE("leakage rejects causally allowed or malformed configurations") {
  auto s = zoo::build_standard(line32, Dispersion::nonrelativistic);
  Region d = make_interval(line32, 0, 4);
  Region probe = make_interval(line32, 8, 4);  // distance 4
  CHECK_THROWS_AS(superluminal_leakage(s, d, probe, 5.0), StructuralError);
  CHECK_THROWS_AS(superluminal_leakage(s, d, probe, -1.0), StructuralError);
  CHECK_THROWS_AS(superluminal_leakage(s, Region{}, probe, 0.1), StructuralError);

  auto unsharp = zoo::build_dirac_positive(iso32);
  CHECK_THROWS_AS(superluminal_leakage(unsharp, d, probe, 0.1), StructuralError);
}

TEST_CASE("zero dynamics never leaks") {
  auto s = zoo::build_standard(line32, Dispersion::zero);
  Region d = make_interval(line32, 0, 4);
  Region probe = make_interval(line32, 12, 4);
  CHECK(superluminal_leakage(s, d, probe, 1.0).leaked_probability <= 1e-24);
}

TEST_CASE("busch spectrum oracles") {
  SUBCASE("sharp projections sit at 0 or 1") {
    auto s = zoo::build_standard(line32, Dispersion::relativistic);
    auto cat = axioms::make_catalog(line32);
    for (const Region& d : cat.singles) {
      BuschReport r = busch_spectrum(s, d);
      const bool at_zero = std::abs(r.max_eigenvalue) <= 1e-10;
      const bool at_one = std::abs(r.max_eigenvalue - 1.0) <= 1e-10;
      CHECK((at_zero || at_one));
    }
  }
  SUBCASE("scalar effect sits exactly at its measure") {
    auto s = zoo::build_measure_effect(make_model(ModelKind::circle, 24));
    BuschReport r = busch_spectrum(s, make_interval(make_model(ModelKind::circle, 24), 0, 12));
    CHECK(r.max_eigenvalue == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.min_eigenvalue == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.gap_to_one == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("improper regions are rejected") {
    auto s = zoo::build_standard(line32, Dispersion::zero);
    CHECK_THROWS_AS(busch_spectrum(s, Region{}), StructuralError);
    CHECK_THROWS_AS(busch_spectrum(s, make_interval(line32, 0, 32)), StructuralError);
  }
}

TEST_CASE("zero-set dichotomy endpoints") {
  opkernel::Rng rng(17);
  Operator h = Operator::make(rng.random_hermitian(8), OpClass::hermitian);
  auto psi = opkernel::StateVector::normalized(rng.random_vector(8));
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.1 * i);

  Operator zero = Operator::make(Matrix::Zero(8, 8), OpClass::effect);
  CHECK(hegerfeldt_zero_set(h, zero, psi, grid).classification ==
        ZeroSetClass::identically_zero);

  Operator id = Operator::make(Matrix::Identity(8, 8), OpClass::projection);
  ZeroSetReport one = hegerfeldt_zero_set(h, id, psi, grid);
  CHECK(one.classification == ZeroSetClass::zeros_sparse);
  CHECK(one.zero_fraction == 0.0);
  CHECK(one.max_abs == doctest::Approx(1.0).epsilon(1e-12));

  Operator not_effect = Operator::make(rng.random_hermitian(8), OpClass::hermitian);
  CHECK_THROWS_AS(hegerfeldt_zero_set(h, not_effect, psi, grid), StructuralError);
  CHECK_THROWS_AS(hegerfeldt_zero_set(h, zero, psi, {}), StructuralError);
}

TEST_CASE("zero-set classification is stable under grid refinement") {
  opkernel::Rng rng(23);
  for (int i = 0; i < 10; ++i) {
    const int dim = rng.uniform_int(4, 12);
    Operator h = Operator::make(rng.random_hermitian(dim), OpClass::hermitian);
    Operator a = rng.random_projection(dim, rng.uniform_int(1, dim - 1));
    auto psi = opkernel::StateVector::normalized(rng.random_vector(dim));
    std::vector<double> coarse, fine;
    for (int k = 0; k <= 80; ++k) coarse.push_back(4.0 * k / 80);
    for (int k = 0; k <= 160; ++k) fine.push_back(4.0 * k / 160);
    CHECK(hegerfeldt_zero_set(h, a, psi, coarse).classification ==
          hegerfeldt_zero_set(h, a, psi, fine).classification);
  }
}

TEST_CASE("borchers probe: invariant blocks commute and never meet") {
  Matrix h = Matrix::Zero(4, 4);
  h(0, 0) = 1.0;
  h(1, 1) = -0.5;
  h(2, 2) = 0.25;
  h(3, 3) = 2.0;
  Matrix e = Matrix::Zero(4, 4);
  e(0, 0) = e(1, 1) = 1.0;
  Matrix f = Matrix::Zero(4, 4);
  f(2, 2) = f(3, 3) = 1.0;
  BorchersReport r = borchers_probe(Operator::make(e, OpClass::projection),
                                    Operator::make(f, OpClass::projection),
                                    Operator::make(h, OpClass::hermitian), 0.5);
  CHECK(r.commutes_on_interval);
  CHECK(r.product_max <= 1e-10);
  CHECK(r.consistent);
}

TEST_CASE("borchers probe: generic instances yield contrapositive witnesses") {
  opkernel::Rng rng(31);
  Matrix v = rng.random_unitary(6);
  Matrix d1 = Matrix::Zero(6, 6), d2 = Matrix::Zero(6, 6);
  d1(0, 0) = d1(1, 1) = 1.0;
  d2(3, 3) = d2(4, 4) = 1.0;
  Operator e = Operator::make(Matrix(v * d1 * v.adjoint()), OpClass::projection);
  Operator f = Operator::make(Matrix(v * d2 * v.adjoint()), OpClass::projection);
  Operator h = Operator::make(rng.random_hermitian(6), OpClass::hermitian);
  BorchersReport r = borchers_probe(e, f, h, 0.5);
  CHECK(!r.commutes_on_interval);
  CHECK(r.product_max > 1e-6);
  CHECK(r.consistent);
  CHECK(!r.note.empty());

  // e f != 0 violates the precondition.
  CHECK_THROWS_AS(borchers_probe(e, e, h, 0.5), StructuralError);
}

TEST_CASE("borchers probe: zero projection is vacuously consistent") {
  opkernel::Rng rng(37);
  Operator e = Operator::make(Matrix::Zero(5, 5), OpClass::projection);
  Operator f = rng.random_projection(5, 2);
  Operator h = Operator::make(rng.random_hermitian(5), OpClass::hermitian);
  BorchersReport r = borchers_probe(e, f, h, 1.0);
  CHECK(r.commutes_on_interval);
  CHECK(r.product_max <= 1e-12);
  CHECK(r.consistent);
}

TEST_CASE("appendix lemma suite holds on every instance") {
  LemmaSuiteReport report = appendix_lemma_suite(kPolicy);
  CHECK(report.all_ok);
  REQUIRE(!report.entries.empty());

  int proved_invariance = 0, covering_entries = 0, block_entries = 0;
  for (const LemmaEntry& e : report.entries) {
    CHECK(e.ok);
    if (e.lemma == "invariance-vanishing" && e.status == LemmaEntry::Status::proved) {
      ++proved_invariance;
      CHECK(e.conclusion_residual <= 1e-6);
    }
    if (e.lemma == "covering-join-invariance") {
      ++covering_entries;
      CHECK(e.status == LemmaEntry::Status::proved);
      CHECK(e.conclusion_residual <= 1e-8);
    }
    if (e.lemma == "block-invariant-evolution") {
      ++block_entries;
      CHECK(e.premise_residual <= 1e-8);
      CHECK(e.conclusion_residual <= 1e-10);
    }
  }
  // The anchored assignment vanishes off its anchor, so its invariance
  // premise holds non-vacuously there.
  CHECK(proved_invariance >= 3);
  CHECK(covering_entries == 3);
  CHECK(block_entries == 20);
}
