#include <doctest.h>

#include "loclab/modelzoo.hpp"

#include <cmath>

using namespace loclab;
using namespace loclab::zoo;
using opkernel::OpClass;
using spacetime::make_interval;
using spacetime::make_model;
using spacetime::ModelKind;
using spacetime::Region;
using spacetime::SpaceModel;

namespace {

const SpaceModel line32 = make_model(ModelKind::line_distinguished_frame, 32);
const SpaceModel iso32 = make_model(ModelKind::line_isotropic, 32);
const SpaceModel circle24 = make_model(ModelKind::circle, 24);

std::vector<Region> samples(const SpaceModel& m) {
  return {make_interval(m, 0, m.sites / 8), make_interval(m, m.sites / 4, m.sites / 8),
          make_interval(m, 0, m.sites / 4)};
}

double dist(const Operator& a, const Operator& b) {
  return opkernel::operator_norm(Matrix(a.mat - b.mat));
}

}  // namespace

TEST_CASE("every builder passes its own validation") {
  validate_system(build_standard(line32, Dispersion::zero), samples(line32));
  validate_system(build_standard(line32, Dispersion::nonrelativistic), samples(line32));
  validate_system(build_standard(iso32, Dispersion::relativistic), samples(iso32));
  validate_system(build_standard(line32, Dispersion::momentum), samples(line32));
  validate_system(build_frozen(line32), samples(line32));
  validate_system(build_pathological(line32, 1.0, make_interval(line32, 0, 4),
                                     PathologyMode::only_d0),
                  samples(line32));
  validate_system(build_pathological(line32, 1.0, make_interval(line32, 0, 4),
                                     PathologyMode::all_but_d0),
                  samples(line32));
  validate_system(build_tensor_counterexample(make_model(ModelKind::line_distinguished_frame, 16),
                                              1.0, make_interval(line32, 0, 2)),
                  samples(make_model(ModelKind::line_distinguished_frame, 16)));
  validate_system(build_cylinder_threshold(circle24), samples(circle24));
  validate_system(build_measure_effect(circle24), samples(circle24));
  validate_system(build_dirac_positive(iso32), samples(iso32));
  validate_system(build_lattice_fock(6), samples(make_model(ModelKind::circle, 6)));
}

TEST_CASE("dispersion spectra match the lattice formulas") {
  // p_k = 2 pi kappa / (N a), kappa in [-(N/2 - 1), N/2].
  auto momentum = build_standard(line32, Dispersion::momentum);
  CHECK(momentum.unitaries.h_spec.eigenvalues[0] ==
        doctest::Approx(-M_PI * 30.0 / 32.0).epsilon(1e-12));
  CHECK(momentum.unitaries.h_spec.eigenvalues[31] ==
        doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(momentum.commensurate_dt.has_value());
  CHECK(*momentum.commensurate_dt == doctest::Approx(1.0));

  auto rel = build_standard(line32, Dispersion::relativistic, 1.0);
  CHECK(rel.unitaries.h_spec.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));

  auto nonrel = build_standard(line32, Dispersion::nonrelativistic, 2.0);
  CHECK(nonrel.unitaries.h_spec.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(nonrel.unitaries.h_spec.eigenvalues[31] ==
        doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-10));

  CHECK_THROWS_AS(build_standard(line32, Dispersion::relativistic, 0.0), StructuralError);
}

TEST_CASE("zero dispersion has trivial dynamics") {
  auto s = build_standard(line32, Dispersion::zero);
  CHECK(dist(evolution(s, 0.7), Operator::identity(32)) <= 1e-12);
}

TEST_CASE("shift conjugation moves indicators") {
  auto s = build_standard(line32, Dispersion::zero);
  Operator e = s.localize(make_interval(line32, 0, 4));
  Matrix moved = s.unitaries.shift.mat * e.mat * s.unitaries.shift.mat.adjoint();
  Operator expected = s.localize(make_interval(line32, 1, 4));
  CHECK(opkernel::operator_norm(Matrix(moved - expected.mat)) <= 1e-12);
}

TEST_CASE("evolution is unitary and consistent with evolve") {
  auto s = build_standard(line32, Dispersion::nonrelativistic);
  Operator u = evolution(s, 0.37);
  CHECK(opkernel::classify(u).unitary_residual <= 1e-10);
  CHECK(dist(evolution(s, 0.0), Operator::identity(32)) <= 1e-12);

  Matrix round_trip = u.mat * evolution(s, -0.37).mat;
  CHECK(opkernel::operator_norm(Matrix(round_trip - Matrix::Identity(32, 32))) <= 1e-10);

  opkernel::Rng rng(3);
  auto psi = opkernel::StateVector::normalized(rng.random_vector(32));
  auto moved = evolve(s, psi, 0.37);
  CHECK(std::abs(moved.v.norm() - 1.0) <= 1e-12);
  CHECK((moved.v - u.mat * psi.v).norm() <= 1e-12);
}

TEST_CASE("frozen assignments ignore the hyperplane") {
  auto s = build_frozen(line32);
  CHECK(s.frozen_assignment);
  Region d = make_interval(line32, 3, 5);
  CHECK(dist(localize_op(s, d, 1.3), s.localize(d)) == 0.0);
  // The dynamics itself is nontrivial.
  Operator e = s.localize(d);
  Operator u = evolution(s, 1.3);
  CHECK(opkernel::operator_norm(Matrix(u.mat * e.mat * u.mat.adjoint() - e.mat)) > 1e-3);
}

TEST_CASE("pathological assignments concentrate on the anchor") {
  Region d0 = make_interval(line32, 0, 4);
  auto only = build_pathological(line32, 1.0, d0, PathologyMode::only_d0);
  CHECK(dist(only.localize(d0), only.localize(d0)) == 0.0);
  CHECK(opkernel::operator_norm(only.localize(make_interval(line32, 8, 4))) == 0.0);
  CHECK(opkernel::operator_norm(only.localize(d0)) == doctest::Approx(1.0));

  auto all_but = build_pathological(line32, 1.0, d0, PathologyMode::all_but_d0);
  CHECK(dist(all_but.localize(make_interval(line32, 8, 4)), Operator::identity(32)) == 0.0);
  CHECK(dist(all_but.localize(d0), only.localize(d0)) == 0.0);

  CHECK_THROWS_AS(build_pathological(line32, 1.0, Region{}, PathologyMode::only_d0),
                  StructuralError);
}

TEST_CASE("cylinder threshold fires at measure 2/3") {
  auto s = build_cylinder_threshold(circle24);
  CHECK(s.measure_class_assignment);
  CHECK(dist(s.localize(make_interval(circle24, 0, 16)), Operator::identity(24)) == 0.0);
  CHECK(opkernel::operator_norm(s.localize(make_interval(circle24, 0, 15))) == 0.0);
  CHECK(opkernel::operator_norm(s.localize(make_interval(circle24, 5, 15))) == 0.0);
  CHECK_THROWS_AS(build_cylinder_threshold(line32), StructuralError);
}

TEST_CASE("measure effect is the scalar mu(d)") {
  auto s = build_measure_effect(circle24);
  CHECK(s.kind == SystemKind::unsharp);
  CHECK(s.measure_class_assignment);
  Operator a = s.localize(make_interval(circle24, 3, 12));
  CHECK(dist(a, Operator::make(Matrix(0.5 * Matrix::Identity(24, 24)), OpClass::effect)) <=
        1e-12);
}

TEST_CASE("dirac compression yields strict effects") {
  auto s = build_dirac_positive(iso32);
  CHECK(s.kind == SystemKind::unsharp);
  Operator a = s.localize(make_interval(iso32, 0, 4));
  auto r = opkernel::classify(a);
  CHECK(r.effect);
  // The compression has rank 2*width, so 0 stays in the spectrum; the top of
  // the spectrum is pushed strictly inside (0, 1). The gap below 1 decays
  // exponentially with the width, so probe a narrow region where it is far
  // above the eigensolver's resolution (2.7e-4 at width 4 here).
  CHECK(r.min_eigenvalue >= -1e-10);
  CHECK(r.max_eigenvalue > 1e-8);
  CHECK(r.max_eigenvalue < 1.0 - 1e-8);
  CHECK(!r.projection);
  // The whole circle compresses to the identity on the positive subspace.
  CHECK(dist(s.localize(make_interval(iso32, 0, 32)), Operator::identity(32)) <= 1e-10);
  // Positive spectrum: bounded below by the mass gap.
  CHECK(s.unitaries.h_spec.eigenvalues[0] > 0.0);
  CHECK_THROWS_AS(build_dirac_positive(iso32, 0.0), StructuralError);
}

TEST_CASE("fock occupations count fermions") {
  auto s = build_lattice_fock(6);
  CHECK(s.kind == SystemKind::number);
  CHECK(s.unitaries.hamiltonian.dim() == 64);
  // Ground-shifted spectrum starts at 0.
  CHECK(std::abs(s.unitaries.h_spec.eigenvalues[0]) <= 1e-12);

  const SpaceModel& m = s.model;
  Region a = make_interval(m, 0, 2), b = make_interval(m, 2, 2);
  Operator sum = Operator::make(Matrix(s.localize(a).mat + s.localize(b).mat),
                                OpClass::hermitian);
  CHECK(dist(sum, s.localize(make_interval(m, 0, 4))) <= 1e-12);

  // Full-lattice number operator has integer spectrum 0..sites.
  auto spec = opkernel::eig_hermitian(s.localize(make_interval(m, 0, 6)));
  CHECK(std::abs(spec.eigenvalues[0] - 0.0) <= 1e-10);
  CHECK(std::abs(spec.eigenvalues[63] - 6.0) <= 1e-10);

  // Shift conjugation advances the occupation site.
  Operator n0 = s.localize(make_interval(m, 0, 1));
  Matrix moved = s.unitaries.shift.mat * n0.mat * s.unitaries.shift.mat.adjoint();
  CHECK(opkernel::operator_norm(Matrix(moved - s.localize(make_interval(m, 1, 1)).mat)) <=
        1e-10);

  CHECK_THROWS_AS(build_lattice_fock(3), StructuralError);
  CHECK_THROWS_AS(build_lattice_fock(11), StructuralError);
  CHECK(s.refinement_sizes == std::vector<int>{4, 6, 8});
}

TEST_CASE("tensor construction squares the dimension and caps the size") {
  const SpaceModel m16 = make_model(ModelKind::line_distinguished_frame, 16);
  auto s = build_tensor_counterexample(m16, 1.0, make_interval(m16, 0, 2));
  CHECK(s.unitaries.hamiltonian.dim() == 256);
  CHECK(s.localize(make_interval(m16, 0, 4)).dim() == 256);
  CHECK(s.refinement_sizes == std::vector<int>{8, 16, 32});

  const SpaceModel m64 = make_model(ModelKind::line_distinguished_frame, 64);
  CHECK_THROWS_AS(build_tensor_counterexample(m64, 1.0, make_interval(m64, 0, 8)),
                  StructuralError);
}

TEST_CASE("refinement holds the physical length fixed") {
  auto s = build_standard(line32, Dispersion::nonrelativistic);
  auto finer = s.refine(64);
  CHECK(finer.model.sites == 64);
  CHECK(finer.model.length() == doctest::Approx(line32.length()).epsilon(1e-15));
  CHECK(finer.model.spacing == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("isotropic models expose the tilted generator family") {
  auto s = build_standard(iso32, Dispersion::relativistic);
  Operator g = s.unitaries.hamiltonian_of({9.0, 8});
  CHECK(opkernel::classify(g).hermitian);
  CHECK_THROWS_AS(s.unitaries.hamiltonian_of({0.0, 8}), StructuralError);

  auto framed = build_standard(line32, Dispersion::relativistic);
  CHECK_THROWS_AS(framed.unitaries.hamiltonian_of({9.0, 8}), StructuralError);
  Operator pure = framed.unitaries.hamiltonian_of({2.0, 0});
  CHECK(dist(pure, Operator::make(Matrix(2.0 * framed.unitaries.hamiltonian.mat),
                                  OpClass::hermitian)) <= 1e-12);
}
