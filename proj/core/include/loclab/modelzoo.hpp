#pragma once

// The system catalog: localization schemes on finite lattices, each bundling
// a space model, a region -> operator assignment, and a unitary family
// (time generator plus one-site shift). Sharp systems assign projections,
// unsharp systems assign effects, number systems assign occupation sums.
//
// Every builder precomputes the eigensystem of its time generator, so
// evolution and conjugation are matrix-multiply only.

#include "loclab/opkernel.hpp"
#include "loclab/spacetime.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace loclab {
namespace zoo {

using opkernel::Operator;
using opkernel::SpectralDecomposition;
using opkernel::StateVector;
using spacetime::Region;
using spacetime::SpaceModel;
using spacetime::Translation;

enum class SystemKind { sharp, unsharp, number };
enum class Dispersion { zero, nonrelativistic, relativistic, momentum };
enum class PathologyMode { only_d0, all_but_d0 };

const char* to_string(SystemKind k);
const char* to_string(Dispersion d);

// Time generator, its cached eigensystem, the one-site shift, and the tilted
// generator family. hamiltonian_of accepts timelike translations only; on
// isotropic models it is b_t * H + (b_s * spacing) * P, elsewhere only pure
// time translations are in the decreed symmetry data.
struct UnitaryFamily {
  Operator hamiltonian;
  SpectralDecomposition h_spec;
  Operator shift;
  std::optional<Operator> momentum;
  std::function<Operator(const Translation&)> hamiltonian_of;
};

struct LocalizationSystem {
  SystemKind kind = SystemKind::sharp;
  std::string name;     // catalog key
  std::string summary;  // what the construction does
  SpaceModel model;
  UnitaryFamily unitaries;
  std::function<Operator(const Region&)> localize;  // assignment at t = 0
  // The assignment ignores time when set (the same operator is decreed on
  // every hyperplane even though the dynamics is nontrivial).
  bool frozen_assignment = false;
  // The assignment depends on a region only through its measure. Nested
  // families with a declared limit (emulating a shrinking continuum family)
  // are meaningful probes only for such assignments.
  bool measure_class_assignment = false;
  // Rebuild the same construction at another lattice size, holding the
  // physical length fixed (sized-spacing systems) or the spacing fixed
  // (occupation systems). Used by the energy refinement scan.
  std::function<LocalizationSystem(int)> refine;
  // Non-default refinement ladder (dimension-constrained constructions).
  std::vector<int> refinement_sizes;
  // Evaluate covariance/causality only at multiples of this time step
  // (spatial-shift generators are exact shifts precisely there).
  std::optional<double> commensurate_dt;
};

// Position PVM with a chosen dispersion: zero (H = 0), nonrelativistic
// (p²/2m), relativistic (sqrt(p² + m²)), momentum (H = P).
LocalizationSystem build_standard(const SpaceModel& m, Dispersion kind, double mass = 1.0);

// Product construction on the doubled lattice: the assignment carries a fixed
// second factor E_{d0} and the dynamics acts only on that factor, so joins of
// coverings move with time while localizability and microcausality survive.
LocalizationSystem build_tensor_counterexample(const SpaceModel& m, double mass,
                                               const Region& d0);

// Position PVM whose assignment is decreed time-independent while the
// dynamics is the free nonrelativistic evolution.
LocalizationSystem build_frozen(const SpaceModel& m, double mass = 1.0);

// Degenerate assignments concentrated on one region d0: only_d0 assigns the
// d0 indicator there and 0 elsewhere; all_but_d0 assigns the identity off d0.
LocalizationSystem build_pathological(const SpaceModel& m, double mass, const Region& d0,
                                      PathologyMode mode);

// Circle-only: indicator I when the region's normalized measure reaches 2/3,
// else 0, with free circle dynamics.
LocalizationSystem build_cylinder_threshold(const SpaceModel& m);

// Circle-only: the scalar effect measure(d) * I with rotation-covariant,
// positive-generator dynamics.
LocalizationSystem build_measure_effect(const SpaceModel& m);

// 1+1 lattice Dirac hamiltonian compressed to its positive-energy subspace;
// assignments are the compressed position indicators (genuine effects with
// spectrum strictly inside (0, 1)).
LocalizationSystem build_dirac_positive(const SpaceModel& m, double mass = 1.0);

// Fermionic occupation construction on sites <= 10 (dimension 2^sites):
// N_d = sum of site occupations, nearest-neighbor hopping shifted so the
// ground energy is 0.
LocalizationSystem build_lattice_fock(int sites, double hopping = 1.0,
                                      double spacing = 1.0);

Operator evolution(const LocalizationSystem& s, double t);  // exp(i t H)
StateVector evolve(const LocalizationSystem& s, const StateVector& psi, double t);

// The system's operator for region d on the hyperplane at time t:
// U_t L(d) U_-t, unless the construction decrees otherwise (frozen).
Operator localize_op(const LocalizationSystem& s, const Region& d, double t);

// Checks the per-kind operator class on sampled regions plus the unitary
// family invariants (U(t) unitary, shift^sites = 1). Throws StructuralError.
void validate_system(const LocalizationSystem& s,
                     const std::vector<Region>& sample_regions);

}  // namespace zoo
}  // namespace loclab
