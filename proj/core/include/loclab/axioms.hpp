#pragma once

// Condition checkers. Each checker samples a fixed region/time catalog on a
// localization system and returns Verdicts: a residual (largest violation
// found), a pass/fail/not-applicable outcome, and a witness describing the
// worst instance. Checkers never throw on a failing condition; they throw
// only on structural misuse (empty sampling plans, non-finite data).

#include "loclab/modelzoo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace loclab {
namespace axioms {

using opkernel::Operator;
using spacetime::Region;
using spacetime::SpaceModel;
using zoo::LocalizationSystem;

enum class ConditionId {
  localizability,
  additivity,
  covariance,
  energy_bounded_below,
  microcausality,
  strong_causality,
  niws,
  monotonicity,
  probability_conservation,
  number_conservation,
  no_absolute_velocity,
};

constexpr int kConditionCount = 11;

const char* to_string(ConditionId c);
std::optional<ConditionId> condition_from_string(const std::string& s);
// All conditions in their canonical report order.
const std::vector<ConditionId>& all_conditions();

enum class Outcome { pass, fail, not_applicable };
const char* to_string(Outcome o);

struct Verdict {
  ConditionId condition = ConditionId::localizability;
  Outcome outcome = Outcome::not_applicable;
  double residual = 0.0;       // largest violation found
  int samples_examined = 0;
  std::string witness;         // worst instance; set whenever outcome is fail
  std::string detail;          // which flavor of the condition was measured

  bool holds() const { return outcome == Outcome::pass; }
};

struct TolerancePolicy {
  double pass_tol = 1e-8;   // residual at or below this passes
  double fail_tol = 1e-6;   // residual above this is a demonstrated violation
  // Causality probes sample t at these fractions of each pair's
  // light-crossing bound distance/c.
  std::vector<double> time_fractions{1e-3, 1e-2, 1e-1, 0.5, 0.9};
  // Covariance, conservation, and conclusion probes sample these times.
  std::vector<double> plain_times{0.3, 0.7, 1.3};
  // Energy refinement ladder (overridden by a system's refinement_sizes).
  std::vector<int> refinement{32, 64, 128, 256};
  // The energy scan fails iff the tracked minimum ends below the floor and
  // deepens by at least this factor at every level.
  double divergence_floor = -10.0;
  double divergence_ratio = 1.4;

  void validate() const;  // throws StructuralError unless pass_tol < fail_tol
};

// Builds outcome from the residual per the Verdict contract.
Verdict make_verdict(ConditionId c, double residual, const TolerancePolicy& p,
                     int samples, std::string witness, std::string detail = "");
Verdict not_applicable_verdict(ConditionId c, std::string detail = "");

struct RegionPair {
  Region a;
  Region b;
  std::string label;
};

// A decreasing family with its limit region. For exact instances the target
// is the smallest member; declared-limit instances carry a target strictly
// inside every member (the finite stand-in for a shrinking continuum family)
// and only apply to measure-class assignments.
struct NestedInstance {
  std::vector<Region> family;  // outermost first
  Region target;
  bool declared_limit = false;
  std::string label;
};

struct RegionCatalog {
  std::vector<Region> singles;                 // conclusion and spectrum probes
  std::vector<RegionPair> disjoint_pairs;      // localizability, additivity
  std::vector<RegionPair> causal_pairs;        // positive distance
  std::vector<NestedInstance> chains;          // monotonicity (exact)
  std::vector<NestedInstance> sleeves;         // niws: family = {outer}
  std::vector<NestedInstance> threshold_probes;  // declared-limit instances
  std::vector<std::vector<Region>> coverings;  // conservation
};

// Fixed deterministic catalog: interval widths N/8 and N/4, gaps N/8 and
// N/4, an adjacent pair, an antipodal pair, dilation chains, two partitions,
// and one covering with a member of measure >= 2/3.
RegionCatalog make_catalog(const SpaceModel& m);

// localizability, additivity, monotonicity.
std::vector<Verdict> check_statics(const LocalizationSystem& s, const TolerancePolicy& p);

// Two covariance verdicts: detail "spatial-shift" and "time-translation".
std::vector<Verdict> check_covariance(const LocalizationSystem& s, const TolerancePolicy& p);

// Refinement scan of the spectrum floor. Isotropic models scan tilted
// generators at fixed physical tilts; other models track the single
// generator. refinement overrides the policy ladder when nonempty.
Verdict check_energy(const LocalizationSystem& s, const TolerancePolicy& p,
                     const std::vector<int>& refinement = {});

// microcausality, strong_causality, niws (the last two on sharp systems only).
std::vector<Verdict> check_causality(const LocalizationSystem& s, const TolerancePolicy& p);

// probability_conservation (sharp) and number_conservation (number systems);
// whichever does not apply is returned not_applicable.
std::vector<Verdict> check_conservation(const LocalizationSystem& s, const TolerancePolicy& p);

// Samples spacelike translations and requires each to split into a
// difference of timelike translations. not_applicable on circle models.
Verdict check_nav(const LocalizationSystem& s);

// Every checker above, in canonical condition order (one Verdict per
// ConditionId, covariance folded per fold_covariance_time_only).
std::vector<Verdict> check_all(const LocalizationSystem& s, const TolerancePolicy& p,
                               bool fold_covariance_time_only);

}  // namespace axioms
}  // namespace loclab
