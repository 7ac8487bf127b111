#pragma once

// Discrete 1+1 geometry: periodic site lattices, regions as site sets,
// translations with a causal classification, and the region-family catalogs
// the checkers sample from.
//
// Distance convention: sites are points. The distance between regions is the
// minimal-image site separation times the spacing, so disjoint consecutive
// sites are `spacing` apart and regions touch only by sharing a site.

#include "loclab/opkernel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace loclab {
namespace spacetime {

enum class ModelKind { line_isotropic, line_distinguished_frame, circle };

const char* to_string(ModelKind k);
std::optional<ModelKind> model_kind_from_string(const std::string& s);

struct Region;

// sites >= 4, spacing > 0, light_speed > 0. Both line kinds are periodic
// lattices; `circle` additionally carries the normalized counting measure
// used by the threshold and scalar-effect constructions.
struct SpaceModel {
  ModelKind kind = ModelKind::line_isotropic;
  int sites = 0;
  double spacing = 1.0;
  double light_speed = 1.0;

  double length() const { return sites * spacing; }
  double measure(const Region& d) const;  // |d| / sites
  std::string summary() const;
};

SpaceModel make_model(ModelKind kind, int sites, double spacing = 1.0,
                      double light_speed = 1.0);

// Sorted unique site indices in [0, sites). Intervals may wrap.
struct Region {
  std::vector<int> sites;

  int size() const { return static_cast<int>(sites.size()); }
  bool empty() const { return sites.empty(); }
  bool contains(int site) const;
  bool operator==(const Region& o) const { return sites == o.sites; }
  std::string to_string() const;
};

Region make_region(const SpaceModel& m, std::vector<int> sites);
Region make_interval(const SpaceModel& m, int start, int width);
Region region_union(const Region& a, const Region& b);
Region region_complement(const SpaceModel& m, const Region& d);
bool regions_disjoint(const Region& a, const Region& b);
bool region_subset(const Region& inner, const Region& outer);

// Dilation by k sites on each side (minimal-image).
Region expand_region(const SpaceModel& m, const Region& d, int k);

// time in model units, space in whole sites.
struct Translation {
  double time = 0.0;
  int space = 0;
};

enum class CausalClass { timelike, lightlike, spacelike };

// c|t| vs |s| * spacing, with a relative slack of 1e-12 for the light cone.
CausalClass classify_translation(const SpaceModel& m, const Translation& a);

// Minimal-image distance between site sets (see header comment). Empty
// regions are infinitely far from everything: returns +infinity.
double region_distance(const SpaceModel& m, const Region& a, const Region& b);

// True iff a light signal leaving `a` cannot reach `b` within time t:
// c * t < region_distance. Requires t >= 0.
bool is_spacelike_clear(const SpaceModel& m, const Region& a, const Region& b,
                        double t);

Region shift_region(const SpaceModel& m, const Region& d, int steps);

// Decomposition of a spacelike translation as a difference b - c of timelike
// translations. Exists on the isotropic line (b = a + (T, 0), c = (T, 0) with
// T = |s| * spacing / c + 1 + max(0, -a.time)); absent by decree on the
// distinguished-frame line; undefined on the circle. Components satisfy
// a = b - c exactly whenever the arithmetic is exactly representable
// (dyadic times), and to one ulp otherwise.
struct NavDecomposition {
  enum class Status { decomposed, none, not_applicable };
  Status status = Status::none;
  Translation b, c;
};

NavDecomposition nav_decompose(const SpaceModel& m, const Translation& a);

// Region families for the checkers.
//
// covering_blocks: partition into consecutive intervals of the given width
// (last block absorbs the remainder).
// nested_chain: strictly decreasing expansions of `target` down to the target
// itself; set intersection equals the target. Errors when the target is empty
// or the whole lattice.
// covering_with: a partition whose first member is `d`.
std::vector<Region> covering_blocks(const SpaceModel& m, int block);
std::vector<Region> nested_chain(const SpaceModel& m, const Region& target);
std::vector<Region> covering_with(const SpaceModel& m, const Region& d);

enum class FamilyMode { disjoint_covering, nested_to, covering_with };

// Mode-level entry point: disjoint_covering ignores `anchor` and returns the
// two standard partitions (blocks N/8 and N/4); the other modes build around
// `anchor`.
std::vector<std::vector<Region>> make_families(const SpaceModel& m, FamilyMode mode,
                                               const Region& anchor = Region{});

}  // namespace spacetime
}  // namespace loclab
