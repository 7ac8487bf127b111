#include "loclab/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace loclab {
namespace spacetime {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::line_isotropic: return "line_isotropic";
    case ModelKind::line_distinguished_frame: return "line_distinguished_frame";
    case ModelKind::circle: return "circle";
  }
  return "line_isotropic";
}

std::optional<ModelKind> model_kind_from_string(const std::string& s) {
  if (s == "line_isotropic") return ModelKind::line_isotropic;
  if (s == "line_distinguished_frame") return ModelKind::line_distinguished_frame;
  if (s == "circle") return ModelKind::circle;
  return std::nullopt;
}

double SpaceModel::measure(const Region& d) const {
  return static_cast<double>(d.size()) / static_cast<double>(sites);
}

std::string SpaceModel::summary() const {
  std::ostringstream os;
  os << to_string(kind) << "(sites=" << sites << ", spacing=" << spacing
     << ", c=" << light_speed << ")";
  return os.str();
}

SpaceModel make_model(ModelKind kind, int sites, double spacing, double light_speed) {
  if (sites < 4) {
    throw StructuralError("make_model: need at least 4 sites, got " + std::to_string(sites));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw StructuralError("make_model: spacing must be positive and finite");
  }
  if (!(light_speed > 0.0) || !std::isfinite(light_speed)) {
    throw StructuralError("make_model: light_speed must be positive and finite");
  }
  return SpaceModel{kind, sites, spacing, light_speed};
}

bool Region::contains(int site) const {
  return std::binary_search(sites.begin(), sites.end(), site);
}

std::string Region::to_string() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < sites.size(); ++i) {
    if (i) os << ",";
    os << sites[i];
  }
  os << "}";
  return os.str();
}

Region make_region(const SpaceModel& m, std::vector<int> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  for (int s : sites) {
    if (s < 0 || s >= m.sites) {
      throw StructuralError("make_region: site " + std::to_string(s) + " outside [0, " +
                            std::to_string(m.sites) + ")");
    }
  }
  return Region{std::move(sites)};
}

Region make_interval(const SpaceModel& m, int start, int width) {
  if (width < 0 || width > m.sites) {
    throw StructuralError("make_interval: width " + std::to_string(width) + " outside [0, " +
                          std::to_string(m.sites) + "]");
  }
  std::vector<int> sites;
  sites.reserve(width);
  for (int i = 0; i < width; ++i) {
    sites.push_back(((start + i) % m.sites + m.sites) % m.sites);
  }
  return make_region(m, std::move(sites));
}

Region region_union(const Region& a, const Region& b) {
  std::vector<int> out;
  out.reserve(a.sites.size() + b.sites.size());
  std::set_union(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                 std::back_inserter(out));
  return Region{std::move(out)};
}

Region region_complement(const SpaceModel& m, const Region& d) {
  std::vector<int> out;
  out.reserve(m.sites - d.size());
  for (int s = 0; s < m.sites; ++s) {
    if (!d.contains(s)) out.push_back(s);
  }
  return Region{std::move(out)};
}

bool regions_disjoint(const Region& a, const Region& b) {
  std::vector<int> tmp;
  std::set_intersection(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                        std::back_inserter(tmp));
  return tmp.empty();
}

bool region_subset(const Region& inner, const Region& outer) {
  return std::includes(outer.sites.begin(), outer.sites.end(), inner.sites.begin(),
                       inner.sites.end());
}

Region expand_region(const SpaceModel& m, const Region& d, int k) {
  if (k < 0) {
    throw StructuralError("expand_region: negative dilation");
  }
  std::set<int> acc;
  for (int s : d.sites) {
    for (int off = -k; off <= k; ++off) {
      acc.insert(((s + off) % m.sites + m.sites) % m.sites);
    }
  }
  return Region{std::vector<int>(acc.begin(), acc.end())};
}

CausalClass classify_translation(const SpaceModel& m, const Translation& a) {
  const double reach = m.light_speed * std::abs(a.time);
  const double span = std::abs(a.space) * m.spacing;
  const double slack = 1e-12 * std::max({1.0, reach, span});
  if (reach > span + slack) return CausalClass::timelike;
  if (span > reach + slack) return CausalClass::spacelike;
  return CausalClass::lightlike;
}

double region_distance(const SpaceModel& m, const Region& a, const Region& b) {
  if (a.empty() || b.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  int best = m.sites;
  for (int i : a.sites) {
    for (int j : b.sites) {
      const int raw = std::abs(i - j);
      best = std::min(best, std::min(raw, m.sites - raw));
    }
  }
  return best * m.spacing;
}

bool is_spacelike_clear(const SpaceModel& m, const Region& a, const Region& b, double t) {
  if (t < 0.0 || !std::isfinite(t)) {
    throw StructuralError("is_spacelike_clear: t must be finite and >= 0");
  }
  return m.light_speed * t < region_distance(m, a, b);
}

Region shift_region(const SpaceModel& m, const Region& d, int steps) {
  std::vector<int> out;
  out.reserve(d.sites.size());
  for (int s : d.sites) {
    out.push_back(((s + steps) % m.sites + m.sites) % m.sites);
  }
  std::sort(out.begin(), out.end());
  return Region{std::move(out)};
}

NavDecomposition nav_decompose(const SpaceModel& m, const Translation& a) {
  if (classify_translation(m, a) != CausalClass::spacelike) {
    throw StructuralError("nav_decompose: translation (t=" + std::to_string(a.time) +
                          ", s=" + std::to_string(a.space) + ") is not spacelike");
  }
  NavDecomposition out;
  switch (m.kind) {
    case ModelKind::circle:
      out.status = NavDecomposition::Status::not_applicable;
      return out;
    case ModelKind::line_distinguished_frame:
      // The distinguished frame admits exactly one timelike direction, so no
      // spacelike translation is a difference of timelike ones.
      out.status = NavDecomposition::Status::none;
      return out;
    case ModelKind::line_isotropic: {
      const double T = std::abs(a.space) * m.spacing / m.light_speed + 1.0 +
                       std::max(0.0, -a.time);
      out.status = NavDecomposition::Status::decomposed;
      out.b = Translation{a.time + T, a.space};
      out.c = Translation{T, 0};
      return out;
    }
  }
  return out;
}

std::vector<Region> covering_blocks(const SpaceModel& m, int block) {
  if (block < 1 || block > m.sites) {
    throw StructuralError("covering_blocks: block width " + std::to_string(block) +
                          " outside [1, " + std::to_string(m.sites) + "]");
  }
  std::vector<Region> out;
  int start = 0;
  while (start < m.sites) {
    const int width = (m.sites - start < 2 * block) ? (m.sites - start) : block;
    out.push_back(make_interval(m, start, width));
    start += width;
  }
  return out;
}

std::vector<Region> nested_chain(const SpaceModel& m, const Region& target) {
  if (target.empty()) {
    throw StructuralError("nested_chain: target region is empty");
  }
  if (target.size() == m.sites) {
    throw StructuralError("nested_chain: target is the whole lattice, no strict supersets exist");
  }
  // Dilations shrink toward the target; keep the chain strictly decreasing
  // and every member a proper subset of the lattice.
  std::vector<Region> chain;
  const int kmax = std::max(1, m.sites / 16);
  for (int k : {3 * kmax, 2 * kmax, kmax, 0}) {
    Region r = expand_region(m, target, k);
    if (r.size() >= m.sites) continue;
    if (!chain.empty() && chain.back().size() <= r.size()) continue;
    chain.push_back(std::move(r));
  }
  if (chain.empty() || !(chain.back() == target)) {
    chain.push_back(target);
  }
  return chain;
}

std::vector<Region> covering_with(const SpaceModel& m, const Region& d) {
  if (d.empty()) {
    throw StructuralError("covering_with: anchor region is empty");
  }
  std::vector<Region> out{d};
  Region rest = region_complement(m, d);
  const int block = std::max(1, m.sites / 4);
  std::vector<int> chunk;
  for (int s : rest.sites) {
    chunk.push_back(s);
    if (static_cast<int>(chunk.size()) == block) {
      out.push_back(make_region(m, chunk));
      chunk.clear();
    }
  }
  if (!chunk.empty()) out.push_back(make_region(m, chunk));
  return out;
}

std::vector<std::vector<Region>> make_families(const SpaceModel& m, FamilyMode mode,
                                               const Region& anchor) {
  switch (mode) {
    case FamilyMode::disjoint_covering:
      return {covering_blocks(m, std::max(1, m.sites / 8)),
              covering_blocks(m, std::max(2, m.sites / 4))};
    case FamilyMode::nested_to:
      return {nested_chain(m, anchor)};
    case FamilyMode::covering_with:
      return {covering_with(m, anchor)};
  }
  return {};
}

}  // namespace spacetime
}  // namespace loclab
