#include "loclab/modelzoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace loclab {
namespace zoo {

using opkernel::OpClass;
using spacetime::CausalClass;
using spacetime::ModelKind;

namespace {

// Fourier machinery for one lattice factor. Mode numbers run over
// (-N/2, N/2]; momentum eigenvalues are 2*pi*mode / (N * spacing).
int mode_number(int k, int n) { return (k <= n / 2) ? k : k - n; }

Matrix dft_matrix(int n) {
  Matrix f(n, n);
  const double w = 2.0 * M_PI / n;
  for (int x = 0; x < n; ++x) {
    for (int k = 0; k < n; ++k) {
      const double phi = w * x * mode_number(k, n);
      f(x, k) = Complex(std::cos(phi), std::sin(phi)) / std::sqrt(double(n));
    }
  }
  return f;
}

std::vector<double> momentum_values(const SpaceModel& m) {
  std::vector<double> p(m.sites);
  for (int k = 0; k < m.sites; ++k) {
    p[k] = 2.0 * M_PI * mode_number(k, m.sites) / (m.sites * m.spacing);
  }
  return p;
}

double dispersion_value(Dispersion kind, double p, double mass) {
  switch (kind) {
    case Dispersion::zero: return 0.0;
    case Dispersion::nonrelativistic: return p * p / (2.0 * mass);
    case Dispersion::relativistic: return std::sqrt(p * p + mass * mass);
    case Dispersion::momentum: return p;
  }
  return 0.0;
}

// Eigensystem with columns sorted by ascending eigenvalue (stable in the
// original column index, so construction is deterministic).
SpectralDecomposition sorted_spec(const std::vector<double>& w, const Matrix& v) {
  const int n = static_cast<int>(w.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return w[a] < w[b]; });
  SpectralDecomposition sd;
  sd.eigenvalues.resize(n);
  sd.eigenvectors.resize(v.rows(), n);
  for (int i = 0; i < n; ++i) {
    sd.eigenvalues[i] = w[idx[i]];
    sd.eigenvectors.col(i) = v.col(idx[i]);
  }
  return sd;
}

Matrix shift_permutation(int n) {
  Matrix s = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    s((x + 1) % n, x) = 1.0;
  }
  return s;
}

Matrix indicator_matrix(const SpaceModel& m, const Region& d) {
  Matrix e = Matrix::Zero(m.sites, m.sites);
  for (int s : d.sites) e(s, s) = 1.0;
  return e;
}

Operator indicator(const SpaceModel& m, const Region& d) {
  return Operator::make(indicator_matrix(m, d), OpClass::projection);
}

// Tilted-generator family. Isotropic models combine the time generator with
// the spatial one; elsewhere only pure time translations are decreed.
std::function<Operator(const Translation&)> tilted_family(const SpaceModel& model,
                                                          const Operator& h,
                                                          const std::optional<Operator>& p) {
  return [model, h, p](const Translation& b) {
    if (spacetime::classify_translation(model, b) != CausalClass::timelike) {
      throw StructuralError("hamiltonian_of: translation (t=" + std::to_string(b.time) +
                            ", s=" + std::to_string(b.space) + ") is not timelike");
    }
    if (model.kind == ModelKind::line_isotropic) {
      if (!p.has_value()) {
        throw StructuralError("hamiltonian_of: no spatial generator on this system");
      }
      Matrix g = b.time * h.mat + (b.space * model.spacing) * p->mat;
      return Operator::make(std::move(g), OpClass::hermitian);
    }
    if (b.space != 0) {
      throw StructuralError(
          "hamiltonian_of: only pure time translations are in this model's symmetry data");
    }
    return Operator::make(Matrix(b.time * h.mat), OpClass::hermitian);
  };
}

void require_circle(const SpaceModel& m, const char* who) {
  if (m.kind != ModelKind::circle) {
    throw StructuralError(std::string(who) + ": requires a circle model, got " +
                          spacetime::to_string(m.kind));
  }
}

void require_region_on(const SpaceModel& m, const Region& d, const char* who) {
  if (d.empty()) {
    throw StructuralError(std::string(who) + ": anchor region is empty");
  }
  for (int s : d.sites) {
    if (s < 0 || s >= m.sites) {
      throw StructuralError(std::string(who) + ": anchor region leaves the lattice");
    }
  }
}

Region scale_region(const SpaceModel& from, const Region& d, int to_sites) {
  // Proportional transport of an anchor region across refinement levels.
  const double ratio = static_cast<double>(to_sites) / from.sites;
  const int start = d.sites.empty() ? 0 : d.sites.front();
  const int width = d.size();
  const int new_start = static_cast<int>(std::lround(start * ratio)) % to_sites;
  const int new_width = std::max(1, static_cast<int>(std::lround(width * ratio)));
  SpaceModel scaled = from;
  scaled.sites = to_sites;
  scaled.spacing = from.length() / to_sites;
  return spacetime::make_interval(scaled, new_start, std::min(new_width, to_sites));
}

}  // namespace

const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::sharp: return "sharp";
    case SystemKind::unsharp: return "unsharp";
    case SystemKind::number: return "number";
  }
  return "sharp";
}

const char* to_string(Dispersion d) {
  switch (d) {
    case Dispersion::zero: return "zero";
    case Dispersion::nonrelativistic: return "nonrelativistic";
    case Dispersion::relativistic: return "relativistic";
    case Dispersion::momentum: return "momentum";
  }
  return "zero";
}

LocalizationSystem build_standard(const SpaceModel& m, Dispersion kind, double mass) {
  if ((kind == Dispersion::nonrelativistic || kind == Dispersion::relativistic) &&
      !(mass > 0.0)) {
    throw StructuralError("build_standard: mass must be positive for this dispersion");
  }
  const int n = m.sites;
  Matrix f = dft_matrix(n);
  std::vector<double> p = momentum_values(m);
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = dispersion_value(kind, p[k], mass);

  CVector wdiag(n), pdiag(n);
  for (int k = 0; k < n; ++k) {
    wdiag[k] = w[k];
    pdiag[k] = p[k];
  }
  Matrix hmat = f * wdiag.asDiagonal() * f.adjoint();
  hmat = (hmat + hmat.adjoint()).eval() / 2.0;
  Matrix pmat = f * pdiag.asDiagonal() * f.adjoint();
  pmat = (pmat + pmat.adjoint()).eval() / 2.0;

  LocalizationSystem sys;
  sys.kind = SystemKind::sharp;
  sys.name = (kind == Dispersion::momentum) ? "momentum_hamiltonian"
                                            : std::string("standard_") + to_string(kind);
  sys.summary = std::string("position indicators, ") + to_string(kind) + " dispersion";
  sys.model = m;
  sys.unitaries.hamiltonian = Operator::make(std::move(hmat), OpClass::hermitian);
  sys.unitaries.h_spec = sorted_spec(w, f);
  sys.unitaries.shift = Operator::make(shift_permutation(n), OpClass::unitary);
  sys.unitaries.momentum = Operator::make(std::move(pmat), OpClass::hermitian);
  sys.unitaries.hamiltonian_of =
      tilted_family(m, sys.unitaries.hamiltonian, sys.unitaries.momentum);
  SpaceModel model = m;
  sys.localize = [model](const Region& d) { return indicator(model, d); };
  const double length = m.length();
  sys.refine = [kind, mass, model, length](int sites) {
    SpaceModel scaled = model;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_standard(scaled, kind, mass);
  };
  if (kind == Dispersion::momentum) {
    sys.commensurate_dt = m.spacing / m.light_speed;
  }
  return sys;
}

LocalizationSystem build_tensor_counterexample(const SpaceModel& m, double mass,
                                               const Region& d0) {
  require_region_on(m, d0, "build_tensor_counterexample");
  if (d0.size() == m.sites) {
    throw StructuralError("build_tensor_counterexample: anchor must be a proper region");
  }
  if (m.sites > 32) {
    throw StructuralError(
        "build_tensor_counterexample: doubled construction squares the dimension; "
        "lattice capped at 32 sites (asked for " + std::to_string(m.sites) + ")");
  }
  LocalizationSystem inner = build_standard(m, Dispersion::nonrelativistic, mass);
  const int n = m.sites;
  Operator e0 = indicator(m, d0);
  Operator id_factor = Operator::identity(n);

  LocalizationSystem sys;
  sys.kind = SystemKind::sharp;
  sys.name = "tensor_counterexample";
  sys.summary = "doubled lattice; assignments carry a fixed second factor the dynamics moves";
  sys.model = m;
  sys.unitaries.hamiltonian =
      opkernel::tensor_product(id_factor, inner.unitaries.hamiltonian);

  // Eigensystem of I (x) H from the factor eigensystem: each factor pair
  // (w_k, v_k) lifts to n columns e_i (x) v_k.
  const SpectralDecomposition& in = inner.unitaries.h_spec;
  SpectralDecomposition sd;
  sd.eigenvalues.resize(n * n);
  sd.eigenvectors = Matrix::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) {
      const int col = a * n + i;
      sd.eigenvalues[col] = in.eigenvalues[a];
      sd.eigenvectors.block(i * n, col, n, 1) = in.eigenvectors.col(a);
    }
  }
  sys.unitaries.h_spec = std::move(sd);
  sys.unitaries.shift = opkernel::tensor_product(inner.unitaries.shift, id_factor);
  sys.unitaries.momentum =
      opkernel::tensor_product(*inner.unitaries.momentum, id_factor);
  sys.unitaries.hamiltonian_of =
      tilted_family(m, sys.unitaries.hamiltonian, sys.unitaries.momentum);
  SpaceModel model = m;
  sys.localize = [model, e0](const Region& d) {
    return opkernel::tensor_product(indicator(model, d), e0);
  };
  sys.refinement_sizes = {8, 16, 32};
  SpaceModel base = m;
  const double length = m.length();
  sys.refine = [base, mass, d0, length](int sites) {
    SpaceModel scaled = base;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_tensor_counterexample(scaled, mass, scale_region(base, d0, sites));
  };
  return sys;
}

LocalizationSystem build_frozen(const SpaceModel& m, double mass) {
  LocalizationSystem sys = build_standard(m, Dispersion::nonrelativistic, mass);
  sys.name = "frozen";
  sys.summary = "position indicators decreed time-independent over nontrivial dynamics";
  sys.frozen_assignment = true;
  SpaceModel base = m;
  const double length = m.length();
  sys.refine = [base, mass, length](int sites) {
    SpaceModel scaled = base;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_frozen(scaled, mass);
  };
  return sys;
}

LocalizationSystem build_pathological(const SpaceModel& m, double mass, const Region& d0,
                                      PathologyMode mode) {
  require_region_on(m, d0, "build_pathological");
  LocalizationSystem sys = build_standard(m, Dispersion::nonrelativistic, mass);
  sys.name = (mode == PathologyMode::only_d0) ? "pathological_only_d0"
                                              : "pathological_all_but_d0";
  sys.summary = (mode == PathologyMode::only_d0)
                    ? "assignment vanishes everywhere except one anchored region"
                    : "assignment is the identity everywhere except one anchored region";
  SpaceModel model = m;
  Operator e0 = indicator(m, d0);
  sys.localize = [model, d0, e0, mode](const Region& d) {
    if (d == d0) return e0;
    return (mode == PathologyMode::only_d0) ? Operator::zero(model.sites)
                                            : Operator::identity(model.sites);
  };
  SpaceModel base = m;
  const double length = m.length();
  sys.refine = [base, mass, d0, mode, length](int sites) {
    SpaceModel scaled = base;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_pathological(scaled, mass, scale_region(base, d0, sites), mode);
  };
  return sys;
}

LocalizationSystem build_cylinder_threshold(const SpaceModel& m) {
  require_circle(m, "build_cylinder_threshold");
  LocalizationSystem sys = build_standard(m, Dispersion::nonrelativistic, 1.0);
  sys.name = "cylinder_threshold";
  sys.summary = "indicator I exactly when normalized measure reaches 2/3, else 0";
  sys.measure_class_assignment = true;
  SpaceModel model = m;
  sys.localize = [model](const Region& d) {
    // 3|d| >= 2N in exact integer arithmetic; no floating measure comparison.
    const bool above = 3 * d.size() >= 2 * model.sites;
    return above ? Operator::identity(model.sites) : Operator::zero(model.sites);
  };
  SpaceModel base = m;
  const double length = m.length();
  sys.refine = [base, length](int sites) {
    SpaceModel scaled = base;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_cylinder_threshold(scaled);
  };
  return sys;
}

LocalizationSystem build_measure_effect(const SpaceModel& m) {
  require_circle(m, "build_measure_effect");
  LocalizationSystem sys = build_standard(m, Dispersion::nonrelativistic, 1.0);
  sys.kind = SystemKind::unsharp;
  sys.name = "measure_effect";
  sys.summary = "scalar effect: normalized measure times the identity";
  sys.measure_class_assignment = true;
  SpaceModel model = m;
  sys.localize = [model](const Region& d) {
    const double mu = model.measure(d);
    Matrix a = mu * Matrix::Identity(model.sites, model.sites);
    return Operator::make(std::move(a), OpClass::effect);
  };
  SpaceModel base = m;
  const double length = m.length();
  sys.refine = [base, length](int sites) {
    SpaceModel scaled = base;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_measure_effect(scaled);
  };
  return sys;
}

LocalizationSystem build_dirac_positive(const SpaceModel& m, double mass) {
  if (!(mass > 0.0)) {
    throw StructuralError("build_dirac_positive: mass must be positive (massless modes would "
                          "make the positive subspace ill-defined)");
  }
  const int n = m.sites;
  // Same Fourier-multiplier momentum as the scalar systems. On the doubled
  // space the positive branch fills half the spectrum, and compressing a
  // position indicator to it pushes the top of the spectrum strictly inside
  // (0, 1). The gap below 1 shrinks exponentially with the region's site
  // count, roughly exp(-pi^2 w / log(4n)) at the most favorable spacing and
  // faster elsewhere, so it is resolvable at narrow widths and falls below
  // double precision for regions wider than a couple dozen sites. No local
  // redefinition of the momentum moves that floor; it is a property of
  // half-filled translation-covariant bands, not of the discretization.
  Matrix f = dft_matrix(n);
  std::vector<double> pvals = momentum_values(m);
  CVector pdiag(n);
  for (int k = 0; k < n; ++k) pdiag[k] = pvals[k];
  Matrix pmat = f * pdiag.asDiagonal() * f.adjoint();
  pmat = (pmat + pmat.adjoint()).eval() / 2.0;
  Operator p_op = Operator::make(std::move(pmat), OpClass::hermitian);
  Operator shift_op = Operator::make(shift_permutation(n), OpClass::unitary);

  Matrix alpha(2, 2), beta(2, 2);
  alpha << 0, 1, 1, 0;
  beta << 1, 0, 0, -1;
  Operator alpha_op = Operator::make(alpha, OpClass::hermitian);
  Operator beta_op = Operator::make(beta, OpClass::hermitian);
  Operator id2 = Operator::identity(2);

  Matrix hd = opkernel::tensor_product(p_op, alpha_op).mat +
              mass * opkernel::tensor_product(Operator::identity(n), beta_op).mat;
  SpectralDecomposition full = opkernel::eig_hermitian(
      Operator::make(std::move(hd), OpClass::hermitian));

  int positive = 0;
  for (int i = 0; i < 2 * n; ++i) {
    if (full.eigenvalues[i] > 0) ++positive;
  }
  if (positive != n) {
    throw StructuralError("build_dirac_positive: expected " + std::to_string(n) +
                          " positive modes, found " + std::to_string(positive));
  }
  // Ascending order puts the positive branch in the last n columns. The
  // positive eigenbasis is the system's computational basis.
  Matrix vpos = full.eigenvectors.rightCols(n);
  CVector wpos(n);
  for (int i = 0; i < n; ++i) wpos[i] = full.eigenvalues[n + i];

  LocalizationSystem sys;
  sys.kind = SystemKind::unsharp;
  sys.name = "dirac_positive";
  sys.summary = "position indicators compressed to the positive-energy subspace";
  sys.model = m;
  sys.unitaries.hamiltonian =
      Operator::make(Matrix(wpos.asDiagonal()), OpClass::hermitian);
  SpectralDecomposition sd;
  sd.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) sd.eigenvalues[i] = wpos[i].real();
  sd.eigenvectors = Matrix::Identity(n, n);
  sys.unitaries.h_spec = std::move(sd);

  Matrix shift2 = opkernel::tensor_product(shift_op, id2).mat;
  sys.unitaries.shift = Operator::make(Matrix(vpos.adjoint() * shift2 * vpos),
                                       OpClass::unitary);
  Matrix p2 = opkernel::tensor_product(p_op, id2).mat;
  Matrix ppos = vpos.adjoint() * p2 * vpos;
  ppos = (ppos + ppos.adjoint()).eval() / 2.0;
  sys.unitaries.momentum = Operator::make(std::move(ppos), OpClass::hermitian);
  sys.unitaries.hamiltonian_of =
      tilted_family(m, sys.unitaries.hamiltonian, sys.unitaries.momentum);

  SpaceModel model = m;
  Matrix vp = vpos;
  sys.localize = [model, vp](const Region& d) {
    Matrix e2 = Matrix::Zero(2 * model.sites, 2 * model.sites);
    for (int s : d.sites) {
      e2(2 * s, 2 * s) = 1.0;
      e2(2 * s + 1, 2 * s + 1) = 1.0;
    }
    Matrix a = vp.adjoint() * e2 * vp;
    a = (a + a.adjoint()).eval() / 2.0;
    return Operator::make(std::move(a), OpClass::effect);
  };
  SpaceModel base = m;
  const double length = m.length();
  sys.refine = [base, mass, length](int sites) {
    SpaceModel scaled = base;
    scaled.sites = sites;
    scaled.spacing = length / sites;
    return build_dirac_positive(scaled, mass);
  };
  return sys;
}

namespace {

int bit_parity_below(unsigned mask, int site) {
  // Count of occupied sites strictly below `site`.
  const unsigned below = mask & ((1u << site) - 1u);
  return __builtin_popcount(below) & 1;
}

}  // namespace

LocalizationSystem build_lattice_fock(int sites, double hopping, double spacing) {
  if (sites < 4 || sites > 10) {
    throw StructuralError("build_lattice_fock: sites must lie in [4, 10], got " +
                          std::to_string(sites) + " (dimension is 2^sites)");
  }
  if (!(hopping > 0.0)) {
    throw StructuralError("build_lattice_fock: hopping must be positive");
  }
  const int dim = 1 << sites;
  SpaceModel m = spacetime::make_model(ModelKind::circle, sites, spacing);

  // Nearest-neighbor hopping with the usual string signs; built from the
  // directed terms -J c†_a c_b for b -> a = b+1 and its reverse.
  Matrix h0 = Matrix::Zero(dim, dim);
  for (int x = 0; x < sites; ++x) {
    const int pairs[2][2] = {{(x + 1) % sites, x}, {x, (x + 1) % sites}};
    for (auto& ab : pairs) {
      const int a = ab[0], b = ab[1];
      for (unsigned mask = 0; mask < static_cast<unsigned>(dim); ++mask) {
        if (!(mask & (1u << b)) || (mask & (1u << a))) continue;
        const int sign_b = bit_parity_below(mask, b);
        const unsigned removed = mask ^ (1u << b);
        const int sign_a = bit_parity_below(removed, a);
        const unsigned out = removed | (1u << a);
        h0(out, mask) += -hopping * ((sign_a + sign_b) % 2 ? -1.0 : 1.0);
      }
    }
  }
  SpectralDecomposition raw =
      opkernel::eig_hermitian(Operator::make(h0, OpClass::hermitian));
  const double ground = raw.eigenvalues.minCoeff();
  Matrix hmat = h0 - ground * Matrix::Identity(dim, dim);

  LocalizationSystem sys;
  sys.kind = SystemKind::number;
  sys.name = "lattice_fock";
  sys.summary = "fermionic occupation sums with ground-shifted hopping dynamics";
  sys.model = m;
  sys.unitaries.hamiltonian = Operator::make(std::move(hmat), OpClass::hermitian);
  SpectralDecomposition sd;
  sd.eigenvalues = (raw.eigenvalues.array() - ground).matrix();
  sd.eigenvectors = raw.eigenvectors;
  sys.unitaries.h_spec = std::move(sd);

  // One-site rotation lifted to occupation space; the sign is the parity of
  // the reordering the rotation induces on occupied sites.
  Matrix s = Matrix::Zero(dim, dim);
  for (unsigned mask = 0; mask < static_cast<unsigned>(dim); ++mask) {
    std::vector<int> shifted;
    for (int x = 0; x < sites; ++x) {
      if (mask & (1u << x)) shifted.push_back((x + 1) % sites);
    }
    unsigned out = 0;
    for (int q : shifted) out |= (1u << q);
    int inversions = 0;
    for (size_t i = 0; i < shifted.size(); ++i) {
      for (size_t j = i + 1; j < shifted.size(); ++j) {
        if (shifted[i] > shifted[j]) ++inversions;
      }
    }
    s(out, mask) = (inversions % 2) ? -1.0 : 1.0;
  }
  sys.unitaries.shift = Operator::make(std::move(s), OpClass::unitary);
  sys.unitaries.hamiltonian_of =
      tilted_family(m, sys.unitaries.hamiltonian, std::nullopt);

  sys.localize = [sites, dim](const Region& d) {
    Matrix nd = Matrix::Zero(dim, dim);
    for (unsigned mask = 0; mask < static_cast<unsigned>(dim); ++mask) {
      int count = 0;
      for (int x : d.sites) {
        if (mask & (1u << x)) ++count;
      }
      nd(mask, mask) = count;
    }
    return Operator::make(std::move(nd), OpClass::hermitian);
  };
  sys.refinement_sizes = {4, 6, 8};
  sys.refine = [hopping, spacing](int n) { return build_lattice_fock(n, hopping, spacing); };
  return sys;
}

Operator evolution(const LocalizationSystem& s, double t) {
  const SpectralDecomposition& sd = s.unitaries.h_spec;
  const int n = static_cast<int>(sd.eigenvalues.size());
  CVector phases(n);
  for (int i = 0; i < n; ++i) {
    const double a = t * sd.eigenvalues[i];
    phases[i] = Complex(std::cos(a), std::sin(a));
  }
  Matrix u = sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint();
  return Operator::make(std::move(u), OpClass::unitary);
}

StateVector evolve(const LocalizationSystem& s, const StateVector& psi, double t) {
  const SpectralDecomposition& sd = s.unitaries.h_spec;
  if (psi.dim() != static_cast<int>(sd.eigenvalues.size())) {
    throw StructuralError("evolve: state dimension " + std::to_string(psi.dim()) +
                          " does not match the system dimension");
  }
  CVector phi = sd.eigenvectors.adjoint() * psi.v;
  for (int i = 0; i < phi.size(); ++i) {
    const double a = t * sd.eigenvalues[i];
    phi[i] *= Complex(std::cos(a), std::sin(a));
  }
  return StateVector::make(sd.eigenvectors * phi);
}

Operator localize_op(const LocalizationSystem& s, const Region& d, double t) {
  Operator base = s.localize(d);
  if (s.frozen_assignment || t == 0.0) {
    return base;
  }
  Operator u = evolution(s, t);
  Matrix conj = u.mat * base.mat * u.mat.adjoint();
  if (base.hint == OpClass::projection || base.hint == OpClass::effect ||
      base.hint == OpClass::hermitian) {
    conj = (conj + conj.adjoint()).eval() / 2.0;
  }
  return Operator::make(std::move(conj), base.hint);
}

void validate_system(const LocalizationSystem& s,
                     const std::vector<Region>& sample_regions) {
  for (const Region& d : sample_regions) {
    Operator op = s.localize(d);
    opkernel::ClassReport r = opkernel::classify(op);
    switch (s.kind) {
      case SystemKind::sharp:
        if (!r.projection) {
          throw StructuralError("validate_system: sharp assignment on " + d.to_string() +
                                " is not a projection (|A²-A| = " +
                                std::to_string(r.projection_residual) + ")");
        }
        break;
      case SystemKind::unsharp:
        if (!r.effect) {
          throw StructuralError("validate_system: unsharp assignment on " + d.to_string() +
                                " is not an effect");
        }
        break;
      case SystemKind::number:
        if (!r.hermitian || r.min_eigenvalue < -1e-10) {
          throw StructuralError("validate_system: number assignment on " + d.to_string() +
                                " is not a nonnegative hermitian operator");
        }
        break;
    }
  }
  for (double t : {0.37, 1.1}) {
    evolution(s, t);  // make() validates unitarity
  }
  // shift^sites = 1 via binary powering.
  Matrix acc = Matrix::Identity(s.unitaries.shift.dim(), s.unitaries.shift.dim());
  Matrix base = s.unitaries.shift.mat;
  int e = s.model.sites;
  while (e > 0) {
    if (e & 1) acc = (acc * base).eval();
    base = (base * base).eval();
    e >>= 1;
  }
  const double res = opkernel::operator_norm(
      Matrix(acc - Matrix::Identity(acc.rows(), acc.cols())));
  if (res > 1e-10) {
    throw StructuralError("validate_system: shift^sites deviates from identity by " +
                          std::to_string(res));
  }
}

}  // namespace zoo
}  // namespace loclab
