#include "loclab/opkernel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace loclab {
namespace opkernel {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void require_square_finite(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw StructuralError(std::string(who) + ": operator must be square and nonempty, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw StructuralError(std::string(who) + ": operator has non-finite entries");
  }
}

double hermitian_residual(const Matrix& m) { return operator_norm(Matrix(m - m.adjoint())); }

// Tolerances for the class-hint claims. Projection/unitary/effect are
// absolute; the hermitian check scales with the operator size.
constexpr double kUnitaryTol = 1e-10;
constexpr double kProjectionTol = 1e-10;
constexpr double kEffectTol = 1e-10;

double hermitian_tol(const Matrix& m) { return 1e-12 * std::max(1.0, operator_norm(m)); }

}  // namespace

const char* to_string(OpClass c) {
  switch (c) {
    case OpClass::general: return "general";
    case OpClass::hermitian: return "hermitian";
    case OpClass::unitary: return "unitary";
    case OpClass::projection: return "projection";
    case OpClass::effect: return "effect";
  }
  return "general";
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  // Largest singular value via the top eigenvalue of A†A. The Gram matrix is
  // hermitian PSD up to roundoff; clamp tiny negatives before the sqrt.
  Matrix gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

double operator_norm(const Operator& a) { return operator_norm(a.mat); }

Operator Operator::make(Matrix m, OpClass hint) {
  require_square_finite(m, "Operator::make");
  const double herm = (hint == OpClass::general || hint == OpClass::unitary)
                          ? 0.0
                          : hermitian_residual(m);
  switch (hint) {
    case OpClass::general:
      break;
    case OpClass::hermitian: {
      const double tol = hermitian_tol(m);
      if (herm > tol) {
        throw StructuralError("hint hermitian but |A - A†| = " + fmt(herm) + " exceeds " + fmt(tol));
      }
      break;
    }
    case OpClass::unitary: {
      Matrix id = Matrix::Identity(m.rows(), m.cols());
      const double r = operator_norm(Matrix(m * m.adjoint() - id));
      if (r > kUnitaryTol) {
        throw StructuralError("hint unitary but |AA† - I| = " + fmt(r) + " exceeds " + fmt(kUnitaryTol));
      }
      break;
    }
    case OpClass::projection: {
      const double tol = hermitian_tol(m);
      if (herm > tol) {
        throw StructuralError("hint projection but |A - A†| = " + fmt(herm) + " exceeds " + fmt(tol));
      }
      const double r = operator_norm(Matrix(m * m - m));
      if (r > kProjectionTol) {
        throw StructuralError("hint projection but |A² - A| = " + fmt(r) + " exceeds " +
                              fmt(kProjectionTol));
      }
      break;
    }
    case OpClass::effect: {
      const double tol = hermitian_tol(m);
      if (herm > tol) {
        throw StructuralError("hint effect but |A - A†| = " + fmt(herm) + " exceeds " + fmt(tol));
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((m + m.adjoint()) / 2.0),
                                               Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      if (lo < -kEffectTol || hi > 1.0 + kEffectTol) {
        throw StructuralError("hint effect but spectrum [" + fmt(lo) + ", " + fmt(hi) +
                              "] leaves [0, 1] by more than " + fmt(kEffectTol));
      }
      break;
    }
  }
  Operator out;
  out.mat = std::move(m);
  out.hint = hint;
  return out;
}

Operator Operator::zero(int n) { return make(Matrix::Zero(n, n), OpClass::projection); }

Operator Operator::identity(int n) { return make(Matrix::Identity(n, n), OpClass::projection); }

StateVector StateVector::make(CVector v) {
  if (v.size() == 0 || !v.allFinite()) {
    throw StructuralError("StateVector: empty or non-finite vector");
  }
  const double n = v.norm();
  if (std::abs(n - 1.0) > 1e-12) {
    throw StructuralError("StateVector: norm " + fmt(n) + " is not 1 within 1e-12");
  }
  return StateVector{std::move(v)};
}

StateVector StateVector::normalized(CVector v) {
  if (v.size() == 0 || !v.allFinite()) {
    throw StructuralError("StateVector: empty or non-finite vector");
  }
  const double n = v.norm();
  if (n < 1e-14) {
    throw StructuralError("StateVector: cannot normalize a (near-)zero vector, norm = " + fmt(n));
  }
  return StateVector{v / n};
}

SpectralDecomposition eig_hermitian(const Operator& a) {
  require_square_finite(a.mat, "eig_hermitian");
  const double herm = hermitian_residual(a.mat);
  const double tol = hermitian_tol(a.mat);
  if (herm > tol) {
    throw StructuralError("eig_hermitian: |A - A†| = " + fmt(herm) + " exceeds " + fmt(tol));
  }
  // Symmetrize before solving so the validated residual is the only error
  // source the caller sees.
  Matrix sym = (a.mat + a.mat.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw StructuralError("eig_hermitian: eigensolver failed to converge");
  }
  return SpectralDecomposition{es.eigenvalues(), es.eigenvectors()};
}

Operator apply_spectral_function(const Operator& a,
                                 const std::function<Complex(double)>& f) {
  SpectralDecomposition sd = eig_hermitian(a);
  const int n = a.dim();
  CVector fw(n);
  bool all_real = true, all_unimodular = true, all_binary = true, in_unit_interval = true;
  for (int i = 0; i < n; ++i) {
    const Complex y = f(sd.eigenvalues[i]);
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) {
      throw DomainError("apply_spectral_function: f undefined at eigenvalue " +
                        fmt(sd.eigenvalues[i]));
    }
    fw[i] = y;
    if (std::abs(y.imag()) > 1e-13) all_real = false;
    if (std::abs(std::abs(y) - 1.0) > 1e-13) all_unimodular = false;
    if (std::min(std::abs(y), std::abs(y - 1.0)) > 1e-13) all_binary = false;
    if (y.real() < -1e-13 || y.real() > 1.0 + 1e-13) in_unit_interval = false;
  }
  Matrix out = sd.eigenvectors * fw.asDiagonal() * sd.eigenvectors.adjoint();
  OpClass hint = OpClass::general;
  if (all_real && all_binary) {
    hint = OpClass::projection;
    out = (out + out.adjoint()).eval() / 2.0;
  } else if (all_real && in_unit_interval) {
    hint = OpClass::effect;
    out = (out + out.adjoint()).eval() / 2.0;
  } else if (all_real) {
    hint = OpClass::hermitian;
    out = (out + out.adjoint()).eval() / 2.0;
  } else if (all_unimodular) {
    hint = OpClass::unitary;
  }
  return Operator::make(std::move(out), hint);
}

Operator tensor_product(const Operator& a, const Operator& b) {
  require_square_finite(a.mat, "tensor_product");
  require_square_finite(b.mat, "tensor_product");
  const int na = a.dim(), nb = b.dim();
  Matrix out(na * nb, na * nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a.mat(i, j) * b.mat;
    }
  }
  OpClass hint = (a.hint == b.hint) ? a.hint : OpClass::general;
  // Mixed hermitian-family products stay hermitian.
  auto hermitian_like = [](OpClass c) {
    return c == OpClass::hermitian || c == OpClass::projection || c == OpClass::effect;
  };
  if (a.hint != b.hint && hermitian_like(a.hint) && hermitian_like(b.hint)) {
    hint = OpClass::hermitian;
  }
  return Operator::make(std::move(out), hint);
}

double commutator_norm(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) {
    throw StructuralError("commutator_norm: dimension mismatch " + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()));
  }
  return operator_norm(Matrix(a.mat * b.mat - b.mat * a.mat));
}

namespace {

void require_projection(const Operator& p, const char* who) {
  const double herm = hermitian_residual(p.mat);
  const double idem = operator_norm(Matrix(p.mat * p.mat - p.mat));
  if (herm > hermitian_tol(p.mat) || idem > kProjectionTol) {
    throw StructuralError(std::string(who) + ": input is not a projection (|A - A†| = " +
                          fmt(herm) + ", |A² - A| = " + fmt(idem) + ")");
  }
}

}  // namespace

Operator lattice_join(const std::vector<Operator>& ps) {
  if (ps.empty()) {
    throw StructuralError("lattice_join: empty input (dimension would be ambiguous)");
  }
  const int n = ps.front().dim();
  Matrix sum = Matrix::Zero(n, n);
  for (const Operator& p : ps) {
    if (p.dim() != n) {
      throw StructuralError("lattice_join: dimension mismatch across inputs");
    }
    require_projection(p, "lattice_join");
    sum += p.mat;
  }
  // Range of the sum = span of the ranges. Eigenvalues of a projection sum
  // are >= 0; anything above the rank cutoff belongs to the span.
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((sum + sum.adjoint()) / 2.0));
  constexpr double kRankCut = 1e-8;
  Matrix join = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues()[i] > kRankCut) {
      join += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
  }
  join = (join + join.adjoint()).eval() / 2.0;
  return Operator::make(std::move(join), OpClass::projection);
}

Operator lattice_meet(const std::vector<Operator>& ps) {
  if (ps.empty()) {
    throw StructuralError("lattice_meet: empty input (dimension would be ambiguous)");
  }
  const int n = ps.front().dim();
  std::vector<Operator> complements;
  complements.reserve(ps.size());
  for (const Operator& p : ps) {
    if (p.dim() != n) {
      throw StructuralError("lattice_meet: dimension mismatch across inputs");
    }
    require_projection(p, "lattice_meet");
    complements.push_back(
        Operator::make(Matrix(Matrix::Identity(n, n) - p.mat), OpClass::projection));
  }
  Operator joined = lattice_join(complements);
  Matrix meet = Matrix::Identity(n, n) - joined.mat;
  meet = (meet + meet.adjoint()).eval() / 2.0;
  return Operator::make(std::move(meet), OpClass::projection);
}

ClassReport classify(const Operator& a) {
  require_square_finite(a.mat, "classify");
  ClassReport r;
  r.hermitian_residual = hermitian_residual(a.mat);
  const int n = a.dim();
  Matrix id = Matrix::Identity(n, n);
  r.unitary_residual = operator_norm(Matrix(a.mat * a.mat.adjoint() - id));
  r.projection_residual = operator_norm(Matrix(a.mat * a.mat - a.mat));
  r.hermitian = r.hermitian_residual <= hermitian_tol(a.mat);
  r.unitary = r.unitary_residual <= kUnitaryTol;
  r.projection = r.hermitian && r.projection_residual <= kProjectionTol;
  if (r.hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((a.mat + a.mat.adjoint()) / 2.0),
                                             Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.max_eigenvalue = es.eigenvalues().maxCoeff();
    r.effect = r.min_eigenvalue >= -kEffectTol && r.max_eigenvalue <= 1.0 + kEffectTol;
  }
  return r;
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller without caching keeps the stream position predictable.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

Matrix Rng::random_hermitian(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = Complex(normal(), normal());
    }
  }
  return (m + m.adjoint()).eval() / 2.0;
}

Matrix Rng::random_unitary(int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g(i, j) = Complex(normal(), normal());
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase convention so the result is a deterministic function of g.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const Complex phase = (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

Operator Rng::random_projection(int n, int rank) {
  if (rank < 0 || rank > n) {
    throw StructuralError("random_projection: rank out of range");
  }
  Matrix q = random_unitary(n);
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < rank; ++i) {
    p += q.col(i) * q.col(i).adjoint();
  }
  p = (p + p.adjoint()).eval() / 2.0;
  return Operator::make(std::move(p), OpClass::projection);
}

CVector Rng::random_vector(int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = Complex(normal(), normal());
  }
  return v;
}

}  // namespace opkernel
}  // namespace loclab
