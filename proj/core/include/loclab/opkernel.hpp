#pragma once

// Dense complex operator kernel: classification, hermitian spectral calculus,
// Kronecker products, operator norms, and the lattice of projections.
//
// Conventions used throughout:
//   * operator norm = largest singular value, computed from the
//     eigendecomposition of A†A (never from entrywise norms)
//   * spectral tolerances are absolute unless stated otherwise; class-hint
//     invariants are validated at construction and on demand

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loclab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Base error for every failure the library raises deliberately.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operator (or other object) does not satisfy a structural requirement:
// wrong shape, wrong class, non-finite entries, invalid region, ...
struct StructuralError : Error {
  using Error::Error;
};

// A scalar function was applied outside its domain (spectral calculus).
struct DomainError : Error {
  using Error::Error;
};

// Invalid experiment configuration (bad system name, bad sizes, bad JSON).
struct ConfigError : Error {
  using Error::Error;
};

namespace opkernel {

enum class OpClass { general, hermitian, unitary, projection, effect };

const char* to_string(OpClass c);

// Square complex matrix with a class hint. The hint is a validated claim:
//   hermitian:  |A - A†| <= 1e-12 * max(1, |A|)
//   unitary:    |A A† - I| <= 1e-10
//   projection: hermitian and |A² - A| <= 1e-10
//   effect:     hermitian with spectrum in [-1e-10, 1 + 1e-10]
// make() enforces the claim and throws StructuralError naming the residual.
struct Operator {
  Matrix mat;
  OpClass hint = OpClass::general;

  int dim() const { return static_cast<int>(mat.rows()); }

  static Operator make(Matrix m, OpClass hint);
  static Operator zero(int n);
  static Operator identity(int n);
};

// Eigensystem of a hermitian operator. eigenvalues ascending; eigenvector
// columns orthonormal; V diag(w) V† reconstructs the input to
// 1e-10 * max(1, |A|).
struct SpectralDecomposition {
  RVector eigenvalues;
  Matrix eigenvectors;
};

// Unit vector (2-norm within 1e-12 of 1).
struct StateVector {
  CVector v;

  int dim() const { return static_cast<int>(v.size()); }
  static StateVector make(CVector v);          // validates the norm
  static StateVector normalized(CVector v);    // rescales, rejects ~0 input
};

struct ClassReport {
  double hermitian_residual = 0;
  double unitary_residual = 0;
  double projection_residual = 0;
  double min_eigenvalue = 0;   // meaningful only when hermitian
  double max_eigenvalue = 0;
  bool hermitian = false;
  bool unitary = false;
  bool projection = false;
  bool effect = false;
};

double operator_norm(const Matrix& a);
double operator_norm(const Operator& a);

// Throws StructuralError when the input fails the hermitian invariant.
SpectralDecomposition eig_hermitian(const Operator& a);

// f applied to the spectrum: V f(w) V†. Non-finite f(w) values are domain
// errors naming the offending eigenvalue. The result's class hint is inferred
// from the values f takes on the spectrum.
Operator apply_spectral_function(const Operator& a,
                                 const std::function<Complex(double)>& f);

// Kronecker product; class hints combine (projection⊗projection is a
// projection, and similarly for hermitian/unitary/effect).
Operator tensor_product(const Operator& a, const Operator& b);

// |ab - ba| in operator norm.
double commutator_norm(const Operator& a, const Operator& b);

// Projection lattice. Join = projection onto the closed span of the ranges
// (eigenspaces of the summed projections above 1e-8); meet by De Morgan.
// Inputs must satisfy the projection invariant.
Operator lattice_join(const std::vector<Operator>& ps);
Operator lattice_meet(const std::vector<Operator>& ps);

ClassReport classify(const Operator& a);

// Deterministic RNG used wherever seeded randomness is needed. splitmix64
// core with Box-Muller normals; identical output on every platform, unlike
// std:: distributions.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64();
  double uniform();                   // [0, 1)
  double normal();                    // standard normal
  int uniform_int(int lo, int hi);    // inclusive bounds

  Matrix random_hermitian(int n);
  Matrix random_unitary(int n);       // QR of a Ginibre matrix
  Operator random_projection(int n, int rank);
  CVector random_vector(int n);
};

}  // namespace opkernel
}  // namespace loclab
