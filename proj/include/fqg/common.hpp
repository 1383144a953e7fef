#pragma once

// Shared scalar/matrix aliases, error types and the residual-report structure
// used by every verification routine in the library.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fqg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Cov = Eigen::RowVectorXcd;  // covector: a linear functional in coordinates

/// An element of a finite-dimensional algebra, as coordinates in the
/// presentation basis.
using AlgebraElement = Vec;

/// A linear functional on the algebra, as a covector in the dual basis.
using Functional = Cov;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Input data is malformed (shape mismatch, bad JSON, invalid group table).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition of an operation does not hold.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structure-constant data fails an algebraic axiom beyond tolerance.
struct AxiomViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A spectral decomposition could not be carried out (non-semisimple input,
/// missing identity, ...).
struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerically degenerate spectrum / ill-conditioned transform.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A series argument lies outside its convergence radius.
struct RadiusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration failed to converge within its budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Residual reports
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// A list of named residual checks; `passed()` is the conjunction.
struct Report {
  std::vector<CheckResult> checks;

  void add(const std::string& name, double residual, double tol) {
    checks.push_back({name, residual, tol, residual <= tol});
  }
  void add_flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 0.0 : 1.0, 0.5, ok});
  }
  void merge(const Report& other, const std::string& prefix = "") {
    for (const auto& c : other.checks)
      checks.push_back({prefix + c.name, c.residual, c.tol, c.pass});
  }
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.residual);
    return m;
  }
  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Small dense-tensor helpers
// ---------------------------------------------------------------------------

/// Kronecker product with the first factor major:
/// (A (x) B)((i*rB+k),(j*cB+l)) = A(i,j) B(k,l).
inline Mat kron(const Mat& A, const Mat& B) {
  Mat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

/// Tensor coordinates of x (x) y: (x (x) y)_{i*dim(y)+j} = x_i y_j.
inline Vec kron_vec(const Vec& x, const Vec& y) {
  Vec z(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    z.segment(i * y.size(), y.size()) = x(i) * y;
  return z;
}

inline Cov kron_cov(const Cov& x, const Cov& y) {
  Cov z(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    z.segment(i * y.size(), y.size()) = x(i) * y;
  return z;
}

inline double sup_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double sup_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double sup_abs(const Cov& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace fqg
