#pragma once

// Finite quantum groups: a semisimple *-algebra presentation together with a
// comultiplication, counit, antipode and Haar state, all in coordinates.
//
// Conventions:
//   comul    is d^2 x d; column t holds the tensor coordinates of D(e_t),
//            with tensor index (j,k) -> j*d + k.
//   counit   is a covector; antipode acts on coordinates as a d x d matrix.
//   haar     is a covector (a state).
//
// The irreducible representation table is obtained by decomposing the dual
// convolution algebra (A*, *) into matrix blocks and pulling back the dual
// basis of its matrix units; class alpha contributes elements u^a_{ij} with
//   D(u_{ij}) = sum_k u_{ik} (x) u_{kj},  eps(u_{ij}) = delta_{ij}.

#include <cstdint>
#include <string>
#include <vector>

#include "fqg/algebra.hpp"
#include "fqg/common.hpp"

namespace fqg {

struct IrrepClass {
  int n = 0;
  // column a*n+b = coordinates of u_{ab} in the presentation basis
  Mat coeff;
};

struct IrrepTable {
  std::vector<IrrepClass> classes;
  int trivial_index = -1;
  // column (class-major, entry a*n+b) = coords of u^alpha_{ab}; invertible d x d
  Mat coeff_basis;
  // row in the same order = covector of the dual matrix unit; inverse of coeff_basis
  Mat dual_units;
  BlockStructure dual_blocks;       // blocks of the convolution dual presentation
  AlgebraPresentation dual_algebra; // (A*, convolution, counit-as-unit)

  int offset(int alpha) const {
    int off = 0;
    for (int b = 0; b < alpha; ++b) off += classes[b].n * classes[b].n;
    return off;
  }
  int total_dim() const {
    int d = 0;
    for (const auto& c : classes) d += c.n * c.n;
    return d;
  }
};

struct QuantumGroup {
  AlgebraPresentation algebra;
  BlockStructure blocks;  // blocks of the underlying algebra
  Mat comul;
  Cov counit;
  Mat antipode;
  Cov haar;
  IrrepTable irr;

  int dim() const { return algebra.dim; }
};

// --- coalgebra index helpers -------------------------------------------------

/// m : A (x) A -> A, multiplication applied to tensor coordinates.
Vec multiply_tensor_legs(const AlgebraPresentation& pres, const Vec& X);
/// Contract the first leg with a functional: (phi (x) id)(X).
Vec contract_first(const Cov& phi, const Vec& X, int d);
/// Contract the second leg with a functional: (id (x) phi)(X).
Vec contract_second(const Cov& phi, const Vec& X, int d);

// --- dual convolution algebra ------------------------------------------------

/// Presentation of (A*, convolution): product dual to comul, unit = counit,
/// involution f* = conj(f(S(.)*)).
AlgebraPresentation dual_presentation(const AlgebraPresentation& pres, const Mat& comul,
                                      const Cov& counit, const Mat& antipode);

// --- construction ------------------------------------------------------------

struct QgOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0x5eed0fULL;
};

/// Assemble a quantum group: verifies the algebra axioms, decomposes the
/// algebra and its convolution dual, computes the Haar state from invariance
/// (a provided Haar covector is only cross-checked, never trusted), and
/// builds the representation table.
QuantumGroup make_quantum_group(const AlgebraPresentation& pres, const Mat& comul,
                                const Cov& counit, const Mat& antipode,
                                const Cov* provided_haar = nullptr, const QgOptions& opts = {});

/// Solve for the unique bi-invariant normalized functional.  Throws
/// AxiomViolationError when the invariance system has no one-dimensional
/// solution space.
Cov haar_state(const AlgebraPresentation& pres, const Mat& comul, double tol = 1e-9);

/// Representation table from the convolution dual: decompose the dual
/// algebra, take its matrix-unit covectors, and invert to get the matrix
/// coefficients.  Works for any carrier whose convolution dual is a
/// *-algebra (the antipode-like map supplies the dual involution).
IrrepTable build_irrep_table(const AlgebraPresentation& pres, const Mat& comul,
                             const Cov& counit, const Mat& antipode, const QgOptions& opts = {});

/// Full verification battery: algebra axioms, comultiplication axioms,
/// counit/antipode laws, Haar invariance + recomputation, trace property,
/// Kac relations (S^2 = id, * S * S = id), and representation-table laws.
Report verify_cqg(const QuantumGroup& qg, double tol = 1e-9);

/// Orthogonality relations for matrix coefficients:
/// h(u^a_{ij} (u^b_{kl})*) = h((u^a_{ij})* u^b_{kl}) = d_ab d_ik d_jl / n_a.
Report check_orthogonality(const QuantumGroup& qg, double tol = 1e-8);

// --- classical constructors ---------------------------------------------------

using GroupTable = std::vector<std::vector<int>>;

/// Validates closure, associativity, identity and inverses; returns the
/// identity element's index.  Throws StructuralError on failure.
int validate_group_table(const GroupTable& table);

/// Functions on a finite group: pointwise product, D(e_g) = sum_{hk=g} e_h (x) e_k.
QuantumGroup function_algebra(const GroupTable& table, const QgOptions& opts = {});

/// Group algebra: convolution product, every basis element group-like.
QuantumGroup group_algebra(const GroupTable& table, const QgOptions& opts = {});

// --- builtins ------------------------------------------------------------------

GroupTable cyclic_table(int n);
GroupTable klein_table();
GroupTable s3_table();

/// Names: c:Z2 c:Z3 c:Z4 c:Z2xZ2 c:S3 (function algebras) and g:... (group
/// algebras).  Throws StructuralError for unknown names.
QuantumGroup builtin_quantum_group(const std::string& name, const QgOptions& opts = {});
std::vector<std::string> builtin_names();

}  // namespace fqg
