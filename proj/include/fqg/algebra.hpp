#pragma once

// Finite-dimensional *-algebras over C given by structure constants, and
// their numerical block (Artin-Wedderburn) decompositions.
//
// A presentation fixes a basis e_0..e_{d-1} and stores
//   e_i e_j = sum_k mul[k](i,j) e_k,   the unit's coordinates, and
//   x* = invol * conj(x)               (coordinatewise antilinear involution).
//
// A BlockStructure realizes the algebra as a direct sum of full matrix
// blocks M_{n_1} (+) ... (+) M_{n_m}: `iso` maps presentation coordinates to
// flattened matrix-unit coordinates, turning the product into block-matrix
// multiplication and the involution into the blockwise conjugate transpose.

#include <optional>
#include <vector>

#include "fqg/common.hpp"
#include "fqg/rng.hpp"

namespace fqg {

struct AlgebraPresentation {
  int dim = 0;
  std::vector<Mat> mul;  // mul[k](i,j) = coefficient of e_k in e_i e_j
  Vec unit;
  Mat invol;

  Vec product(const Vec& x, const Vec& y) const;
  /// Matrix of left multiplication by x: (L_x y) = product(x, y).
  Mat left_op(const Vec& x) const;
  /// Matrix of right multiplication by y.
  Mat right_op(const Vec& y) const;
  Vec star(const Vec& x) const;

  /// Normalized trace of the left regular representation,
  /// tau(x) = Tr(L_x)/dim; faithful and positive on semisimple input.
  Cov regular_trace() const;
  /// Gram matrix G(i,j) = tau(e_i* e_j) of the GNS inner product of tau.
  Mat gns_gram() const;
};

struct BlockStructure {
  std::vector<int> sizes;
  Mat iso;      // presentation coords -> matrix-unit coords
  Mat iso_inv;  // matrix-unit coords  -> presentation coords

  int dim() const {
    int d = 0;
    for (int n : sizes) d += n * n;
    return d;
  }
  int block_offset(int k) const {
    int off = 0;
    for (int l = 0; l < k; ++l) off += sizes[l] * sizes[l];
    return off;
  }
  /// The k-th block of x as an n_k x n_k matrix.
  Mat block_of(const Vec& x, int k) const;
  /// Coordinates of the element with the given blocks.
  Vec from_blocks(const std::vector<Mat>& blocks) const;
  /// All blocks of x.
  std::vector<Mat> blocks_of(const Vec& x) const;
  /// Coordinates of the matrix unit e^k_{ab}.
  Vec matrix_unit(int k, int a, int b) const;
};

struct WedderburnOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0x5eed0fULL;
  int max_retries = 8;
};

/// Checks associativity, the unit laws and the involution axioms; returns the
/// named residuals.  Structural shape errors throw StructuralError.
Report verify_algebra(const AlgebraPresentation& pres, double tol = 1e-9);

/// Numerical Artin-Wedderburn decomposition of a semisimple presentation.
/// Blocks are canonically ordered (size ascending, then by the trace vector
/// of a fixed generic element) and their matrix-unit gauge is fixed
/// deterministically, so the result is reproducible for a given seed.
/// Throws DecompositionError for non-semisimple input and ConditioningError
/// when the randomized splitting repeatedly fails to separate spectra.
BlockStructure wedderburn(const AlgebraPresentation& pres, const WedderburnOptions& opts = {});

/// Residual check that `blocks` really transports mul / unit / invol.
Report verify_blocks(const AlgebraPresentation& pres, const BlockStructure& blocks,
                     double tol = 1e-8);

/// C*-norm of x = largest singular value over blocks.
double operator_norm(const AlgebraPresentation& pres, const BlockStructure& blocks, const Vec& x);

/// Positivity of a self-adjoint element (all block eigenvalues >= -tol).
/// Throws DomainError when x is not self-adjoint within tol.
bool is_positive_element(const AlgebraPresentation& pres, const BlockStructure& blocks,
                         const Vec& x, double tol = 1e-9);

/// Tensor product presentation; basis index (i,j) -> i*dimB + j.
AlgebraPresentation tensor(const AlgebraPresentation& A, const AlgebraPresentation& B);

/// Product of two tensor-coordinate vectors in A (x) A, without materializing
/// the tensor presentation.
Vec tensor_product_vec(const AlgebraPresentation& A, const Vec& X, const Vec& Y);

}  // namespace fqg
