#pragma once

// The Banach *-algebra A* of linear functionals on a finite quantum group:
// convolution, the involution f*(x) = conj(f(S(x)*)), the dual C*-norm,
// positivity and states, block-sign Jordan splitting, the Fourier transform
// onto the representation blocks, and the dual quantum group with biduality.
//
// Functionals are covectors in the presentation's dual basis.  Their
// "coefficient blocks" are the matrices of values against the matrix units
// of the underlying algebra; positivity and the norm are read off blockwise.

#include <optional>
#include <utility>
#include <vector>

#include "fqg/algebra.hpp"
#include "fqg/common.hpp"
#include "fqg/quantum_group.hpp"
#include "fqg/rng.hpp"

namespace fqg {

// --- convolution and involution (low-level + quantum-group wrappers) --------

/// (a (x) b) applied to the columns of a comultiplication matrix.
Functional convolve_with(const Mat& comul, const Functional& a, const Functional& b);

/// a*(x) = conj(a(k(x)*)) for an antipode-like coordinate map k.
Functional star_with(const Mat& invol, const Mat& antipode, const Functional& a);

Functional convolve(const QuantumGroup& qg, const Functional& a, const Functional& b);
Functional star(const QuantumGroup& qg, const Functional& a);

/// n-fold convolution power; n = 0 gives the counit.
Functional convolution_power(const QuantumGroup& qg, const Functional& a, long n);

/// u is Hermitian when u(x*) = conj(u(x)).
bool is_hermitian_functional(const AlgebraPresentation& pres, const Functional& a,
                             double tol = 1e-9);
/// The Hermitian adjoint x |-> conj(a(x*)); fixed points are the Hermitian
/// functionals.
Functional hermitian_adjoint(const AlgebraPresentation& pres, const Functional& a);

// --- coefficient blocks ------------------------------------------------------

/// Values of f against the matrix units, arranged per block.
std::vector<Mat> coefficient_blocks(const BlockStructure& blocks, const Functional& f);
/// Inverse of coefficient_blocks.
Functional functional_from_blocks(const BlockStructure& blocks, const std::vector<Mat>& coeff);

std::vector<Mat> coefficient_blocks(const QuantumGroup& qg, const Functional& f);
Functional functional_from_blocks(const QuantumGroup& qg, const std::vector<Mat>& coeff);

// --- norm, positivity, Jordan splitting --------------------------------------

/// Dual C*-norm: the sum of the trace norms of the coefficient blocks;
/// equals sup{|f(x)| : operator_norm(x) <= 1}.
double functional_norm(const BlockStructure& blocks, const Functional& f);
double functional_norm(const QuantumGroup& qg, const Functional& f);

/// Positive iff every coefficient block is PSD within tol (measured as the
/// sup-distance of each block from the PSD cone).
bool is_positive_functional(const BlockStructure& blocks, const Functional& f, double tol = 1e-9);
bool is_positive_functional(const QuantumGroup& qg, const Functional& f, double tol = 1e-9);

/// State = positive and f(1) = 1 within tol.
bool is_state(const AlgebraPresentation& pres, const BlockStructure& blocks, const Functional& f,
              double tol = 1e-9);
bool is_state(const QuantumGroup& qg, const Functional& f, double tol = 1e-9);

/// Splits f = plus - minus when every coefficient block is PSD or NSD
/// (then |f| = |plus| + |minus|); empty when some block is indefinite or
/// not Hermitian.
std::optional<std::pair<Functional, Functional>> jordan_split(const BlockStructure& blocks,
                                                              const Functional& f,
                                                              double tol = 1e-9);
std::optional<std::pair<Functional, Functional>> jordan_split(const QuantumGroup& qg,
                                                              const Functional& f,
                                                              double tol = 1e-9);

// --- Fourier transform --------------------------------------------------------

/// Per representation class alpha, the matrix f^(alpha)_{ij} = f(u^alpha_{ij}).
/// Convolution becomes the blockwise matrix product and the involution the
/// blockwise conjugate transpose.
struct FourierImage {
  std::vector<Mat> blocks_img;
};

FourierImage fourier(const QuantumGroup& qg, const Functional& f);
Functional inverse_fourier(const QuantumGroup& qg, const FourierImage& img);

// --- dual quantum group ---------------------------------------------------------

/// The dual: carrier A* with convolution as product, counit as unit,
/// f* as involution; comultiplication dual to the product of A; antipode
/// f |-> f o S; Haar = the normalized block-trace functional.  The double
/// dual has literally identical structure tensors.
QuantumGroup dual_quantum_group(const QuantumGroup& qg, const QgOptions& opts = {});

/// Entrywise comparison of all structure tensors of two quantum groups
/// realized on the same coordinate space (canonical identifications only,
/// no basis search).
Report compare_structures(const QuantumGroup& a, const QuantumGroup& b, double tol = 1e-7);

// --- random draws (shared by the property batteries) ---------------------------

Functional random_functional(int dim, CounterRng& rng);
/// Random state: independent Ginibre-squared coefficient blocks, normalized.
Functional random_state(const QuantumGroup& qg, CounterRng& rng);
/// Random Hermitian functional with f(1) = 0.
Functional random_centered_hermitian(const QuantumGroup& qg, CounterRng& rng);

}  // namespace fqg
