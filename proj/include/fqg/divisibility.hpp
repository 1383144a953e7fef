#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fqg/hypergroups.hpp"
#include "fqg/poisson.hpp"

namespace fqg {

/// A state omega together with convolution roots at strictly increasing
/// indices: roots[j] raised to the convolution power indices[j] reproduces
/// omega, and consecutive entries divide each other:
/// roots[j] = roots[j+1]^{* (indices[j+1]/indices[j])}.
struct RootChain {
  Functional omega;
  std::vector<long long> indices;
  std::vector<Functional> roots;
};

/// Outcome of a root search: either a chain or a failure message naming the
/// first obstruction (branch-cut eigenvalue, non-positive candidate, ...).
struct RootSearchOutcome {
  std::optional<RootChain> chain;
  std::string failure;          // empty on success
  int failed_depth = -1;        // level at which the search stopped
  double clip_magnitude = 0.0;  // total PSD clipping applied to accepted roots
  bool ok() const { return failure.empty(); }
};

/// Searches for an n-th root chain of depth levels: roots at indices
/// n, n^2, ..., n^depth, each obtained from the previous level by principal
/// per-block matrix roots of the transform image (spectra touching the
/// negative real axis, ties at the cut, and defective blocks are rejected).
/// When the image is commutative (all blocks one-dimensional) and the branch
/// space is small, a deterministic branch enumeration backs up the principal
/// choice.  Candidates must be states: block eigenvalues >= -1e-9, negatives
/// are clipped and the total clip magnitude reported.
RootSearchOutcome root_chain_search(const QuantumGroup& qg, const Functional& omega, long long n,
                                    int depth, double tol = 1e-9);

/// The canonical n-th root exp_phi(generator / n) of a Poisson state.
Functional poisson_root(const QuantumGroup& qg, const PoissonDecomposition& dec, long long n);

/// Chain depth D at which an n-th root chain supports generator extraction by
/// extrapolation: the polynomial extrapolation through the nodes 1, 1/n, ...,
/// n^{-D} has accuracy of the order of the product of the nodes, so D is the
/// smallest depth with D(D+1)/2 * log10(n) >= 9, plus one spare level so that
/// the stabilization estimate itself has converged.  At least 3.
int recommended_chain_depth(long long n);

/// For a self-adjoint projection p and contractions a, b with a = ap = pa and
/// ab = p, verifies the a-priori surprising consequence a*a = aa* = p.
/// Preconditions are rechecked and violations throw DomainError.
Report verify_projection_unitarity(const Mat& a, const Mat& b, const Mat& p, double tol = 1e-9);

/// Convolution form of the same fact: states u, v with u bi-invariant under
/// the idempotent state phi and u * v = phi satisfy
/// adjoint(u) * u = u * adjoint(u) = phi.  Verified both on the transform
/// images (via verify_projection_unitarity per block) and directly on the
/// functionals.  Precondition violations throw DomainError.
Report convolution_unitarity_from_inverse(const QuantumGroup& qg, const Functional& phi,
                                          const Functional& u, const Functional& v,
                                          double tol = 1e-8);

struct StateOrder {
  int order = 0;
  bool is_character = false;  // multiplicative on the underlying algebra
};

/// For a state u with u * u^adj = u^adj * u = counit, returns the least
/// n <= dim(carrier) with the n-th convolution power equal to the counit,
/// together with a multiplicativity flag.  Throws DomainError when u is not
/// a state or not convolution-unitary, and AxiomViolationError when no order
/// within the dimension bound exists (the theory rules that out).
StateOrder unitary_state_order(const Hypergroup& hg, const Functional& u, double tol = 1e-8);
StateOrder unitary_state_order(const QuantumGroup& qg, const Functional& u, double tol = 1e-8);

/// For a phi-bi-invariant state u whose restriction has a state inverse
/// modulo phi (equivalently: a unitary transform image on the carrier of
/// phi), the least m <= carrier dimension with u^{*m} = phi.  Throws
/// DomainError when u is not a bi-invariant state or no state inverse
/// exists.
int order_mod_idempotent(const QuantumGroup& qg, const Functional& u, const Functional& phi,
                         double tol = 1e-8);

/// Rounds a state near an idempotent state to that idempotent: transform
/// blocks are Hermitized and their eigenvalues snapped to {0, 1} at the 1/2
/// threshold.  Throws ConvergenceError when the result is not an idempotent
/// state.
Functional capture_idempotent(const QuantumGroup& qg, const Functional& near, double tol = 1e-7);

/// From a root chain of a state omega, captures the limiting idempotent phi
/// and extracts the Poisson generator: the chain must have strictly
/// increasing indices (condition 1), roots bi-invariant under the captured
/// idempotent (condition 2), the divisor-chain property (condition 3), and
/// roots approaching phi (condition 4, some root within distance 1/2).
/// Violations throw DomainError naming the condition.  Returns the
/// minimal-rate decomposition of the extracted generator; the exponential of
/// the generator is verified to reproduce omega.
PoissonDecomposition capture_and_extract(const QuantumGroup& qg, const RootChain& chain,
                                         double tol = 1e-8);

/// Quantitative diagnostics of a root chain: per-root mass at the counit
/// block of the carrier, the distance identity ||root - phi|| = 2(1 - mass),
/// the Hoelder inequality between weighted Schatten norms of the transform
/// images, the key bound (weighted power sum <= mass once mass >= 1/2), the
/// uniform decay product sup_k n_k ||root_k - phi||, and the generator
/// extracted as the limit of n_k (root_k - phi) by polynomial extrapolation.
struct DecayDiagnostics {
  Report report;
  Functional phi;                     // captured idempotent
  Functional generator;               // extrapolated limit of n_k (root_k - phi)
  double decay_constant = 0.0;        // sup_k n_k ||root_k - phi||
  std::vector<double> counit_masses;  // per root, coefficient at the counit block
  std::vector<double> min_singulars;  // per root, least singular value of the image
};

DecayDiagnostics root_decay_diagnostics(const QuantumGroup& qg, const RootChain& chain,
                                        double tol = 1e-7);

/// Finds a state of convolution order two other than the counit (a point
/// mass at an involution or a sign character), when one exists.
std::optional<Functional> find_order_two_character(const QuantumGroup& qg, double tol = 1e-10);

/// End-to-end battery: for every idempotent state, random Poisson states are
/// generated (at least twenty per quantum group in total), root chains at
/// index lcm(1..dim) are searched, the generator is recovered both by
/// capture_and_extract and by the decay diagnostics, and the roots are
/// matched against the canonical ones.  Where a state of order two exists,
/// its mixtures with the counit are confirmed to fail the root search
/// exactly when the counit weight drops below 1/2.  The Haar state and the
/// counit are confirmed Poisson with vanishing rate.
Report divisibility_suite(const QuantumGroup& qg, int samples_per_idempotent = 4,
                          std::uint64_t seed = 0xd1f1d, double tol = 1e-6);

}  // namespace fqg
