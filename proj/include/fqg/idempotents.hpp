#pragma once

// Idempotent states: states f with f * f = f under convolution.  They are
// the quantum analogues of uniform measures on subgroups: invariant under
// the antipode, with Fourier blocks that are self-adjoint projections.
// Provides the predicate, a property report, Cesaro limits of convolution
// powers, and a desk-scale enumeration of all idempotent states.

#include <cstdint>
#include <vector>

#include "fqg/common.hpp"
#include "fqg/functionals.hpp"
#include "fqg/quantum_group.hpp"

namespace fqg {

/// True when f is a state and |f * f - f| < tol in the dual C*-norm.
bool is_idempotent_state(const QuantumGroup& qg, const Functional& f, double tol = 1e-9);

/// Residual report for the structural facts every idempotent state obeys:
/// antipode invariance f o S = f and Fourier blocks that are self-adjoint
/// idempotents.  Throws DomainError when f is not an idempotent state.
Report check_idempotent_properties(const QuantumGroup& qg, const Functional& f,
                                   double tol = 1e-8);

/// Cesaro limit of the convolution powers of a state: the averages
/// (1/N) sum_{k=1..N} f^{*k} along N = 2^j.  The limit is an idempotent
/// state.  Throws DomainError when f is not a state and ConvergenceError
/// when the averages fail to settle.
Functional cesaro_idempotent(const QuantumGroup& qg, const Functional& f, double tol = 1e-10,
                             int max_doublings = 80);

struct IdempotentEnumeration {
  std::vector<Functional> states;          // deterministic order
  std::vector<std::vector<int>> ranks;     // Fourier block ranks per state
};

/// All idempotent states, found by sweeping Fourier rank patterns with
/// randomized seeding, alternating projections, and Newton polishing.
/// Deterministic for a fixed seed.  Guarded to dimension <= 8.
IdempotentEnumeration enumerate_idempotents_bruteforce(const QuantumGroup& qg,
                                                       double tol = 1e-9,
                                                       std::uint64_t seed = 0x1de3a7e5u);

}  // namespace fqg
