#pragma once

#include "fqg/functionals.hpp"
#include "fqg/quantum_group.hpp"

namespace fqg {

/// Poisson-type presentation of a generator: u = rate * (jump - phi) with phi
/// an idempotent state and jump a phi-bi-invariant state.  exp_phi(generator)
/// is then a state of Poisson type.
struct PoissonDecomposition {
  Functional phi;
  double rate = 0.0;
  Functional jump;
  Functional generator;
};

/// Exponential with respect to the idempotent state phi, which acts as the
/// unit for convolution of phi-bi-invariant functionals:
///   exp_phi(u) = phi + sum_{k>=1} u^{*k} / k!
/// The series is truncated once the factorial tail bound drops below tol.
/// Throws DomainError if phi is not an idempotent state or u is not
/// phi-bi-invariant.
Functional exp_phi(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                   double tol = 1e-12);

/// Logarithm with respect to phi: log_phi(u) = -sum_{k>=1} (phi - u)^{*k} / k,
/// defined for phi-bi-invariant u with ||u - phi|| < 1 (RadiusError otherwise).
/// Inverse to exp_phi within the usual radii: exp_phi(log_phi(u)) = u when the
/// series converges, and log_phi(exp_phi(w)) = w when ||w|| < log 2.
Functional log_phi(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                   double tol = 1e-12);

/// True when the Hermitian, phi-bi-invariant functional u is positive on the
/// null ideal of phi: u(x*x) >= 0 whenever phi(x*x) = 0.  The null space is
/// read off the PSD Gram matrix G_ij = phi(e_i* e_j) (singular values below
/// 1e-10 times the largest are treated as zero) and u is tested for positive
/// semi-definiteness on it.  Throws DomainError if u is not Hermitian or not
/// phi-bi-invariant.
bool is_conditionally_positive(const QuantumGroup& qg, const Functional& phi,
                               const Functional& u, double tol = 1e-9);

/// Decomposes a generator u (Hermitian, phi-bi-invariant, u(1) = 0,
/// conditionally positive) as u = rate * (jump - phi) with jump a
/// phi-bi-invariant state.  The rate is minimal: 1/rate is the largest t for
/// which phi + t*u stays a positive functional (found by bisection, 60
/// rounds).  u = 0 yields rate 0 and jump = phi.  Throws DomainError when a
/// precondition fails.
PoissonDecomposition levy_decompose(const QuantumGroup& qg, const Functional& phi,
                                    const Functional& u, double tol = 1e-9);

/// Convolution semigroup member omega_t = exp_phi(t * u) for a generator
/// u = r(v - phi); omega_0 = phi, omega_s * omega_t = omega_{s+t}, and each
/// omega_t is a state.  Throws DomainError if u fails the generator
/// preconditions or t < 0.
Functional semigroup_state(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                           double t, double tol = 1e-9);

}  // namespace fqg
