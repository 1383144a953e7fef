#pragma once

// Quantum hypergroups obtained by conditioning a finite quantum group:
//   * conditional expectations attached to an idempotent state (one-sided
//     and two-sided), with their full law batteries;
//   * the hypergroup carried by the range of the two-sided expectation,
//     and the corner hypergroup p A p of a group-like projection;
//   * verification of the hypergroup axioms (complete positivity of the
//     comultiplication replaces multiplicativity);
//   * bi-invariant functional calculus, the dual hypergroup, biduality,
//     the duality between dual(A_phi) and the corner of the dual, a
//     representation table with Peter-Weyl orthogonality, and the
//     trivial-coefficient bound for positive dual elements.

#include <cstdint>

#include "fqg/algebra.hpp"
#include "fqg/common.hpp"
#include "fqg/functionals.hpp"
#include "fqg/quantum_group.hpp"
#include "fqg/rng.hpp"

namespace fqg {

// --- conditional expectations -------------------------------------------------

struct ConditionalExpectation {
  Mat map;          // d x d coordinate matrix
  Mat range_basis;  // d x d', Haar-GNS orthonormal basis of the range
};

/// E_left = (phi (x) id) o comul.  Requires an idempotent state.
ConditionalExpectation expectation_left(const QuantumGroup& qg, const Functional& phi);
/// E_right = (id (x) phi) o comul.
ConditionalExpectation expectation_right(const QuantumGroup& qg, const Functional& phi);
/// The two-sided expectation E = E_left E_right = E_right E_left.
ConditionalExpectation expectation_two_sided(const QuantumGroup& qg, const Functional& phi);

/// Laws of the one-sided expectations: star preservation, comultiplication
/// intertwining, the mixed identity, commutation, range multiplicativity,
/// idempotency, unitality.
Report check_one_sided_expectation_laws(const QuantumGroup& qg, const Functional& phi,
                                        double tol = 1e-9);
/// Laws of the two-sided expectation: star preservation, comultiplication
/// factorization, the projected-comultiplication identities, range
/// multiplicativity, idempotency, antipode commutation, Haar compatibility.
Report check_two_sided_expectation_laws(const QuantumGroup& qg, const Functional& phi,
                                        double tol = 1e-9);

// --- hypergroup type ------------------------------------------------------------

struct Hypergroup {
  AlgebraPresentation algebra;  // induced *-algebra on the carrier
  BlockStructure blocks;
  Mat comul;   // d'^2 x d', completely positive, coassociative, unital
  Cov counit;
  Mat kappa;   // involutive antiautomorphism playing the antipode's role
  Cov haar;    // normalized bi-invariant faithful state
  Mat embed;         // d x d' carrier basis inside the ambient algebra
  Mat restrict_map;  // d' x d, restrict_map * embed = identity
  Mat expectation;   // d x d ambient conditional expectation onto the carrier

  int dim() const { return algebra.dim; }
  int ambient_dim() const { return static_cast<int>(embed.rows()); }
};

/// The hypergroup on the range of the two-sided expectation of an idempotent
/// state.  Throws DomainError when phi is not an idempotent state.
Hypergroup build_hypergroup_from_idempotent(const QuantumGroup& qg, const Functional& phi,
                                            const QgOptions& opts = {});

/// Group-like projection: p = p* = p^2 != 0 with
/// comul(p)(1 (x) p) = p (x) p = comul(p)(p (x) 1) and S(p) = p.
bool is_group_like_projection(const QuantumGroup& qg, const Vec& p, double tol = 1e-9);
Report group_like_projection_report(const QuantumGroup& qg, const Vec& p, double tol = 1e-9);

/// Laws of the corner expectation a |-> pap: idempotency, star preservation,
/// bimodule property over the corner, projected comultiplication,
/// antipode commutation, counit normalization, strong invariance.
Report check_projection_expectation_laws(const QuantumGroup& qg, const Vec& p,
                                         double tol = 1e-9);

/// The hypergroup on the corner p A p of a group-like projection, with
/// comultiplication (P (x) P) o comul, counit and antipode restricted, and
/// Haar h|_{pAp} / h(p).  Throws DomainError when p is not group-like.
Hypergroup build_hypergroup_from_projection(const QuantumGroup& qg, const Vec& p,
                                            const QgOptions& opts = {});

/// A quantum group is a hypergroup (kappa = antipode, identity embedding).
Hypergroup as_hypergroup(const QuantumGroup& qg);

/// Axiom battery: induced algebra + blocks, coassociativity, unital and
/// star-preserving comultiplication, complete positivity (per-block Choi),
/// counit laws and multiplicativity, kappa laws, Haar bi-invariance,
/// faithfulness, trace property, and strong invariance.
Report verify_hypergroup(const Hypergroup& hg, double tol = 1e-8);

// --- bi-invariant functionals -----------------------------------------------------

/// u is phi-bi-invariant when phi * u = u = u * phi.
bool is_bi_invariant(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                     double tol = 1e-9);

/// Restriction of an ambient functional to the carrier.
Functional restrict_functional(const Hypergroup& hg, const Functional& u);
/// Extension u| o E of a carrier functional to the ambient algebra.
Functional extend_functional(const Hypergroup& hg, const Functional& u_sub);

/// The bi-invariance calculus for one functional u: reconstruction through
/// the expectation, norm preservation under restriction, positivity and
/// state equivalences, involution and convolution compatibility, and the
/// recovery of phi as the extension of the carrier's counit.
Report check_bi_invariance_calculus(const QuantumGroup& qg, const Functional& phi,
                                    const Hypergroup& hg, const Functional& u,
                                    double tol = 1e-9);

// --- duals and duality ---------------------------------------------------------------

/// The dual hypergroup: convolution algebra of functionals on the carrier,
/// comultiplication dual to the product, antipode omega |-> omega o kappa,
/// and the dual Haar functional transported through psi = haar o kappa.
Hypergroup hypergroup_dual(const Hypergroup& hg, const QgOptions& opts = {});

/// For an idempotent state phi: phi is a group-like projection in the dual,
/// and omega |-> omega o E is a *-isomorphism from the dual of the
/// phi-hypergroup onto the corner of the dual cut by phi, matching products,
/// involutions and comultiplications.
Report verify_duality_theorem(const QuantumGroup& qg, const Functional& phi,
                              const QgOptions& opts = {}, double tol = 1e-8);

// --- representations --------------------------------------------------------------------

/// Matrix-coefficient table of the hypergroup (classes of the convolution
/// dual pulled back through the dual matrix units).
IrrepTable hypergroup_irreps(const Hypergroup& hg, const QgOptions& opts = {});

/// Orthogonality of matrix coefficients under the Haar state: coefficients
/// of distinct classes are orthogonal, rows are orthogonal within a class,
/// each row Gram matrix is PSD and nondegenerate; the coefficient system
/// satisfies the corepresentation law, the counit law, and the dagger law
/// (u_ij)^dagger = u_ji for x^dagger = kappa(x)*.
Report verify_peter_weyl(const Hypergroup& hg, double tol = 1e-8);

/// For positive elements v = w* . w of the dual algebra: the dual Haar value
/// equals the trivial-class coefficient of v and is dominated by the value
/// of v at the carrier's unit.
Report check_trivial_coefficient_dominance(const Hypergroup& hg, int trials = 100,
                                           std::uint64_t seed = 0x4c0441ULL,
                                           double tol = 1e-9);

}  // namespace fqg
