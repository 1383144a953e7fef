#include "fqg/poisson.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "fqg/hypergroups.hpp"
#include "fqg/idempotents.hpp"

namespace fqg {

namespace {

// Shared preconditions of the phi-relative calculus: phi must be an idempotent
// state (the convolution unit of the bi-invariant subspace) and the argument
// must live in that subspace.
void require_calculus_context(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                              const std::string& who) {
  if (!is_idempotent_state(qg, phi, 1e-8)) {
    throw DomainError(who + ": reference functional is not an idempotent state");
  }
  if (!is_bi_invariant(qg, phi, u, 1e-8)) {
    throw DomainError(who + ": argument is not bi-invariant under the idempotent state");
  }
}

cplx value_at_unit(const QuantumGroup& qg, const Functional& u) {
  return cplx(u * qg.algebra.unit);
}

// Generator preconditions shared by levy_decompose and semigroup_state.
void require_generator(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                       const std::string& who, double tol) {
  if (!is_hermitian_functional(qg.algebra, u, 1e-8)) {
    throw DomainError(who + ": generator is not Hermitian");
  }
  require_calculus_context(qg, phi, u, who);
  if (std::abs(value_at_unit(qg, u)) > 1e-8 * (1.0 + sup_abs(u))) {
    throw DomainError(who + ": generator does not vanish at the unit");
  }
  if (!is_conditionally_positive(qg, phi, u, tol)) {
    throw DomainError(who + ": generator is not conditionally positive");
  }
}

}  // namespace

Functional exp_phi(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                   double tol) {
  require_calculus_context(qg, phi, u, "exp_phi");
  const double nu = functional_norm(qg, u);
  const double tail_factor = std::exp(nu);
  Functional result = phi;
  Functional term = phi;  // convolution power 0 relative to phi
  double term_bound = 1.0;
  for (long k = 1; k <= 100000; ++k) {
    term = Functional(convolve(qg, term, u) / double(k));
    result += term;
    term_bound *= nu / double(k);
    if (nu < double(k + 1) && term_bound * tail_factor < tol) return result;
  }
  throw ConvergenceError("exp_phi: series did not meet its tail bound");
}

Functional log_phi(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                   double tol) {
  require_calculus_context(qg, phi, u, "log_phi");
  const Functional w = Functional(phi - u);
  const double q = functional_norm(qg, w);
  if (q >= 1.0) {
    throw RadiusError("log_phi: distance to the idempotent state is " + std::to_string(q) +
                      ", outside the convergence radius 1");
  }
  Functional result = Functional::Zero(u.size());
  Functional power = phi;  // convolution power 0 relative to phi
  for (long k = 1; k <= 5000000; ++k) {
    power = convolve(qg, power, w);
    result -= power / double(k);
    const double tail = std::pow(q, double(k + 1)) / (double(k + 1) * (1.0 - q));
    if (tail < tol) return result;
  }
  throw ConvergenceError("log_phi: series did not meet its tail bound");
}

bool is_conditionally_positive(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                               double tol) {
  const AlgebraPresentation& alg = qg.algebra;
  if (!is_hermitian_functional(alg, u, 1e-8)) {
    throw DomainError("is_conditionally_positive: functional is not Hermitian");
  }
  require_calculus_context(qg, phi, u, "is_conditionally_positive");
  const int d = alg.dim;

  // Null space of phi: kernel of the PSD Gram matrix G_ij = phi(e_i* e_j).
  std::vector<Vec> starred(d);
  for (int i = 0; i < d; ++i) starred[i] = alg.star(Vec(Vec::Unit(d, i)));
  Mat gram(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      gram(i, j) = cplx(phi * alg.product(starred[i], Vec(Vec::Unit(d, j))));
    }
  }
  gram = 0.5 * (gram + gram.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const double cutoff = 1e-10 * std::max(1e-300, es.eigenvalues().maxCoeff());
  std::vector<int> null_cols;
  for (int i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) < cutoff) null_cols.push_back(i);
  }
  if (null_cols.empty()) return true;

  const int s = static_cast<int>(null_cols.size());
  Mat basis(d, s);
  for (int t = 0; t < s; ++t) basis.col(t) = es.eigenvectors().col(null_cols[t]);
  Mat m(s, s);
  for (int t = 0; t < s; ++t) {
    const Vec yt_star = alg.star(Vec(basis.col(t)));
    for (int r = 0; r < s; ++r) {
      m(t, r) = cplx(u * alg.product(yt_star, Vec(basis.col(r))));
    }
  }
  m = 0.5 * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Mat> ms(m);
  const double scale = std::max(1.0, ms.eigenvalues().cwiseAbs().maxCoeff());
  return ms.eigenvalues().minCoeff() >= -tol * scale;
}

PoissonDecomposition levy_decompose(const QuantumGroup& qg, const Functional& phi,
                                    const Functional& u, double tol) {
  require_generator(qg, phi, u, "levy_decompose", tol);
  PoissonDecomposition dec;
  dec.phi = phi;
  // Below the resolution of the positivity test the minimal rate is
  // numerically indistinguishable from zero; bisecting on such noise would
  // report a spurious finite rate.
  const double nu = functional_norm(qg, u);
  if (nu <= 1e-8) {
    dec.rate = 0.0;
    dec.jump = phi;
    dec.generator = Functional::Zero(phi.size());
    return dec;
  }
  dec.generator = u;
  const auto positive_at = [&](double t) {
    return is_positive_functional(qg, Functional(phi + t * u), 1e-10);
  };
  // phi + t*u has value 1 at the unit, and a positive functional has norm equal
  // to that value, so positivity forces t*||u|| - 1 <= 1: the search interval
  // [0, 2/||u||] is exhaustive.
  double t_max = 2.0 / nu;
  if (!positive_at(t_max)) {
    double lo = 0.0;
    double hi = t_max;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (positive_at(mid) ? lo : hi) = mid;
    }
    t_max = lo;
  }
  dec.rate = 1.0 / t_max;
  dec.jump = Functional(phi + t_max * u);
  return dec;
}

Functional semigroup_state(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                           double t, double tol) {
  if (t < 0.0) throw DomainError("semigroup_state: time must be nonnegative");
  require_generator(qg, phi, u, "semigroup_state", tol);
  return exp_phi(qg, phi, Functional(t * u));
}

}  // namespace fqg
