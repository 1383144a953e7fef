#include "fqg/idempotents.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fqg/rng.hpp"

namespace fqg {

namespace {

double idempotency_defect(const QuantumGroup& qg, const Functional& f) {
  return functional_norm(qg, Functional(convolve(qg, f, f) - f));
}

// Nearest self-adjoint projection of prescribed rank (spectral truncation).
Mat nearest_projection(const Mat& b, int rank) {
  const int n = static_cast<int>(b.rows());
  if (rank <= 0) return Mat::Zero(n, n);
  if (rank >= n) return Mat::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (b + b.adjoint())));
  Mat p = Mat::Zero(n, n);
  // eigenvalues ascend; keep the top `rank`
  for (int i = n - rank; i < n; ++i)
    p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

Mat psd_part(const Mat& b) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (b + b.adjoint())));
  Vec lam = es.eigenvalues().cast<cplx>();
  for (int i = 0; i < lam.size(); ++i) lam(i) = std::max(0.0, lam(i).real());
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

// Newton iteration on N(f) = f*f - f over complex covectors.
Functional newton_polish(const QuantumGroup& qg, Functional f, int max_iter) {
  const int d = qg.dim();
  for (int iter = 0; iter < max_iter; ++iter) {
    Functional defect = convolve(qg, f, f) - f;
    if (sup_abs(defect) < 1e-14) break;
    Mat jac(d, d);  // column j = directional derivative along e_j
    for (int j = 0; j < d; ++j) {
      Functional e = Functional::Zero(d);
      e(j) = 1.0;
      jac.col(j) = (convolve(qg, f, e) + convolve(qg, e, f) - e).transpose();
    }
    Vec step = jac.completeOrthogonalDecomposition().solve(Vec(-defect.transpose()));
    f += step.transpose();
    if (step.norm() < 1e-15) break;
  }
  return f;
}

std::vector<int> fourier_ranks(const QuantumGroup& qg, const Functional& f) {
  std::vector<int> out;
  for (const Mat& b : fourier(qg, f).blocks_img) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (b + b.adjoint())));
    int r = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > 0.5) ++r;
    out.push_back(r);
  }
  return out;
}

// Deterministic order: by norm, then lexicographic on (Re, Im) entries.
bool functional_less(const Functional& a, const Functional& b, double na, double nb) {
  if (std::abs(na - nb) > 1e-8) return na < nb;
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > 1e-7) return a(i).real() < b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > 1e-7) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

bool is_idempotent_state(const QuantumGroup& qg, const Functional& f, double tol) {
  if (!is_state(qg, f, tol)) return false;
  return idempotency_defect(qg, f) < tol;
}

Report check_idempotent_properties(const QuantumGroup& qg, const Functional& f, double tol) {
  if (!is_idempotent_state(qg, f, std::max(tol, 1e-9)))
    throw DomainError("check_idempotent_properties: input is not an idempotent state");
  Report rep;
  rep.add("idempotency", idempotency_defect(qg, f), tol);
  rep.add("antipode_invariance", sup_abs(Functional(f * qg.antipode - f)), tol);
  double herm = 0.0, idem = 0.0;
  for (const Mat& b : fourier(qg, f).blocks_img) {
    herm = std::max(herm, sup_abs(Mat(b - b.adjoint())));
    idem = std::max(idem, sup_abs(Mat(b * b - b)));
  }
  rep.add("fourier_blocks_self_adjoint", herm, tol);
  rep.add("fourier_blocks_idempotent", idem, tol);
  rep.add("norm_one", std::abs(functional_norm(qg, f) - 1.0), tol);
  return rep;
}

Functional cesaro_idempotent(const QuantumGroup& qg, const Functional& f, double tol,
                             int max_doublings) {
  if (!is_state(qg, f, 1e-8))
    throw DomainError("cesaro_idempotent: input must be a state");
  // T_1 = f; T_{2N} = (T_N + f^{*N} * T_N) / 2, with f^{*N} tracked by squaring.
  Functional avg = f;
  Functional pow = f;
  for (int j = 0; j < max_doublings; ++j) {
    if (j >= 4 && idempotency_defect(qg, avg) < tol) return avg;
    Functional next = 0.5 * (avg + convolve(qg, pow, avg));
    pow = convolve(qg, pow, pow);
    // Both iterates evaluate to exactly 1 at the unit; renormalizing kills
    // the exponential drift repeated squaring inflicts on rounding error.
    cplx pu = pow * qg.algebra.unit;
    if (std::abs(pu) > 0.5) pow /= pu;
    cplx au = next * qg.algebra.unit;
    if (std::abs(au) > 0.5) next /= au;
    avg = next;
  }
  if (idempotency_defect(qg, avg) < tol) return avg;
  throw ConvergenceError("cesaro_idempotent: averages did not settle");
}

IdempotentEnumeration enumerate_idempotents_bruteforce(const QuantumGroup& qg, double tol,
                                                       std::uint64_t seed) {
  if (qg.dim() > 8)
    throw DomainError("enumerate_idempotents_bruteforce: guarded to dimension <= 8");
  const auto& classes = qg.irr.classes;
  const int nc = static_cast<int>(classes.size());

  // Every rank pattern over the Fourier blocks, trivial class pinned to 1.
  std::vector<std::vector<int>> patterns(1, std::vector<int>(nc, 0));
  for (int a = 0; a < nc; ++a) {
    std::vector<std::vector<int>> grown;
    for (const auto& p : patterns) {
      if (a == qg.irr.trivial_index) {
        auto q = p;
        q[a] = 1;
        grown.push_back(q);
        continue;
      }
      for (int r = 0; r <= classes[a].n; ++r) {
        auto q = p;
        q[a] = r;
        grown.push_back(q);
      }
    }
    patterns.swap(grown);
  }

  CounterRng base(seed);
  std::vector<Functional> found;
  std::vector<double> norms;
  auto offer = [&](Functional cand) {
    cand = newton_polish(qg, cand, 40);
    if (!is_idempotent_state(qg, cand, std::min(tol, 1e-9))) return;
    for (const Functional& known : found)
      if (sup_abs(Functional(cand - known)) < 1e-6) return;
    norms.push_back(functional_norm(qg, cand));
    found.push_back(std::move(cand));
  };

  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    const std::vector<int>& pattern = patterns[pi];
    bool determined = true;
    for (int a = 0; a < nc; ++a)
      if (pattern[a] != 0 && pattern[a] != classes[a].n) determined = false;

    // Exact candidate when every block is 0 or full.
    if (determined) {
      FourierImage img;
      for (int a = 0; a < nc; ++a) {
        int n = classes[a].n;
        img.blocks_img.push_back(pattern[a] == 0 ? Mat(Mat::Zero(n, n))
                                                 : Mat(Mat::Identity(n, n)));
      }
      offer(inverse_fourier(qg, img));
      continue;
    }

    // Randomized seeding + alternating projections for intermediate ranks.
    CounterRng rng = base.fork(pi);
    for (int attempt = 0; attempt < 16; ++attempt) {
      FourierImage img;
      for (int a = 0; a < nc; ++a) {
        int n = classes[a].n;
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
        img.blocks_img.push_back(nearest_projection(Mat(g + g.adjoint()), pattern[a]));
      }
      Functional cand = inverse_fourier(qg, img);
      for (int iter = 0; iter < 400; ++iter) {
        // project onto positive functionals with unit mass ...
        std::vector<Mat> coeff = coefficient_blocks(qg, cand);
        double tr = 0.0;
        for (Mat& b : coeff) {
          b = psd_part(b);
          tr += b.trace().real();
        }
        if (tr < 1e-6) break;
        for (Mat& b : coeff) b /= tr;
        Functional pos = functional_from_blocks(qg, coeff);
        // ... then back onto the prescribed Fourier rank pattern.
        FourierImage fi = fourier(qg, pos);
        for (int a = 0; a < nc; ++a)
          fi.blocks_img[a] = nearest_projection(fi.blocks_img[a], pattern[a]);
        Functional next = inverse_fourier(qg, fi);
        double moved = sup_abs(Functional(next - cand));
        cand = next;
        if (moved < 1e-11) break;
      }
      offer(cand);
    }
  }

  // Deterministic presentation.
  std::vector<int> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return functional_less(found[i], found[j], norms[i], norms[j]);
  });
  IdempotentEnumeration out;
  for (int idx : order) {
    out.states.push_back(found[idx]);
    out.ranks.push_back(fourier_ranks(qg, found[idx]));
  }
  return out;
}

}  // namespace fqg
