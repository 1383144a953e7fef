#include "fqg/hypergroups.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fqg/idempotents.hpp"

namespace fqg {

namespace {

// Gram matrix of the Haar-GNS inner product <x,y> = h(x* y).
Mat haar_gram(const AlgebraPresentation& pres, const Cov& haar) {
  const int d = pres.dim;
  Mat g(d, d);
  for (int i = 0; i < d; ++i) g.row(i) = haar * pres.left_op(Vec(pres.invol.col(i)));
  return g;
}

// Pivoted Gram-Schmidt on the columns of M under the inner product given by
// the PSD matrix gram; returns an orthonormal basis of the column space.
Mat orthonormal_range(const Mat& m, const Mat& gram) {
  const int d = static_cast<int>(m.rows());
  std::vector<Vec> basis;
  std::vector<Vec> residual;
  for (int t = 0; t < m.cols(); ++t) residual.push_back(m.col(t));
  const double scale = std::max(1.0, sup_abs(m));
  for (;;) {
    int pick = -1;
    double best = 0.0;
    for (std::size_t t = 0; t < residual.size(); ++t) {
      double n2 = (residual[t].adjoint() * gram * residual[t])(0).real();
      if (n2 > best) {
        best = n2;
        pick = static_cast<int>(t);
      }
    }
    if (pick < 0 || best < 1e-20 * scale * scale) break;
    Vec b = residual[pick] / std::sqrt(best);
    basis.push_back(b);
    for (Vec& r : residual) r -= b * (b.adjoint() * gram * r)(0);
  }
  Mat out(d, static_cast<int>(basis.size()));
  for (std::size_t t = 0; t < basis.size(); ++t) out.col(static_cast<int>(t)) = basis[t];
  return out;
}

// Coordinates in an orthonormal basis (columns of B) of vectors known to lie
// in its span: R = B^dagger G, so that R * embed = identity.
Mat restriction_matrix(const Mat& basis, const Mat& gram) { return basis.adjoint() * gram; }

Hypergroup assemble_hypergroup(const QuantumGroup& qg, const Mat& expectation,
                               const Cov& carrier_haar_raw, const QgOptions& opts) {
  const int d = qg.dim();
  Mat gram = haar_gram(qg.algebra, qg.haar);
  Mat basis = orthonormal_range(expectation, gram);
  const int dm = static_cast<int>(basis.cols());
  Mat restr = restriction_matrix(basis, gram);

  auto in_range_coords = [&](const Vec& v, const char* what) -> Vec {
    Vec c = restr * v;
    if (sup_abs(Vec(basis * c - v)) > 1e-8 * (1.0 + sup_abs(v)))
      throw AxiomViolationError(std::string("carrier is not closed under ") + what);
    return c;
  };

  Hypergroup hg;
  hg.embed = basis;
  hg.restrict_map = restr;
  hg.expectation = expectation;

  AlgebraPresentation& sub = hg.algebra;
  sub.dim = dm;
  sub.mul.assign(dm, Mat(dm, dm));
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dm; ++j) {
      Vec prod = qg.algebra.product(basis.col(i), basis.col(j));
      Vec c = in_range_coords(prod, "multiplication");
      for (int k = 0; k < dm; ++k) sub.mul[k](i, j) = c(k);
    }
  sub.unit = in_range_coords(Vec(expectation * qg.algebra.unit), "the unit");
  sub.invol = Mat(dm, dm);
  for (int i = 0; i < dm; ++i)
    sub.invol.col(i) = in_range_coords(qg.algebra.star(basis.col(i)), "the involution");

  // comultiplication: push the ambient one through E (x) E and re-coordinate
  Mat exp2 = kron(expectation, expectation);
  Mat rest2 = kron(restr, restr);
  Mat emb2 = kron(basis, basis);
  hg.comul = Mat(dm * dm, dm);
  for (int t = 0; t < dm; ++t) {
    Vec img = exp2 * qg.comul * basis.col(t);
    Vec c = rest2 * img;
    if (sup_abs(Vec(emb2 * c - img)) > 1e-8 * (1.0 + sup_abs(img)))
      throw AxiomViolationError("projected comultiplication leaves the carrier tensor square");
    hg.comul.col(t) = c;
  }

  hg.counit = qg.counit * basis;
  hg.kappa = Mat(dm, dm);
  for (int t = 0; t < dm; ++t)
    hg.kappa.col(t) = in_range_coords(Vec(qg.antipode * basis.col(t)), "the antipode");

  Cov hr = carrier_haar_raw * basis;
  cplx mass = hr * sub.unit;
  if (std::abs(mass) < 1e-12)
    throw AxiomViolationError("restricted Haar functional vanishes on the carrier unit");
  hg.haar = hr / mass;

  WedderburnOptions wo;
  wo.tol = opts.tol;
  wo.seed = opts.seed;
  hg.blocks = wedderburn(sub, wo);
  return hg;
}

Mat expectation_left_map(const QuantumGroup& qg, const Functional& phi) {
  const int d = qg.dim();
  Mat m(d, d);
  for (int t = 0; t < d; ++t) m.col(t) = contract_first(phi, Vec(qg.comul.col(t)), d);
  return m;
}

Mat expectation_right_map(const QuantumGroup& qg, const Functional& phi) {
  const int d = qg.dim();
  Mat m(d, d);
  for (int t = 0; t < d; ++t) m.col(t) = contract_second(phi, Vec(qg.comul.col(t)), d);
  return m;
}

void require_idempotent(const QuantumGroup& qg, const Functional& phi, const char* who) {
  if (!is_idempotent_state(qg, phi, 1e-8))
    throw DomainError(std::string(who) + ": the functional must be an idempotent state");
}

// Dense block-diagonal matrix realization of an element.
Mat block_diag_realization(const BlockStructure& bs, const Vec& x) {
  int total = 0;
  for (int n : bs.sizes) total += n;
  Mat out = Mat::Zero(total, total);
  int off = 0;
  std::vector<Mat> blocks = bs.blocks_of(x);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    out.block(off, off, bs.sizes[k], bs.sizes[k]) = blocks[k];
    off += bs.sizes[k];
  }
  return out;
}

}  // namespace

// --- conditional expectations ----------------------------------------------------

ConditionalExpectation expectation_left(const QuantumGroup& qg, const Functional& phi) {
  require_idempotent(qg, phi, "expectation_left");
  ConditionalExpectation e;
  e.map = expectation_left_map(qg, phi);
  e.range_basis = orthonormal_range(e.map, haar_gram(qg.algebra, qg.haar));
  return e;
}

ConditionalExpectation expectation_right(const QuantumGroup& qg, const Functional& phi) {
  require_idempotent(qg, phi, "expectation_right");
  ConditionalExpectation e;
  e.map = expectation_right_map(qg, phi);
  e.range_basis = orthonormal_range(e.map, haar_gram(qg.algebra, qg.haar));
  return e;
}

ConditionalExpectation expectation_two_sided(const QuantumGroup& qg, const Functional& phi) {
  require_idempotent(qg, phi, "expectation_two_sided");
  ConditionalExpectation e;
  e.map = expectation_left_map(qg, phi) * expectation_right_map(qg, phi);
  e.range_basis = orthonormal_range(e.map, haar_gram(qg.algebra, qg.haar));
  return e;
}

Report check_one_sided_expectation_laws(const QuantumGroup& qg, const Functional& phi,
                                        double tol) {
  require_idempotent(qg, phi, "check_one_sided_expectation_laws");
  const int d = qg.dim();
  const Mat el = expectation_left_map(qg, phi);
  const Mat er = expectation_right_map(qg, phi);
  const Mat id = Mat::Identity(d, d);
  const Mat& j = qg.algebra.invol;
  Report rep;
  rep.add("left_star_preserving", sup_abs(Mat(el * j - j * el.conjugate())), tol);
  rep.add("right_star_preserving", sup_abs(Mat(er * j - j * er.conjugate())), tol);
  rep.add("left_comul_intertwining", sup_abs(Mat(qg.comul * el - kron(el, id) * qg.comul)), tol);
  rep.add("right_comul_intertwining", sup_abs(Mat(qg.comul * er - kron(id, er) * qg.comul)), tol);
  rep.add("mixed_slice_identity", sup_abs(Mat(kron(id, el) * qg.comul - kron(er, id) * qg.comul)),
          tol);
  rep.add("one_sided_commute", sup_abs(Mat(el * er - er * el)), tol);
  double range_mult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) {
      Vec pl = qg.algebra.product(Vec(el.col(i)), Vec(el.col(a)));
      range_mult = std::max(range_mult, sup_abs(Vec(el * pl - pl)));
      Vec pr = qg.algebra.product(Vec(er.col(i)), Vec(er.col(a)));
      range_mult = std::max(range_mult, sup_abs(Vec(er * pr - pr)));
    }
  rep.add("range_multiplicative", range_mult, tol);
  rep.add("left_idempotent", sup_abs(Mat(el * el - el)), tol);
  rep.add("right_idempotent", sup_abs(Mat(er * er - er)), tol);
  rep.add("left_unital", sup_abs(Vec(el * qg.algebra.unit - qg.algebra.unit)), tol);
  rep.add("right_unital", sup_abs(Vec(er * qg.algebra.unit - qg.algebra.unit)), tol);
  return rep;
}

Report check_two_sided_expectation_laws(const QuantumGroup& qg, const Functional& phi,
                                        double tol) {
  require_idempotent(qg, phi, "check_two_sided_expectation_laws");
  const int d = qg.dim();
  const Mat el = expectation_left_map(qg, phi);
  const Mat er = expectation_right_map(qg, phi);
  const Mat e = el * er;
  const Mat id = Mat::Identity(d, d);
  const Mat& j = qg.algebra.invol;
  Report rep;
  rep.add("star_preserving", sup_abs(Mat(e * j - j * e.conjugate())), tol);
  rep.add("comul_factorization", sup_abs(Mat(qg.comul * e - kron(el, er) * qg.comul)), tol);
  Mat projected = kron(e, e) * qg.comul;
  rep.add("projected_comul_left_form", sup_abs(Mat(projected - kron(id, el) * qg.comul * e)), tol);
  rep.add("projected_comul_right_form", sup_abs(Mat(projected - kron(er, id) * qg.comul * e)),
          tol);
  rep.add("projected_comul_idempotent", sup_abs(Mat(projected - projected * e)), tol);
  double range_mult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) {
      Vec p = qg.algebra.product(Vec(e.col(i)), Vec(e.col(a)));
      range_mult = std::max(range_mult, sup_abs(Vec(e * p - p)));
    }
  rep.add("range_multiplicative", range_mult, tol);
  rep.add("idempotent", sup_abs(Mat(e * e - e)), tol);
  rep.add("unital", sup_abs(Vec(e * qg.algebra.unit - qg.algebra.unit)), tol);
  rep.add("antipode_commutation", sup_abs(Mat(qg.antipode * e - e * qg.antipode)), tol);
  rep.add("haar_compatibility", sup_abs(Cov(qg.haar * e - qg.haar)), tol);
  rep.add("counit_recovers_state", sup_abs(Cov(qg.counit * e - phi)), tol);
  return rep;
}

// --- group-like projections ---------------------------------------------------------

Report group_like_projection_report(const QuantumGroup& qg, const Vec& p, double tol) {
  const int d = qg.dim();
  Report rep;
  rep.add("self_adjoint", sup_abs(Vec(qg.algebra.star(p) - p)), tol);
  rep.add("idempotent_element", sup_abs(Vec(qg.algebra.product(p, p) - p)), tol);
  Vec dp = qg.comul * p;
  Vec pp = kron_vec(p, p);
  Vec left = tensor_product_vec(qg.algebra, dp, kron_vec(Vec(qg.algebra.unit), p));
  Vec right = tensor_product_vec(qg.algebra, dp, kron_vec(p, Vec(qg.algebra.unit)));
  rep.add("group_like_left", sup_abs(Vec(left - pp)), tol);
  rep.add("group_like_right", sup_abs(Vec(right - pp)), tol);
  rep.add("antipode_fixed", sup_abs(Vec(qg.antipode * p - p)), tol);
  rep.add_flag("nonzero", sup_abs(p) > tol);
  (void)d;
  return rep;
}

bool is_group_like_projection(const QuantumGroup& qg, const Vec& p, double tol) {
  return group_like_projection_report(qg, p, tol).passed();
}

Report check_projection_expectation_laws(const QuantumGroup& qg, const Vec& p, double tol) {
  if (!is_group_like_projection(qg, p, 1e-8))
    throw DomainError("check_projection_expectation_laws: p is not a group-like projection");
  const int d = qg.dim();
  const Mat corner = qg.algebra.left_op(p) * qg.algebra.right_op(p);
  const Mat& j = qg.algebra.invol;
  Report rep;
  rep.add("idempotent", sup_abs(Mat(corner * corner - corner)), tol);
  rep.add("star_preserving", sup_abs(Mat(corner * j - j * corner.conjugate())), tol);
  double bimodule = 0.0;
  for (int u = 0; u < d; ++u)
    for (int v = 0; v < d; ++v) {
      Mat lr = qg.algebra.left_op(Vec(corner.col(u))) * qg.algebra.right_op(Vec(corner.col(v)));
      bimodule = std::max(bimodule, sup_abs(Mat(corner * lr - lr * corner)));
    }
  rep.add("corner_bimodule", bimodule, tol);
  Mat pc = kron(corner, corner) * qg.comul;
  rep.add("projected_comul_idempotent", sup_abs(Mat(pc - pc * corner)), tol);
  rep.add("antipode_commutation", sup_abs(Mat(qg.antipode * corner - corner * qg.antipode)), tol);
  rep.add("counit_value", std::abs(cplx(qg.counit * p) - 1.0), tol);
  rep.add("haar_corner_compatibility",
          sup_abs(Cov(qg.haar * corner - qg.haar * qg.algebra.right_op(p))), tol);
  // strong invariance of the corner comultiplication against the ambient Haar
  double strong = 0.0;
  Mat id = Mat::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) {
      Vec di = pc * Vec(corner.col(i));
      Vec da = pc * Vec(corner.col(a));
      Vec lhs = contract_second(
          qg.haar,
          tensor_product_vec(qg.algebra, Vec(kron(qg.antipode, id) * di),
                             kron_vec(Vec(qg.algebra.unit), Vec(corner.col(a)))),
          d);
      Vec rhs = contract_second(
          qg.haar,
          tensor_product_vec(qg.algebra, kron_vec(Vec(qg.algebra.unit), Vec(corner.col(i))), da),
          d);
      strong = std::max(strong, sup_abs(Vec(lhs - rhs)));
    }
  rep.add("strong_invariance", strong, tol);
  return rep;
}

// --- constructions ---------------------------------------------------------------------

Hypergroup build_hypergroup_from_idempotent(const QuantumGroup& qg, const Functional& phi,
                                            const QgOptions& opts) {
  require_idempotent(qg, phi, "build_hypergroup_from_idempotent");
  Mat e = expectation_left_map(qg, phi) * expectation_right_map(qg, phi);
  return assemble_hypergroup(qg, e, qg.haar, opts);
}

Hypergroup build_hypergroup_from_projection(const QuantumGroup& qg, const Vec& p,
                                            const QgOptions& opts) {
  if (!is_group_like_projection(qg, p, 1e-8))
    throw DomainError("build_hypergroup_from_projection: p is not a group-like projection");
  Mat corner = qg.algebra.left_op(p) * qg.algebra.right_op(p);
  return assemble_hypergroup(qg, corner, qg.haar, opts);
}

Hypergroup as_hypergroup(const QuantumGroup& qg) {
  Hypergroup hg;
  hg.algebra = qg.algebra;
  hg.blocks = qg.blocks;
  hg.comul = qg.comul;
  hg.counit = qg.counit;
  hg.kappa = qg.antipode;
  hg.haar = qg.haar;
  hg.embed = Mat::Identity(qg.dim(), qg.dim());
  hg.restrict_map = hg.embed;
  hg.expectation = hg.embed;
  return hg;
}

// --- verification -----------------------------------------------------------------------

Report verify_hypergroup(const Hypergroup& hg, double tol) {
  const int d = hg.dim();
  const AlgebraPresentation& a = hg.algebra;
  Report rep;
  rep.merge(verify_algebra(a, tol), "algebra_");
  rep.merge(verify_blocks(a, hg.blocks, tol), "blocks_");

  const Mat id = Mat::Identity(d, d);
  rep.add("comul_unital", sup_abs(Vec(hg.comul * a.unit - kron_vec(a.unit, a.unit))), tol);
  double star_res = 0.0;
  Mat jj = kron(a.invol, a.invol);
  for (int t = 0; t < d; ++t) {
    Vec lhs = hg.comul * a.invol.col(t);  // delta(e_t*)
    Vec rhs = jj * Vec(hg.comul.col(t)).conjugate();
    star_res = std::max(star_res, sup_abs(Vec(lhs - rhs)));
  }
  rep.add("comul_star_preserving", star_res, tol);
  rep.add("coassociativity",
          sup_abs(Mat(kron(hg.comul, id) * hg.comul - kron(id, hg.comul) * hg.comul)), tol);
  rep.add("counit_left", sup_abs(Mat(Mat::Identity(d, d) - [&] {
            Mat m(d, d);
            for (int t = 0; t < d; ++t) m.col(t) = contract_first(hg.counit, Vec(hg.comul.col(t)), d);
            return m;
          }())),
          tol);
  rep.add("counit_right", sup_abs(Mat(Mat::Identity(d, d) - [&] {
            Mat m(d, d);
            for (int t = 0; t < d; ++t)
              m.col(t) = contract_second(hg.counit, Vec(hg.comul.col(t)), d);
            return m;
          }())),
          tol);
  double mult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx v = 0.0;
      for (int k = 0; k < d; ++k) v += hg.counit(k) * a.mul[k](i, j);
      mult = std::max(mult, std::abs(v - hg.counit(i) * hg.counit(j)));
    }
  rep.add("counit_multiplicative", mult, tol);
  rep.add("counit_unital", std::abs(cplx(hg.counit * a.unit) - 1.0), tol);
  rep.add("counit_star", sup_abs(Cov(hg.counit * a.invol - hg.counit.conjugate())), tol);

  // complete positivity of the comultiplication: per-block Choi matrices
  AlgebraPresentation square = tensor(a, a);
  WedderburnOptions wo;
  BlockStructure square_blocks = wedderburn(square, wo);
  double cp = 0.0, choi_herm = 0.0;
  for (std::size_t k = 0; k < hg.blocks.sizes.size(); ++k) {
    const int n = hg.blocks.sizes[k];
    int big = 0;
    for (int m : square_blocks.sizes) big += m;
    Mat choi = Mat::Zero(n * big, n * big);
    for (int aa = 0; aa < n; ++aa)
      for (int bb = 0; bb < n; ++bb) {
        Vec img = hg.comul * hg.blocks.matrix_unit(static_cast<int>(k), aa, bb);
        choi.block(aa * big, bb * big, big, big) = block_diag_realization(square_blocks, img);
      }
    choi_herm = std::max(choi_herm, sup_abs(Mat(choi - choi.adjoint())));
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (choi + choi.adjoint())));
    cp = std::max(cp, std::max(0.0, -es.eigenvalues().minCoeff()));
  }
  rep.add("comul_choi_hermitian", choi_herm, tol);
  rep.add("comul_completely_positive", cp, std::max(tol, 1e-9));

  rep.add("kappa_involutive", sup_abs(Mat(hg.kappa * hg.kappa - id)), tol);
  double antimult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec lhs = hg.kappa * a.product(Vec(id.col(i)), Vec(id.col(j)));
      Vec rhs = a.product(Vec(hg.kappa.col(j)), Vec(hg.kappa.col(i)));
      antimult = std::max(antimult, sup_abs(Vec(lhs - rhs)));
    }
  rep.add("kappa_antimultiplicative", antimult, tol);
  rep.add("kappa_star_commute", sup_abs(Mat(hg.kappa * a.invol - a.invol * hg.kappa.conjugate())),
          tol);
  rep.add("kappa_unit", sup_abs(Vec(hg.kappa * a.unit - a.unit)), tol);
  rep.add("kappa_counit", sup_abs(Cov(hg.counit * hg.kappa - hg.counit)), tol);

  double inv_l = 0.0, inv_r = 0.0;
  for (int t = 0; t < d; ++t) {
    Vec x = hg.comul.col(t);
    inv_l = std::max(inv_l, sup_abs(Vec(contract_first(hg.haar, x, d) - hg.haar(t) * a.unit)));
    inv_r = std::max(inv_r, sup_abs(Vec(contract_second(hg.haar, x, d) - hg.haar(t) * a.unit)));
  }
  rep.add("haar_left_invariant", inv_l, tol);
  rep.add("haar_right_invariant", inv_r, tol);
  rep.add("haar_unital", std::abs(cplx(hg.haar * a.unit) - 1.0), tol);
  rep.add("haar_hermitian", sup_abs(Cov(hg.haar * a.invol - hg.haar.conjugate())), tol);
  Mat gram = haar_gram(a, hg.haar);
  Eigen::SelfAdjointEigenSolver<Mat> ges(Mat(0.5 * (gram + gram.adjoint())));
  rep.add("haar_positive_faithful", std::max(0.0, 1e-9 - ges.eigenvalues().minCoeff()),
          std::max(tol, 1e-9));
  double tracial = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      tracial = std::max(tracial, std::abs(cplx(hg.haar * a.product(Vec(id.col(i)), Vec(id.col(j)))) -
                                           cplx(hg.haar * a.product(Vec(id.col(j)), Vec(id.col(i))))));
  rep.add("haar_tracial", tracial, tol);
  rep.add("haar_kappa_invariant", sup_abs(Cov(hg.haar * hg.kappa - hg.haar)), tol);

  double strong = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec lhs = contract_second(
          hg.haar,
          tensor_product_vec(a, Vec(kron(hg.kappa, id) * hg.comul.col(i)),
                             kron_vec(Vec(a.unit), Vec(id.col(j)))),
          d);
      Vec rhs = contract_second(
          hg.haar, tensor_product_vec(a, kron_vec(Vec(a.unit), Vec(id.col(i))), Vec(hg.comul.col(j))),
          d);
      strong = std::max(strong, sup_abs(Vec(lhs - rhs)));
    }
  rep.add("strong_invariance", strong, tol);

  rep.add("embedding_left_inverse",
          sup_abs(Mat(hg.restrict_map * hg.embed - Mat::Identity(d, d))), tol);
  rep.add("expectation_idempotent",
          sup_abs(Mat(hg.expectation * hg.expectation - hg.expectation)), tol);
  rep.add("expectation_fixes_carrier", sup_abs(Mat(hg.expectation * hg.embed - hg.embed)), tol);
  rep.add("expectation_range_in_carrier",
          sup_abs(Mat(hg.embed * hg.restrict_map * hg.expectation - hg.expectation)), tol);
  return rep;
}

// --- bi-invariant functionals ---------------------------------------------------------------

bool is_bi_invariant(const QuantumGroup& qg, const Functional& phi, const Functional& u,
                     double tol) {
  double scale = 1.0 + sup_abs(u);
  return sup_abs(Functional(convolve(qg, phi, u) - u)) <= tol * scale &&
         sup_abs(Functional(convolve(qg, u, phi) - u)) <= tol * scale;
}

Functional restrict_functional(const Hypergroup& hg, const Functional& u) {
  return u * hg.embed;
}

Functional extend_functional(const Hypergroup& hg, const Functional& u_sub) {
  return u_sub * hg.restrict_map * hg.expectation;
}

Report check_bi_invariance_calculus(const QuantumGroup& qg, const Functional& phi,
                                    const Hypergroup& hg, const Functional& u, double tol) {
  Report rep;
  double scale = 1.0 + sup_abs(u);
  rep.add("left_invariance", sup_abs(Functional(convolve(qg, phi, u) - u)) / scale, tol);
  rep.add("right_invariance", sup_abs(Functional(convolve(qg, u, phi) - u)) / scale, tol);
  Functional ru = restrict_functional(hg, u);
  rep.add("expectation_reconstruction", sup_abs(Functional(extend_functional(hg, ru) - u)) / scale,
          tol);
  rep.add("norm_preserved",
          std::abs(functional_norm(qg, u) - functional_norm(hg.blocks, ru)) / scale, tol);
  rep.add_flag("positivity_equivalent", is_positive_functional(qg, u, 1e-8) ==
                                            is_positive_functional(hg.blocks, ru, 1e-8));
  rep.add_flag("state_equivalent",
               is_state(qg, u, 1e-8) == is_state(hg.algebra, hg.blocks, ru, 1e-8));
  Functional star_then_restrict = restrict_functional(hg, star(qg, u));
  Functional restrict_then_star = star_with(hg.algebra.invol, hg.kappa, ru);
  rep.add("involution_compatible", sup_abs(Functional(star_then_restrict - restrict_then_star)) / scale,
          tol);
  rep.add("convolution_compatible",
          sup_abs(Functional(restrict_functional(hg, convolve(qg, u, u)) -
                             convolve_with(hg.comul, ru, ru))) /
              (scale * scale),
          tol);
  rep.add("counit_extends_to_state", sup_abs(Functional(extend_functional(hg, hg.counit) - phi)),
          tol);
  return rep;
}

// --- dual hypergroup --------------------------------------------------------------------------

Hypergroup hypergroup_dual(const Hypergroup& hg, const QgOptions& opts) {
  const int d = hg.dim();
  const AlgebraPresentation& a = hg.algebra;
  Hypergroup dual;
  dual.algebra = dual_presentation(a, hg.comul, hg.counit, hg.kappa);
  dual.comul = Mat(d * d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dual.comul(i * d + j, k) = a.mul[k](i, j);
  dual.counit = a.unit.transpose();
  dual.kappa = hg.kappa.transpose();

  // dual Haar transported through psi = haar o kappa:
  // if omega = psi(x .), then the dual Haar value of omega is counit(x).
  Cov psi = hg.haar * hg.kappa;
  Mat p(d, d);
  for (int i = 0; i < d; ++i) p.col(i) = (psi * a.left_op(Vec(Mat::Identity(d, d).col(i)))).transpose();
  Eigen::FullPivLU<Mat> lu(p);
  if (!lu.isInvertible())
    throw ConditioningError("hypergroup_dual: transported Haar form is degenerate");
  Cov hhat = hg.counit * lu.inverse();
  cplx at_unit = hhat * dual.algebra.unit;
  if (std::abs(at_unit) < 1e-12)
    throw ConditioningError("hypergroup_dual: dual Haar vanishes at the dual unit");
  dual.haar = hhat / at_unit;

  WedderburnOptions wo;
  wo.tol = opts.tol;
  wo.seed = opts.seed ^ 0xd0a1ULL;
  dual.blocks = wedderburn(dual.algebra, wo);
  dual.embed = Mat::Identity(d, d);
  dual.restrict_map = dual.embed;
  dual.expectation = dual.embed;
  return dual;
}

// --- duality theorem ----------------------------------------------------------------------------

Report verify_duality_theorem(const QuantumGroup& qg, const Functional& phi,
                              const QgOptions& opts, double tol) {
  require_idempotent(qg, phi, "verify_duality_theorem");
  Report rep;
  Hypergroup h = build_hypergroup_from_idempotent(qg, phi, opts);
  QuantumGroup dual = dual_quantum_group(qg, opts);
  Vec p_hat = phi.transpose();
  rep.merge(group_like_projection_report(dual, p_hat, tol), "dual_projection_");
  Hypergroup corner = build_hypergroup_from_projection(dual, p_hat, opts);

  const int dm = h.dim();
  rep.add_flag("dimensions_match", corner.dim() == dm);
  if (corner.dim() != dm) return rep;

  // pi(omega) = omega o E as an element of the dual, in corner coordinates
  Mat m = h.restrict_map * h.expectation;      // d' x d
  Mat images = m.transpose();                  // d x d' : columns pi(e^i)
  rep.add("corner_containment",
          sup_abs(Mat(corner.embed * (corner.restrict_map * images) - images)), tol);
  Mat pi = corner.restrict_map * images;  // d' x d'

  Eigen::JacobiSVD<Mat> svd(pi);
  rep.add_flag("bijective",
               svd.singularValues()(dm - 1) > 1e-8 * std::max(1.0, svd.singularValues()(0)));

  Mat id = Mat::Identity(dm, dm);
  rep.add("unit_correspondence",
          sup_abs(Vec(pi * h.counit.transpose() - corner.algebra.unit)), tol);
  double prod_res = 0.0, star_res = 0.0;
  for (int i = 0; i < dm; ++i) {
    Functional ei = Functional(id.row(i));
    Functional si = star_with(h.algebra.invol, h.kappa, ei);
    star_res = std::max(
        star_res, sup_abs(Vec(pi * si.transpose() - corner.algebra.star(Vec(pi.col(i))))));
    for (int j = 0; j < dm; ++j) {
      Functional ej = Functional(id.row(j));
      Vec lhs = pi * convolve_with(h.comul, ei, ej).transpose();
      Vec rhs = corner.algebra.product(Vec(pi.col(i)), Vec(pi.col(j)));
      prod_res = std::max(prod_res, sup_abs(Vec(lhs - rhs)));
    }
  }
  rep.add("product_correspondence", prod_res, tol);
  rep.add("involution_correspondence", star_res, tol);

  Mat comul_of_dual_h(dm * dm, dm);
  for (int k = 0; k < dm; ++k)
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dm; ++j) comul_of_dual_h(i * dm + j, k) = h.algebra.mul[k](i, j);
  rep.add("comultiplication_correspondence",
          sup_abs(Mat(kron(pi, pi) * comul_of_dual_h - corner.comul * pi)), tol);
  rep.add("counit_correspondence",
          sup_abs(Cov(corner.counit * pi - h.algebra.unit.transpose())), tol);
  rep.add("antipode_correspondence", sup_abs(Mat(pi * h.kappa.transpose() - corner.kappa * pi)),
          tol);
  Hypergroup dual_h = hypergroup_dual(h, opts);
  rep.add("haar_correspondence", sup_abs(Cov(corner.haar * pi - dual_h.haar)), tol);
  return rep;
}

// --- representations -----------------------------------------------------------------------------

IrrepTable hypergroup_irreps(const Hypergroup& hg, const QgOptions& opts) {
  return build_irrep_table(hg.algebra, hg.comul, hg.counit, hg.kappa, opts);
}

Report verify_peter_weyl(const Hypergroup& hg, double tol) {
  const int d = hg.dim();
  IrrepTable irr = hypergroup_irreps(hg);
  const AlgebraPresentation& a = hg.algebra;
  Report rep;

  double corep = 0.0, counit_law = 0.0, dagger_law = 0.0, haar_triv = 0.0;
  for (std::size_t al = 0; al < irr.classes.size(); ++al) {
    const int n = irr.classes[al].n;
    auto u = [&](int i, int j) -> Vec { return irr.classes[al].coeff.col(i * n + j); };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec lhs = hg.comul * u(i, j);
        Vec rhs = Vec::Zero(d * d);
        for (int k = 0; k < n; ++k) rhs += kron_vec(u(i, k), u(k, j));
        corep = std::max(corep, sup_abs(Vec(lhs - rhs)));
        counit_law = std::max(counit_law,
                              std::abs(cplx(hg.counit * u(i, j)) - (i == j ? 1.0 : 0.0)));
        Vec dag = a.star(Vec(hg.kappa * u(i, j)));
        dagger_law = std::max(dagger_law, sup_abs(Vec(dag - u(j, i))));
        haar_triv = std::max(
            haar_triv, std::abs(cplx(hg.haar * u(i, j)) -
                                ((static_cast<int>(al) == irr.trivial_index) ? 1.0 : 0.0)));
      }
  }
  rep.add("corepresentation_law", corep, tol);
  rep.add("counit_law", counit_law, tol);
  rep.add("dagger_law", dagger_law, tol);
  rep.add("haar_kills_nontrivial", haar_triv, tol);

  // orthogonality under <x,y> = haar(x y*) and <x,y> = haar(x* y)
  double interclass = 0.0, row_mismatch = 0.0, col_mismatch = 0.0;
  double gram_psd = 0.0;
  bool gram_nondegenerate = true;
  for (std::size_t al = 0; al < irr.classes.size(); ++al) {
    const int n_a = irr.classes[al].n;
    for (std::size_t be = 0; be < irr.classes.size(); ++be) {
      const int n_b = irr.classes[be].n;
      for (int i = 0; i < n_a; ++i)
        for (int j = 0; j < n_a; ++j)
          for (int l = 0; l < n_b; ++l)
            for (int k = 0; k < n_b; ++k) {
              Vec ua = irr.classes[al].coeff.col(i * n_a + j);
              Vec ub = irr.classes[be].coeff.col(l * n_b + k);
              cplx right = hg.haar * a.product(ua, a.star(ub));
              cplx left = hg.haar * a.product(a.star(ua), ub);
              if (al != be) {
                interclass = std::max(interclass, std::max(std::abs(right), std::abs(left)));
              } else {
                if (i != l) row_mismatch = std::max(row_mismatch, std::abs(right));
                if (j != k) col_mismatch = std::max(col_mismatch, std::abs(left));
              }
            }
    }
    // row Gram matrices W_i(j,k) = haar(u_ij (u_ik)*) must be PSD, nonzero
    for (int i = 0; i < n_a; ++i) {
      Mat w(n_a, n_a);
      for (int j = 0; j < n_a; ++j)
        for (int k = 0; k < n_a; ++k) {
          Vec uj = irr.classes[al].coeff.col(i * n_a + j);
          Vec uk = irr.classes[al].coeff.col(i * n_a + k);
          w(j, k) = hg.haar * a.product(uj, a.star(uk));
        }
      gram_psd = std::max(gram_psd, sup_abs(Mat(w - w.adjoint())));
      Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (w + w.adjoint())));
      gram_psd = std::max(gram_psd, std::max(0.0, -es.eigenvalues().minCoeff()));
      if (es.eigenvalues().minCoeff() < 1e-10) gram_nondegenerate = false;
    }
  }
  rep.add("interclass_orthogonality", interclass, tol);
  rep.add("row_orthogonality", row_mismatch, tol);
  rep.add("column_orthogonality", col_mismatch, tol);
  rep.add("row_gram_psd", gram_psd, tol);
  rep.add_flag("row_gram_nondegenerate", gram_nondegenerate);
  return rep;
}

Report check_trivial_coefficient_dominance(const Hypergroup& hg, int trials, std::uint64_t seed,
                                           double tol) {
  Hypergroup dual = hypergroup_dual(hg);
  Report rep;

  // the counit of the carrier is a character, so it occupies a unique
  // one-dimensional coefficient block; positive functionals weigh that block
  // by exactly the dual Haar value
  std::vector<Mat> eps_blocks = coefficient_blocks(hg.blocks, hg.counit);
  int k0 = -1;
  double char_residual = 0.0;
  for (std::size_t k = 0; k < eps_blocks.size(); ++k) {
    if (hg.blocks.sizes[k] == 1 && std::abs(eps_blocks[k](0, 0) - 1.0) < 1e-6 && k0 < 0) {
      k0 = static_cast<int>(k);
    } else {
      char_residual = std::max(char_residual, sup_abs(eps_blocks[k]));
    }
  }
  rep.add_flag("counit_block_found", k0 >= 0);
  if (k0 < 0) return rep;
  rep.add("counit_supported_on_one_block", char_residual, std::max(tol, 1e-8));

  CounterRng rng(seed);
  double herm = 0.0, match = 0.0, trace_identity = 0.0, dominance = 0.0;
  bool positive_recognized = true;
  for (int t = 0; t < trials; ++t) {
    std::vector<Mat> coeff;
    cplx trace_sum = 0.0;
    for (int n : hg.blocks.sizes) {
      Mat g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
      Mat b = g.adjoint() * g;
      coeff.push_back(b);
      trace_sum += b.trace();
    }
    Functional v = functional_from_blocks(hg.blocks, coeff);
    positive_recognized = positive_recognized && is_positive_functional(hg.blocks, v, 1e-8);
    cplx hv = dual.haar * Vec(v.transpose());
    herm = std::max(herm, std::abs(hv.imag()));
    match = std::max(match, std::abs(hv - coeff[static_cast<std::size_t>(k0)](0, 0)));
    cplx at_unit = v * hg.algebra.unit;
    trace_identity = std::max(trace_identity, std::abs(at_unit - trace_sum));
    dominance = std::max(dominance, std::max(0.0, hv.real() - at_unit.real()));
  }
  rep.add_flag("positivity_recognized", positive_recognized);
  rep.add("dual_haar_real_on_positives", herm, std::max(tol, 1e-8));
  rep.add("dual_haar_is_counit_block_weight", match, std::max(tol, 1e-8));
  rep.add("counit_value_is_trace_sum", trace_identity, std::max(tol, 1e-8));
  rep.add("dominated_by_counit_value", dominance, std::max(tol, 1e-8));

  // equality when the functional is supported on the counit block alone
  cplx h_eps = dual.haar * Vec(hg.counit.transpose());
  cplx e_eps = hg.counit * hg.algebra.unit;
  rep.add("equality_on_counit_block", std::abs(h_eps - e_eps), std::max(tol, 1e-8));

  // a signed functional may break the bound: subtract the trace functional of
  // some other block from the counit and watch the inequality reverse
  if (hg.blocks.sizes.size() > 1) {
    std::vector<Mat> bad = eps_blocks;
    int other = (k0 == 0) ? 1 : 0;
    bad[static_cast<std::size_t>(other)] -=
        Mat::Identity(hg.blocks.sizes[static_cast<std::size_t>(other)],
                      hg.blocks.sizes[static_cast<std::size_t>(other)]);
    Functional vb = functional_from_blocks(hg.blocks, bad);
    cplx hvb = dual.haar * Vec(vb.transpose());
    cplx evb = vb * hg.algebra.unit;
    rep.add_flag("signed_functionals_can_break_the_bound", hvb.real() > evb.real() + 0.5);
  }
  return rep;
}

}  // namespace fqg
