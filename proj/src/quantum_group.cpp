#include "fqg/quantum_group.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace fqg {

// ---------------------------------------------------------------------------
// coalgebra helpers
// ---------------------------------------------------------------------------

Vec multiply_tensor_legs(const AlgebraPresentation& pres, const Vec& X) {
  const int d = pres.dim;
  Mat Xm(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Xm(i, j) = X(i * d + j);
  Vec out(d);
  for (int k = 0; k < d; ++k) out(k) = pres.mul[k].cwiseProduct(Xm).sum();
  return out;
}

Vec contract_first(const Cov& phi, const Vec& X, int d) {
  Vec out = Vec::Zero(d);
  for (int j = 0; j < d; ++j) out += phi(j) * X.segment(j * d, d);
  return out;
}

Vec contract_second(const Cov& phi, const Vec& X, int d) {
  Vec out(d);
  for (int j = 0; j < d; ++j) out(j) = (phi * X.segment(j * d, d))(0);
  return out;
}

// ---------------------------------------------------------------------------
// dual presentation
// ---------------------------------------------------------------------------

AlgebraPresentation dual_presentation(const AlgebraPresentation& pres, const Mat& comul,
                                      const Cov& counit, const Mat& antipode) {
  const int d = pres.dim;
  AlgebraPresentation D;
  D.dim = d;
  D.mul.assign(d, Mat(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) D.mul[k](i, j) = comul(i * d + j, k);
  D.unit = counit.transpose();
  D.invol = (pres.invol.conjugate() * antipode).transpose();
  return D;
}

// ---------------------------------------------------------------------------
// Haar state
// ---------------------------------------------------------------------------

Cov haar_state(const AlgebraPresentation& pres, const Mat& comul, double tol) {
  const int d = pres.dim;
  // Rows of the homogeneous system: for each basis index t and output index k,
  //   sum_j h_j comul((j,k),t) - h_t unit_k = 0   (left invariance)
  //   sum_j h_j comul((k,j),t) - h_t unit_k = 0   (right invariance)
  Mat sys(2 * d * d, d);
  for (int t = 0; t < d; ++t)
    for (int k = 0; k < d; ++k) {
      for (int j = 0; j < d; ++j) {
        sys(t * d + k, j) = comul(j * d + k, t);
        sys(d * d + t * d + k, j) = comul(k * d + j, t);
      }
      sys(t * d + k, t) -= pres.unit(k);
      sys(d * d + t * d + k, t) -= pres.unit(k);
    }
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < std::max(tol * smax, 1e-12)) ++null_dim;
  if (null_dim != 1)
    throw AxiomViolationError("invariant-functional space has dimension " +
                              std::to_string(null_dim) + "; expected exactly 1");
  Vec h = svd.matrixV().col(d - 1);
  cplx mass = h.transpose() * pres.unit;
  if (std::abs(mass) < 1e-12)
    throw AxiomViolationError("invariant functional vanishes on the unit; cannot normalize");
  h /= mass;
  return h.transpose();
}

// ---------------------------------------------------------------------------
// representation table
// ---------------------------------------------------------------------------

IrrepTable build_irrep_table(const AlgebraPresentation& pres, const Mat& comul, const Cov& counit,
                             const Mat& antipode, const QgOptions& opts) {
  const int d = pres.dim;
  IrrepTable tbl;
  tbl.dual_algebra = dual_presentation(pres, comul, counit, antipode);
  WedderburnOptions wo;
  wo.tol = opts.tol;
  wo.seed = opts.seed ^ 0xd0a1ULL;
  tbl.dual_blocks = wedderburn(tbl.dual_algebra, wo);

  // rows = covectors of the dual matrix units (class-major order)
  tbl.dual_units = Mat(d, d);
  int row = 0;
  for (std::size_t k = 0; k < tbl.dual_blocks.sizes.size(); ++k) {
    const int n = tbl.dual_blocks.sizes[k];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        tbl.dual_units.row(row++) = tbl.dual_blocks.matrix_unit(static_cast<int>(k), a, b).transpose();
  }
  Eigen::FullPivLU<Mat> lu(tbl.dual_units);
  if (!lu.isInvertible())
    throw ConditioningError("dual matrix units do not span the dual space");
  tbl.coeff_basis = lu.inverse();

  int off = 0;
  for (std::size_t k = 0; k < tbl.dual_blocks.sizes.size(); ++k) {
    IrrepClass cls;
    cls.n = tbl.dual_blocks.sizes[k];
    cls.coeff = tbl.coeff_basis.middleCols(off, cls.n * cls.n);
    off += cls.n * cls.n;
    tbl.classes.push_back(std::move(cls));
  }

  // trivial class: the 1-dimensional class whose coefficient is the unit
  tbl.trivial_index = -1;
  for (std::size_t a = 0; a < tbl.classes.size(); ++a) {
    if (tbl.classes[a].n != 1) continue;
    if (sup_abs(Vec(tbl.classes[a].coeff.col(0) - pres.unit)) < 1e-6) {
      tbl.trivial_index = static_cast<int>(a);
      break;
    }
  }
  if (tbl.trivial_index < 0)
    throw AxiomViolationError("no trivial representation class found (unit is not a coefficient)");
  return tbl;
}

QuantumGroup make_quantum_group(const AlgebraPresentation& pres, const Mat& comul,
                                const Cov& counit, const Mat& antipode, const Cov* provided_haar,
                                const QgOptions& opts) {
  const int d = pres.dim;
  if (comul.rows() != d * d || comul.cols() != d)
    throw StructuralError("comul must be d^2 x d");
  if (counit.size() != d || antipode.rows() != d || antipode.cols() != d)
    throw StructuralError("counit/antipode have wrong shape");

  Report alg = verify_algebra(pres, std::max(opts.tol, 1e-9));
  if (!alg.passed()) {
    const CheckResult* f = alg.first_failure();
    throw AxiomViolationError("algebra axiom '" + f->name + "' fails with residual " +
                              std::to_string(f->residual));
  }

  QuantumGroup qg;
  qg.algebra = pres;
  qg.comul = comul;
  qg.counit = counit;
  qg.antipode = antipode;

  WedderburnOptions wo;
  wo.tol = opts.tol;
  wo.seed = opts.seed;
  qg.blocks = wedderburn(pres, wo);

  qg.haar = haar_state(pres, comul, opts.tol);
  if (provided_haar != nullptr) {
    double res = sup_abs(Cov(*provided_haar - qg.haar));
    if (res > 1e-7)
      throw AxiomViolationError("provided Haar functional disagrees with the invariance solution (residual " +
                                std::to_string(res) + ")");
  }

  qg.irr = build_irrep_table(pres, comul, counit, antipode, opts);
  return qg;
}

// ---------------------------------------------------------------------------
// verify_cqg
// ---------------------------------------------------------------------------

Report verify_cqg(const QuantumGroup& qg, double tol) {
  const int d = qg.dim();
  const AlgebraPresentation& A = qg.algebra;
  Report rep = verify_algebra(A, tol);
  rep.merge(verify_blocks(A, qg.blocks, std::max(tol, 1e-8)), "blocks_");

  const Mat& C = qg.comul;
  const Mat Id = Mat::Identity(d, d);

  // comultiplication is a unital *-homomorphism
  rep.add("comul_unital", sup_abs(Vec(C * A.unit - kron_vec(A.unit, A.unit))), tol);
  double hom = 0, star_hom = 0;
  Mat tens_invol = kron(A.invol, A.invol);
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Unit(d, i);
    star_hom = std::max(star_hom,
                        sup_abs(Vec(C * A.star(ei) - tens_invol * Vec((C * ei).conjugate()))));
    for (int j = 0; j < d; ++j) {
      Vec ej = Vec::Unit(d, j);
      Vec lhs = C * A.product(ei, ej);
      Vec rhs = tensor_product_vec(A, C * ei, C * ej);
      hom = std::max(hom, sup_abs(Vec(lhs - rhs)));
    }
  }
  rep.add("comul_multiplicative", hom, tol);
  rep.add("comul_star_preserving", star_hom, tol);

  // coassociativity
  Mat left = kron(C, Id) * C;   // (D (x) id) D
  Mat right = kron(Id, C) * C;  // (id (x) D) D
  rep.add("coassociativity", sup_abs(Mat(left - right)), tol);

  // counit laws and multiplicativity
  double cl = 0, cr = 0, cm = 0;
  for (int t = 0; t < d; ++t) {
    Vec X = C.col(t);
    cl = std::max(cl, sup_abs(Vec(contract_first(qg.counit, X, d) - Vec(Vec::Unit(d, t)))));
    cr = std::max(cr, sup_abs(Vec(contract_second(qg.counit, X, d) - Vec(Vec::Unit(d, t)))));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx lhs = qg.counit * A.product(Vec(Vec::Unit(d, i)), Vec(Vec::Unit(d, j)));
      cm = std::max(cm, std::abs(lhs - qg.counit(i) * qg.counit(j)));
    }
  rep.add("counit_left", cl, tol);
  rep.add("counit_right", cr, tol);
  rep.add("counit_multiplicative", cm, tol);
  rep.add("counit_unital", std::abs(cplx(qg.counit * A.unit) - cplx(1.0)), tol);

  // antipode laws: m(S (x) id)D = eps(.)1 = m(id (x) S)D
  const Mat& S = qg.antipode;
  double sl = 0, sr = 0;
  for (int t = 0; t < d; ++t) {
    Vec X = C.col(t);
    Vec sx = multiply_tensor_legs(A, kron(S, Id) * X);
    Vec xs = multiply_tensor_legs(A, kron(Id, S) * X);
    Vec target = qg.counit(t) * A.unit;
    sl = std::max(sl, sup_abs(Vec(sx - target)));
    sr = std::max(sr, sup_abs(Vec(xs - target)));
  }
  rep.add("antipode_left", sl, tol);
  rep.add("antipode_right", sr, tol);

  // Kac relations: S^2 = id, S is *-preserving, (* S)^2 = id
  rep.add("antipode_involutive", sup_abs(Mat(S * S - Id)), tol);
  rep.add("antipode_star_preserving", sup_abs(Mat(S * A.invol - A.invol * S.conjugate())), tol);
  {
    // x -> S(x)* twice
    Mat starS = A.invol * S.conjugate();          // coords of S(x)* given coords of x (antilinear part folded)
    Mat twice = starS * starS.conjugate();
    rep.add("star_antipode_squared", sup_abs(Mat(twice - Id)), tol);
  }

  // Haar state: invariance, normalization, recomputation, positivity, trace
  {
    double inv = 0;
    for (int t = 0; t < d; ++t) {
      Vec X = C.col(t);
      inv = std::max(inv, sup_abs(Vec(contract_first(qg.haar, X, d) - qg.haar(t) * A.unit)));
      inv = std::max(inv, sup_abs(Vec(contract_second(qg.haar, X, d) - qg.haar(t) * A.unit)));
    }
    rep.add("haar_invariance", inv, tol);
    rep.add("haar_normalized", std::abs(cplx(qg.haar * A.unit) - cplx(1.0)), tol);
    Cov recomputed = haar_state(A, C, tol);
    rep.add("haar_recomputed_matches", sup_abs(Cov(qg.haar - recomputed)), std::max(tol, 1e-8));

    double trace_res = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cplx ab = qg.haar * A.product(Vec(Vec::Unit(d, i)), Vec(Vec::Unit(d, j)));
        cplx ba = qg.haar * A.product(Vec(Vec::Unit(d, j)), Vec(Vec::Unit(d, i)));
        trace_res = std::max(trace_res, std::abs(ab - ba));
      }
    rep.add("haar_tracial", trace_res, tol);

    // positivity and faithfulness via the coefficient blocks of h
    bool pos = true;
    double min_eig = 0;
    for (std::size_t k = 0; k < qg.blocks.sizes.size(); ++k) {
      const int n = qg.blocks.sizes[k];
      Mat Bk(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          Bk(a, b) = qg.haar * qg.blocks.matrix_unit(static_cast<int>(k), a, b);
      Mat H = 0.5 * (Bk + Bk.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> es(H);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      if (es.eigenvalues().minCoeff() < 1e-10) pos = false;
    }
    rep.add_flag("haar_positive_faithful", pos);
    (void)min_eig;
  }

  // representation table laws
  {
    const IrrepTable& T = qg.irr;
    int total = 0;
    for (const auto& c : T.classes) total += c.n * c.n;
    rep.add_flag("irr_dimension_count", total == d);

    double comul_law = 0, counit_law = 0, antipode_law = 0, unitary_law = 0;
    for (const auto& cls : T.classes) {
      const int n = cls.n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Vec u_ij = cls.coeff.col(i * n + j);
          Vec lhs = C * u_ij;
          Vec rhs = Vec::Zero(d * d);
          for (int k = 0; k < n; ++k)
            rhs += kron_vec(cls.coeff.col(i * n + k), cls.coeff.col(k * n + j));
          comul_law = std::max(comul_law, sup_abs(Vec(lhs - rhs)));
          counit_law = std::max(counit_law,
                                std::abs(cplx(qg.counit * u_ij) - cplx(i == j ? 1.0 : 0.0)));
          // S(u_ij) = (u_ji)*
          antipode_law = std::max(
              antipode_law, sup_abs(Vec(S * u_ij - A.star(cls.coeff.col(j * n + i)))));
        }
      // unitarity: sum_k u_ik (u_jk)* = delta_ij 1 and sum_k (u_ki)* u_kj = delta_ij 1
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Vec srow = Vec::Zero(d), scol = Vec::Zero(d);
          for (int k = 0; k < n; ++k) {
            srow += A.product(cls.coeff.col(i * n + k), A.star(cls.coeff.col(j * n + k)));
            scol += A.product(A.star(cls.coeff.col(k * n + i)), cls.coeff.col(k * n + j));
          }
          Vec target = (i == j) ? Vec(A.unit) : Vec(Vec::Zero(d));
          unitary_law = std::max(unitary_law, sup_abs(Vec(srow - target)));
          unitary_law = std::max(unitary_law, sup_abs(Vec(scol - target)));
        }
    }
    rep.add("irr_comul_law", comul_law, std::max(tol, 1e-8));
    rep.add("irr_counit_law", counit_law, std::max(tol, 1e-8));
    rep.add("irr_antipode_law", antipode_law, std::max(tol, 1e-8));
    rep.add("irr_unitarity", unitary_law, std::max(tol, 1e-8));

    // (h (x) id)(u^alpha) = 0 for nontrivial classes
    double vanish = 0;
    for (std::size_t a = 0; a < T.classes.size(); ++a) {
      if (static_cast<int>(a) == T.trivial_index) continue;
      const auto& cls = T.classes[a];
      for (int i = 0; i < cls.n; ++i)
        for (int j = 0; j < cls.n; ++j)
          vanish = std::max(vanish, std::abs(cplx(qg.haar * cls.coeff.col(i * cls.n + j))));
    }
    rep.add("irr_haar_vanishes_nontrivial", vanish, std::max(tol, 1e-8));
  }

  return rep;
}

Report check_orthogonality(const QuantumGroup& qg, double tol) {
  Report rep;
  const AlgebraPresentation& A = qg.algebra;
  const IrrepTable& T = qg.irr;
  double res = 0;
  for (std::size_t a = 0; a < T.classes.size(); ++a) {
    const auto& ca = T.classes[a];
    for (std::size_t b = 0; b < T.classes.size(); ++b) {
      const auto& cb = T.classes[b];
      for (int i = 0; i < ca.n; ++i)
        for (int j = 0; j < ca.n; ++j)
          for (int k = 0; k < cb.n; ++k)
            for (int l = 0; l < cb.n; ++l) {
              cplx target = (a == b && i == k && j == l) ? cplx(1.0 / ca.n) : cplx(0.0);
              Vec u = ca.coeff.col(i * ca.n + j);
              Vec v = cb.coeff.col(k * cb.n + l);
              cplx first = qg.haar * A.product(u, A.star(v));
              cplx second = qg.haar * A.product(A.star(u), v);
              res = std::max(res, std::abs(first - target));
              res = std::max(res, std::abs(second - target));
            }
    }
  }
  rep.add("orthogonality", res, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// classical constructors
// ---------------------------------------------------------------------------

int validate_group_table(const GroupTable& table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw StructuralError("group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw StructuralError("group table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw StructuralError("group table entry out of range");
  }
  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int g = 0; g < n; ++g)
      if (table[e][g] != g || table[g][e] != g) ok = false;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) throw StructuralError("group table has no identity element");
  for (int g = 0; g < n; ++g) {
    bool has_inverse = false;
    for (int h = 0; h < n; ++h)
      if (table[g][h] == identity && table[h][g] == identity) has_inverse = true;
    if (!has_inverse) throw StructuralError("group table has an element without inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw StructuralError("group table is not associative");
  return identity;
}

static std::vector<int> table_inverses(const GroupTable& table, int identity) {
  const int n = static_cast<int>(table.size());
  std::vector<int> inv(n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (table[g][h] == identity) inv[g] = h;
  return inv;
}

QuantumGroup function_algebra(const GroupTable& table, const QgOptions& opts) {
  const int identity = validate_group_table(table);
  const int n = static_cast<int>(table.size());
  std::vector<int> inv = table_inverses(table, identity);

  AlgebraPresentation A;
  A.dim = n;
  A.mul.assign(n, Mat::Zero(n, n));
  for (int g = 0; g < n; ++g) A.mul[g](g, g) = 1.0;  // e_g e_h = delta_{gh} e_g
  A.unit = Vec::Ones(n);
  A.invol = Mat::Identity(n, n);

  Mat comul = Mat::Zero(n * n, n);
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) comul(h * n + k, table[h][k]) = 1.0;
  Cov counit = Cov::Zero(n);
  counit(identity) = 1.0;
  Mat S = Mat::Zero(n, n);
  for (int g = 0; g < n; ++g) S(inv[g], g) = 1.0;
  Cov haar = Cov::Constant(n, 1.0 / n);

  return make_quantum_group(A, comul, counit, S, &haar, opts);
}

QuantumGroup group_algebra(const GroupTable& table, const QgOptions& opts) {
  const int identity = validate_group_table(table);
  const int n = static_cast<int>(table.size());
  std::vector<int> inv = table_inverses(table, identity);

  AlgebraPresentation A;
  A.dim = n;
  A.mul.assign(n, Mat::Zero(n, n));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) A.mul[table[g][h]](g, h) = 1.0;
  A.unit = Vec::Zero(n);
  A.unit(identity) = 1.0;
  A.invol = Mat::Zero(n, n);
  for (int g = 0; g < n; ++g) A.invol(inv[g], g) = 1.0;

  Mat comul = Mat::Zero(n * n, n);
  for (int g = 0; g < n; ++g) comul(g * n + g, g) = 1.0;
  Cov counit = Cov::Ones(n);
  Mat S = Mat::Zero(n, n);
  for (int g = 0; g < n; ++g) S(inv[g], g) = 1.0;
  Cov haar = Cov::Zero(n);
  haar(identity) = 1.0;

  return make_quantum_group(A, comul, counit, S, &haar, opts);
}

// ---------------------------------------------------------------------------
// builtins
// ---------------------------------------------------------------------------

GroupTable cyclic_table(int n) {
  GroupTable t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return t;
}

GroupTable klein_table() {
  // index = 2a + b for (a,b) in Z2 x Z2
  GroupTable t(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = (((i >> 1) ^ (j >> 1)) << 1) | ((i ^ j) & 1);
  return t;
}

GroupTable s3_table() {
  // permutations of {0,1,2} in lexicographic one-line order;
  // composition (s . t)(x) = s(t(x))
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto find = [&](const int p[3]) {
    for (int i = 0; i < 6; ++i)
      if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2]) return i;
    return -1;
  };
  GroupTable t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      int comp[3];
      for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
      t[i][j] = find(comp);
    }
  return t;
}

QuantumGroup builtin_quantum_group(const std::string& name, const QgOptions& opts) {
  GroupTable table;
  if (name.size() < 3 || (name[0] != 'c' && name[0] != 'g') || name[1] != ':')
    throw StructuralError("unknown builtin '" + name + "'");
  std::string grp = name.substr(2);
  if (grp == "Z2")
    table = cyclic_table(2);
  else if (grp == "Z3")
    table = cyclic_table(3);
  else if (grp == "Z4")
    table = cyclic_table(4);
  else if (grp == "Z2xZ2")
    table = klein_table();
  else if (grp == "S3")
    table = s3_table();
  else
    throw StructuralError("unknown builtin '" + name + "'");
  return name[0] == 'c' ? function_algebra(table, opts) : group_algebra(table, opts);
}

std::vector<std::string> builtin_names() {
  return {"c:Z2", "c:Z3", "c:Z4", "c:Z2xZ2", "c:S3",
          "g:Z2", "g:Z3", "g:Z4", "g:Z2xZ2", "g:S3"};
}

}  // namespace fqg
