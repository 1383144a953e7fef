#include "fqg/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fqg {

// ---------------------------------------------------------------------------
// AlgebraPresentation
// ---------------------------------------------------------------------------

Vec AlgebraPresentation::product(const Vec& x, const Vec& y) const {
  Vec z(dim);
  for (int k = 0; k < dim; ++k) z(k) = x.transpose() * mul[k] * y;
  return z;
}

Mat AlgebraPresentation::left_op(const Vec& x) const {
  Mat L(dim, dim);
  for (int k = 0; k < dim; ++k) L.row(k) = x.transpose() * mul[k];
  return L;
}

Mat AlgebraPresentation::right_op(const Vec& y) const {
  Mat R(dim, dim);
  for (int k = 0; k < dim; ++k) R.row(k) = (mul[k] * y).transpose();
  return R;
}

Vec AlgebraPresentation::star(const Vec& x) const { return invol * x.conjugate(); }

Cov AlgebraPresentation::regular_trace() const {
  Cov tau(dim);
  for (int i = 0; i < dim; ++i) {
    cplx t = 0;
    for (int k = 0; k < dim; ++k) t += mul[k](i, k);
    tau(i) = t / static_cast<double>(dim);
  }
  return tau;
}

Mat AlgebraPresentation::gns_gram() const {
  Cov tau = regular_trace();
  Mat G(dim, dim);
  for (int i = 0; i < dim; ++i) {
    Vec ei_star = invol.col(i);  // coords of e_i* (conj of a basis vector is itself)
    for (int j = 0; j < dim; ++j) G(i, j) = tau * product(ei_star, Vec(Vec::Unit(dim, j)));
  }
  return G;
}

// ---------------------------------------------------------------------------
// BlockStructure
// ---------------------------------------------------------------------------

Mat BlockStructure::block_of(const Vec& x, int k) const {
  const int n = sizes[k];
  Vec c = iso * x;
  Mat B(n, n);
  const int off = block_offset(k);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) B(a, b) = c(off + a * n + b);
  return B;
}

std::vector<Mat> BlockStructure::blocks_of(const Vec& x) const {
  std::vector<Mat> out;
  out.reserve(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) out.push_back(block_of(x, static_cast<int>(k)));
  return out;
}

Vec BlockStructure::from_blocks(const std::vector<Mat>& blocks) const {
  Vec c(dim());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const int n = sizes[k];
    const int off = block_offset(static_cast<int>(k));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) c(off + a * n + b) = blocks[k](a, b);
  }
  return iso_inv * c;
}

Vec BlockStructure::matrix_unit(int k, int a, int b) const {
  Vec c = Vec::Zero(dim());
  c(block_offset(k) + a * sizes[k] + b) = 1.0;
  return iso_inv * c;
}

// ---------------------------------------------------------------------------
// verify_algebra
// ---------------------------------------------------------------------------

Report verify_algebra(const AlgebraPresentation& pres, double tol) {
  const int d = pres.dim;
  if (d <= 0) throw StructuralError("algebra dimension must be positive");
  if (static_cast<int>(pres.mul.size()) != d) throw StructuralError("mul tensor has wrong length");
  for (const Mat& m : pres.mul)
    if (m.rows() != d || m.cols() != d) throw StructuralError("mul component has wrong shape");
  if (pres.unit.size() != d) throw StructuralError("unit has wrong length");
  if (pres.invol.rows() != d || pres.invol.cols() != d)
    throw StructuralError("invol has wrong shape");

  Report rep;

  double assoc = 0;
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Unit(d, i);
    for (int j = 0; j < d; ++j) {
      Vec eij = pres.product(ei, Vec(Vec::Unit(d, j)));
      Mat Lij = pres.left_op(eij);
      Mat Rjk_base = pres.left_op(ei);
      for (int k = 0; k < d; ++k) {
        Vec ejk = pres.product(Vec(Vec::Unit(d, j)), Vec(Vec::Unit(d, k)));
        Vec lhs = Lij.col(k);  // (e_i e_j) e_k
        Vec rhs = Rjk_base * ejk;
        assoc = std::max(assoc, sup_abs(Vec(lhs - rhs)));
      }
    }
  }
  rep.add("associativity", assoc, tol);

  double unit_res = 0;
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Unit(d, i);
    unit_res = std::max(unit_res, sup_abs(Vec(pres.product(pres.unit, ei) - ei)));
    unit_res = std::max(unit_res, sup_abs(Vec(pres.product(ei, pres.unit) - ei)));
  }
  rep.add("unit_law", unit_res, tol);

  // involution: antilinear, involutive, antimultiplicative, fixes the unit
  rep.add("involution_involutive", sup_abs(Mat(pres.invol * pres.invol.conjugate() - Mat::Identity(d, d))), tol);
  rep.add("involution_fixes_unit", sup_abs(Vec(pres.star(pres.unit) - pres.unit)), tol);
  double antimul = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec ei = Vec::Unit(d, i), ej = Vec::Unit(d, j);
      Vec lhs = pres.star(pres.product(ei, ej));
      Vec rhs = pres.product(pres.star(ej), pres.star(ei));
      antimul = std::max(antimul, sup_abs(Vec(lhs - rhs)));
    }
  rep.add("involution_antimultiplicative", antimul, tol);

  return rep;
}

// ---------------------------------------------------------------------------
// wedderburn
// ---------------------------------------------------------------------------

namespace {

// Deterministic generic element used for canonical block ordering.
Vec generic_element(int d) {
  Vec g(d);
  for (int i = 0; i < d; ++i)
    g(i) = cplx(std::cos(1.7 * (i + 1)) + 0.31 * std::sin(0.83 * (i + 1) * (i + 1)),
                0.27 * std::sin(2.9 * (i + 1)) + 0.13 * std::cos(1.1 * (i + 1) * (i + 1)));
  return g;
}

struct GnsFrame {
  Mat T;     // coords -> GNS-orthonormal coords
  Mat Tinv;  // inverse
};

GnsFrame gns_frame(const AlgebraPresentation& pres) {
  Mat G = pres.gns_gram();
  Mat Gh = 0.5 * (G + G.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Gh);
  double lmax = es.eigenvalues().maxCoeff();
  double lmin = es.eigenvalues().minCoeff();
  if (lmax <= 0 || lmin < 1e-12 * lmax)
    throw DecompositionError(
        "GNS form of the regular trace is degenerate: the algebra is not semisimple "
        "(or the involution is incompatible with the product)");
  Vec sqrt_l = es.eigenvalues().cwiseSqrt().cast<cplx>();
  GnsFrame f;
  f.T = sqrt_l.asDiagonal() * es.eigenvectors().adjoint();
  f.Tinv = es.eigenvectors() * sqrt_l.cwiseInverse().asDiagonal();
  return f;
}

// Basis of the center {z : zx = xz for all x}, as columns.
Mat center_basis(const AlgebraPresentation& pres) {
  const int d = pres.dim;
  Mat stacked(d * d, d);
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Unit(d, i);
    stacked.middleRows(i * d, d) = pres.left_op(ei) - pres.right_op(ei);
  }
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > std::max(1e-10 * smax, 1e-12)) ++rank;
  int m = d - rank;
  if (m < 1) throw DecompositionError("center of the algebra is trivial: no unit?");
  return svd.matrixV().rightCols(m);
}

// Cluster sorted eigenvalues into `m` groups at the m-1 largest gaps.
// Returns cluster boundaries (index of first element of each cluster) or
// nullopt when the separation is numerically ambiguous.
std::optional<std::vector<int>> cluster_eigenvalues(const Eigen::VectorXd& lam, int m,
                                                    double ambiguity = 50.0) {
  const int n = static_cast<int>(lam.size());
  if (m == 1) return std::vector<int>{0};
  std::vector<std::pair<double, int>> gaps;  // (gap, position after which it opens)
  for (int i = 0; i + 1 < n; ++i) gaps.push_back({lam(i + 1) - lam(i), i});
  std::sort(gaps.begin(), gaps.end(), [](auto& a, auto& b) { return a.first > b.first; });
  if (static_cast<int>(gaps.size()) < m - 1) return std::nullopt;
  double smallest_split = gaps[m - 2].first;
  double largest_kept = (static_cast<int>(gaps.size()) > m - 1) ? gaps[m - 1].first : 0.0;
  double scale = std::max(1.0, lam(n - 1) - lam(0));
  if (smallest_split < 1e-7 * scale) return std::nullopt;
  if (largest_kept > smallest_split / ambiguity) return std::nullopt;
  std::vector<int> cuts;
  for (int i = 0; i < m - 1; ++i) cuts.push_back(gaps[i].second + 1);
  cuts.push_back(0);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

struct RawBlock {
  int n = 0;
  std::vector<Vec> units;  // coords of E_{ab}, index a*n+b
  std::vector<double> sort_key;
};

// Attempt a full decomposition with one random stream; throws on failure so
// the caller can retry with a fresh stream.
std::vector<RawBlock> try_decompose(const AlgebraPresentation& pres, const GnsFrame& F,
                                    const Mat& Z, CounterRng rng, double tol) {
  const int d = pres.dim;
  const int m = static_cast<int>(Z.cols());
  const Cov tau = pres.regular_trace();

  // --- split the center: random self-adjoint central element ---
  // Complex coefficients before symmetrizing: with real ones the draw stays
  // inside the star-fixed span of the center basis, which can be too small to
  // separate conjugate pairs of characters.
  Vec w = Vec::Zero(d);
  for (int t = 0; t < m; ++t) w += rng.cnormal() * Z.col(t);
  w = 0.5 * (w + pres.star(w));

  Mat Lw = F.T * pres.left_op(w) * F.Tinv;
  Lw = 0.5 * (Lw + Lw.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Lw);
  auto cuts_opt = cluster_eigenvalues(es.eigenvalues(), m);
  if (!cuts_opt) throw ConditioningError("central spectrum not separated");
  const std::vector<int>& cuts = *cuts_opt;

  // central projections: component of the unit in each spectral subspace
  std::vector<Vec> central(m);
  {
    Vec u_gns = F.T * pres.unit;
    for (int k = 0; k < m; ++k) {
      int lo = cuts[k];
      int hi = (k + 1 < m) ? cuts[k + 1] : d;
      Mat Vk = es.eigenvectors().middleCols(lo, hi - lo);
      central[k] = F.Tinv * (Vk * (Vk.adjoint() * u_gns));
    }
  }
  for (int k = 0; k < m; ++k) {
    const Vec& p = central[k];
    if (sup_abs(Vec(pres.product(p, p) - p)) > 1e-7 || sup_abs(Vec(pres.star(p) - p)) > 1e-7)
      throw ConditioningError("central projection residual too large");
  }

  const Vec g = generic_element(d);

  std::vector<RawBlock> raw;
  for (int k = 0; k < m; ++k) {
    const Vec& p = central[k];
    // ideal basis (GNS-orthonormal)
    Mat Lp = F.T * pres.left_op(p) * F.Tinv;
    Lp = 0.5 * (Lp + Lp.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> pe(Lp);
    std::vector<int> keep;
    for (int i = 0; i < d; ++i)
      if (pe.eigenvalues()(i) > 0.5) keep.push_back(i);
    const int dk = static_cast<int>(keep.size());
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dk))));
    if (n * n != dk) throw ConditioningError("ideal dimension is not a perfect square");

    RawBlock blk;
    blk.n = n;

    if (n == 1) {
      // the central projection is itself the single matrix unit
      blk.units = {p};
    } else {
      // random self-adjoint element of the ideal
      Vec r(d);
      for (int i = 0; i < d; ++i) r(i) = rng.cnormal();
      Vec y = pres.product(p, pres.product(r, p));
      y = 0.5 * (y + pres.star(y));

      // its spectrum within the block, via right multiplication on the ideal
      Mat basis(d, dk);
      for (int c = 0; c < dk; ++c) basis.col(c) = pe.eigenvectors().col(keep[c]);
      Mat Ry = basis.adjoint() * (F.T * pres.right_op(y) * F.Tinv) * basis;
      Ry = 0.5 * (Ry + Ry.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> ye(Ry);
      auto ycuts = cluster_eigenvalues(ye.eigenvalues(), n);
      if (!ycuts) throw ConditioningError("block spectrum not separated");
      std::vector<double> mu(n);
      for (int a = 0; a < n; ++a) {
        int lo = (*ycuts)[a];
        int hi = (a + 1 < n) ? (*ycuts)[a + 1] : dk;
        double s = 0;
        for (int i = lo; i < hi; ++i) s += ye.eigenvalues()(i);
        mu[a] = s / (hi - lo);
      }

      // diagonal matrix units: Lagrange interpolation of y's spectral projections
      std::vector<Vec> q(n);
      for (int a = 0; a < n; ++a) {
        Vec acc = p;
        for (int b = 0; b < n; ++b) {
          if (b == a) continue;
          Vec factor = (y - mu[b] * p) / (mu[a] - mu[b]);
          acc = pres.product(acc, factor);
        }
        q[a] = acc;
        if (sup_abs(Vec(pres.product(acc, acc) - acc)) > 1e-6)
          throw ConditioningError("spectral projection residual too large");
      }

      // off-diagonal units by first-column pivoting from q[0]
      auto gns_norm2 = [&](const Vec& v) {
        return std::abs((tau * pres.product(pres.star(v), v))(0));
      };
      std::vector<Vec> E1(n);  // E_{0a}
      E1[0] = q[0];
      for (int a = 1; a < n; ++a) {
        // first basis element giving a usable pivot
        Vec best = Vec::Zero(d);
        double best_norm = 0;
        std::vector<std::pair<double, Vec>> cands;
        for (int t = 0; t < d; ++t) {
          Vec wv = pres.product(q[0], pres.product(Vec(Vec::Unit(d, t)), q[a]));
          double nn = gns_norm2(wv);
          cands.push_back({nn, wv});
          best_norm = std::max(best_norm, nn);
        }
        for (auto& [nn, wv] : cands) {
          if (nn > 0.1 * best_norm && nn > 1e-14) {
            best = wv;
            break;
          }
        }
        if (best_norm <= 1e-14) throw ConditioningError("no pivot links diagonal units");
        // normalize: E_{0a} E_{0a}* = q[0]
        Vec ww = pres.product(best, pres.star(best));
        cplx lam = (tau * ww)(0) / (tau * q[0])(0);
        if (std::abs(lam) < 1e-14) throw ConditioningError("pivot normalization degenerate");
        E1[a] = best / std::sqrt(std::abs(lam));
      }
      blk.units.assign(n * n, Vec());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          blk.units[a * n + b] = pres.product(pres.star(E1[a]), E1[b]);
    }

    // canonical sort key: (n, Re tr g|_k, Re tr (g^2)|_k, Re tr (g^3)|_k)
    // computed from matrix-unit coefficients
    {
      Vec gs = 0.5 * (g + pres.star(g));
      Vec g1 = pres.product(p, gs);
      Vec g2 = pres.product(g1, gs);
      Vec g3 = pres.product(g2, gs);
      auto tr = [&](const Vec& x) {
        cplx s = 0;
        for (int a = 0; a < blk.n; ++a)
          s += (tau * pres.product(blk.units[a * blk.n + a], x))(0);
        return (static_cast<double>(d) / blk.n) * s;
      };
      blk.sort_key = {static_cast<double>(blk.n), tr(g1).real(), tr(g2).real(), tr(g3).real()};
    }
    raw.push_back(std::move(blk));
  }

  std::sort(raw.begin(), raw.end(), [](const RawBlock& a, const RawBlock& b) {
    for (std::size_t i = 0; i < a.sort_key.size(); ++i) {
      if (std::abs(a.sort_key[i] - b.sort_key[i]) > 1e-7) return a.sort_key[i] < b.sort_key[i];
    }
    return false;
  });
  return raw;
}

}  // namespace

BlockStructure wedderburn(const AlgebraPresentation& pres, const WedderburnOptions& opts) {
  Report basic = verify_algebra(pres, std::max(opts.tol, 1e-9));
  if (!basic.passed()) {
    const CheckResult* f = basic.first_failure();
    throw AxiomViolationError("presentation fails " + f->name + " with residual " +
                              std::to_string(f->residual));
  }
  const int d = pres.dim;

  if (d == 1) {
    BlockStructure bs;
    bs.sizes = {1};
    bs.iso = Mat::Constant(1, 1, pres.mul[0](0, 0));
    bs.iso_inv = bs.iso.inverse();
    return bs;
  }

  GnsFrame F = gns_frame(pres);
  Mat Z = center_basis(pres);

  CounterRng base(opts.seed);
  std::string last_err = "unknown";
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    try {
      auto raw = try_decompose(pres, F, Z, base.fork(static_cast<std::uint64_t>(attempt)), opts.tol);
      BlockStructure bs;
      Mat inv(d, d);
      int col = 0;
      for (const auto& blk : raw) {
        bs.sizes.push_back(blk.n);
        for (const Vec& u : blk.units) inv.col(col++) = u;
      }
      if (col != d) throw ConditioningError("block dimensions do not fill the algebra");
      bs.iso_inv = inv;
      Eigen::FullPivLU<Mat> lu(inv);
      if (!lu.isInvertible()) throw ConditioningError("matrix-unit basis is singular");
      bs.iso = lu.inverse();
      Report tr = verify_blocks(pres, bs, std::max(1e-8, opts.tol));
      if (!tr.passed()) throw ConditioningError("block transport residual too large");
      return bs;
    } catch (const ConditioningError& e) {
      last_err = e.what();
      continue;
    }
  }
  throw ConditioningError("wedderburn failed after retries: " + last_err);
}

Report verify_blocks(const AlgebraPresentation& pres, const BlockStructure& blocks, double tol) {
  Report rep;
  const int d = pres.dim;
  int sq = 0;
  for (int n : blocks.sizes) sq += n * n;
  rep.add_flag("sizes_fill_dimension", sq == d);
  if (sq != d) return rep;

  double mul_res = 0, inv_res = 0;
  const int m = static_cast<int>(blocks.sizes.size());
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Unit(d, i);
    auto bi = blocks.blocks_of(ei);
    // involution -> blockwise adjoint
    auto bs = blocks.blocks_of(pres.star(ei));
    for (int k = 0; k < m; ++k) inv_res = std::max(inv_res, sup_abs(Mat(bs[k] - bi[k].adjoint())));
    for (int j = 0; j < d; ++j) {
      Vec ej = Vec::Unit(d, j);
      auto bj = blocks.blocks_of(ej);
      auto bij = blocks.blocks_of(pres.product(ei, ej));
      for (int k = 0; k < m; ++k)
        mul_res = std::max(mul_res, sup_abs(Mat(bij[k] - bi[k] * bj[k])));
    }
  }
  rep.add("product_transport", mul_res, tol);
  rep.add("involution_transport", inv_res, tol);

  double unit_res = 0;
  auto bu = blocks.blocks_of(pres.unit);
  for (int k = 0; k < m; ++k)
    unit_res = std::max(unit_res, sup_abs(Mat(bu[k] - Mat::Identity(blocks.sizes[k], blocks.sizes[k]))));
  rep.add("unit_transport", unit_res, tol);
  return rep;
}

double operator_norm(const AlgebraPresentation& pres, const BlockStructure& blocks, const Vec& x) {
  (void)pres;
  double nrm = 0;
  for (std::size_t k = 0; k < blocks.sizes.size(); ++k) {
    Mat B = blocks.block_of(x, static_cast<int>(k));
    Eigen::JacobiSVD<Mat> svd(B);
    if (svd.singularValues().size()) nrm = std::max(nrm, svd.singularValues()(0));
  }
  return nrm;
}

bool is_positive_element(const AlgebraPresentation& pres, const BlockStructure& blocks,
                         const Vec& x, double tol) {
  double sa = sup_abs(Vec(pres.star(x) - x));
  if (sa > std::sqrt(tol) * (1.0 + sup_abs(x)))
    throw DomainError("is_positive_element: element is not self-adjoint (residual " +
                      std::to_string(sa) + ")");
  for (std::size_t k = 0; k < blocks.sizes.size(); ++k) {
    Mat B = blocks.block_of(x, static_cast<int>(k));
    Mat H = 0.5 * (B + B.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    if (es.eigenvalues().minCoeff() < -tol) return false;
  }
  return true;
}

AlgebraPresentation tensor(const AlgebraPresentation& A, const AlgebraPresentation& B) {
  AlgebraPresentation T;
  const int da = A.dim, db = B.dim;
  T.dim = da * db;
  T.mul.resize(T.dim);
  for (int ka = 0; ka < da; ++ka)
    for (int kb = 0; kb < db; ++kb) T.mul[ka * db + kb] = kron(A.mul[ka], B.mul[kb]);
  T.unit = kron_vec(A.unit, B.unit);
  T.invol = kron(A.invol, B.invol);
  return T;
}

Vec tensor_product_vec(const AlgebraPresentation& A, const Vec& X, const Vec& Y) {
  const int d = A.dim;
  Mat Mx(d, d), My(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Mx(i, k) = X(i * d + k);
      My(i, k) = Y(i * d + k);
    }
  Vec Z(d * d);
  for (int q = 0; q < d; ++q) {
    Mat right = Mx * A.mul[q] * My.transpose();  // (i,j) -> sum_{kl} Mx(i,k) mul_q(k,l) My(j,l)
    for (int p = 0; p < d; ++p) Z(p * d + q) = A.mul[p].cwiseProduct(right).sum();
  }
  return Z;
}

}  // namespace fqg
