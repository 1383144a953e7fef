#include "fqg/functionals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace fqg {

namespace {

// Hermitian part, PSD projection, and sup-distance from the PSD cone.
Mat hermitian_part(const Mat& b) { return 0.5 * (b + b.adjoint()); }

Mat psd_projection(const Mat& b) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(b));
  Vec lam = es.eigenvalues().cast<cplx>();
  for (int i = 0; i < lam.size(); ++i)
    lam(i) = std::max(0.0, lam(i).real());
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

double psd_distance(const Mat& b) { return sup_abs(Mat(b - psd_projection(b))); }

double nuclear_norm(const Mat& b) {
  if (b.rows() == 1 && b.cols() == 1) return std::abs(b(0, 0));
  Eigen::JacobiSVD<Mat> svd(b);
  return svd.singularValues().sum();
}

}  // namespace

// --- convolution and involution ------------------------------------------------

Functional convolve_with(const Mat& comul, const Functional& a, const Functional& b) {
  if (a.size() * b.size() != comul.rows())
    throw StructuralError("convolve_with: functional sizes do not match the comultiplication");
  return kron_cov(a, b) * comul;
}

Functional star_with(const Mat& invol, const Mat& antipode, const Functional& a) {
  // a*(x) = conj(a(S(x)*));  S(x)* = J conj(S) conj(x), so a* = conj(a) conj(J) S.
  return a.conjugate() * invol.conjugate() * antipode;
}

Functional convolve(const QuantumGroup& qg, const Functional& a, const Functional& b) {
  return convolve_with(qg.comul, a, b);
}

Functional star(const QuantumGroup& qg, const Functional& a) {
  return star_with(qg.algebra.invol, qg.antipode, a);
}

Functional convolution_power(const QuantumGroup& qg, const Functional& a, long n) {
  if (n < 0) throw DomainError("convolution_power: exponent must be non-negative");
  Functional acc = qg.counit;
  Functional base = a;
  long k = n;
  while (k > 0) {
    if (k & 1) acc = convolve(qg, acc, base);
    k >>= 1;
    if (k > 0) base = convolve(qg, base, base);
  }
  return acc;
}

Functional hermitian_adjoint(const AlgebraPresentation& pres, const Functional& a) {
  // x |-> conj(a(x*)) = conj(a J conj(x)) = conj(a) conj(J) x.
  return a.conjugate() * pres.invol.conjugate();
}

bool is_hermitian_functional(const AlgebraPresentation& pres, const Functional& a, double tol) {
  return sup_abs(Functional(a - hermitian_adjoint(pres, a))) <= tol * (1.0 + sup_abs(a));
}

// --- coefficient blocks ----------------------------------------------------------

std::vector<Mat> coefficient_blocks(const BlockStructure& blocks, const Functional& f) {
  Functional c = f * blocks.iso_inv;  // values on the matrix units
  std::vector<Mat> out;
  out.reserve(blocks.sizes.size());
  for (std::size_t k = 0; k < blocks.sizes.size(); ++k) {
    const int n = blocks.sizes[k];
    const int off = blocks.block_offset(k);
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = c(off + i * n + j);
    out.push_back(std::move(b));
  }
  return out;
}

Functional functional_from_blocks(const BlockStructure& blocks, const std::vector<Mat>& coeff) {
  if (coeff.size() != blocks.sizes.size())
    throw StructuralError("functional_from_blocks: wrong number of blocks");
  Functional c = Functional::Zero(blocks.dim());
  for (std::size_t k = 0; k < blocks.sizes.size(); ++k) {
    const int n = blocks.sizes[k];
    if (coeff[k].rows() != n || coeff[k].cols() != n)
      throw StructuralError("functional_from_blocks: block size mismatch");
    const int off = blocks.block_offset(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(off + i * n + j) = coeff[k](i, j);
  }
  return c * blocks.iso;
}

std::vector<Mat> coefficient_blocks(const QuantumGroup& qg, const Functional& f) {
  return coefficient_blocks(qg.blocks, f);
}

Functional functional_from_blocks(const QuantumGroup& qg, const std::vector<Mat>& coeff) {
  return functional_from_blocks(qg.blocks, coeff);
}

// --- norm, positivity, Jordan splitting ------------------------------------------

double functional_norm(const BlockStructure& blocks, const Functional& f) {
  double s = 0.0;
  for (const Mat& b : coefficient_blocks(blocks, f)) s += nuclear_norm(b);
  return s;
}

double functional_norm(const QuantumGroup& qg, const Functional& f) {
  return functional_norm(qg.blocks, f);
}

bool is_positive_functional(const BlockStructure& blocks, const Functional& f, double tol) {
  for (const Mat& b : coefficient_blocks(blocks, f))
    if (psd_distance(b) > tol) return false;
  return true;
}

bool is_positive_functional(const QuantumGroup& qg, const Functional& f, double tol) {
  return is_positive_functional(qg.blocks, f, tol);
}

bool is_state(const AlgebraPresentation& pres, const BlockStructure& blocks, const Functional& f,
              double tol) {
  if (std::abs(cplx(f * pres.unit) - 1.0) > tol) return false;
  return is_positive_functional(blocks, f, tol);
}

bool is_state(const QuantumGroup& qg, const Functional& f, double tol) {
  return is_state(qg.algebra, qg.blocks, f, tol);
}

std::optional<std::pair<Functional, Functional>> jordan_split(const BlockStructure& blocks,
                                                              const Functional& f, double tol) {
  std::vector<Mat> coeff = coefficient_blocks(blocks, f);
  std::vector<Mat> plus, minus;
  for (const Mat& b : coeff) {
    const int n = static_cast<int>(b.rows());
    const Mat zero = Mat::Zero(n, n);
    if (psd_distance(b) <= tol) {
      plus.push_back(b);
      minus.push_back(zero);
    } else if (psd_distance(Mat(-b)) <= tol) {
      plus.push_back(zero);
      minus.push_back(Mat(-b));
    } else {
      return std::nullopt;  // indefinite (or non-Hermitian) block
    }
  }
  return std::make_pair(functional_from_blocks(blocks, plus),
                        functional_from_blocks(blocks, minus));
}

std::optional<std::pair<Functional, Functional>> jordan_split(const QuantumGroup& qg,
                                                              const Functional& f, double tol) {
  return jordan_split(qg.blocks, f, tol);
}

// --- Fourier transform -------------------------------------------------------------

FourierImage fourier(const QuantumGroup& qg, const Functional& f) {
  const IrrepTable& irr = qg.irr;
  Functional c = f * irr.coeff_basis;  // values on the u^alpha_{ij}
  FourierImage img;
  img.blocks_img.reserve(irr.classes.size());
  for (std::size_t a = 0; a < irr.classes.size(); ++a) {
    const int n = irr.classes[a].n;
    const int off = irr.offset(a);
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = c(off + i * n + j);
    img.blocks_img.push_back(std::move(b));
  }
  return img;
}

Functional inverse_fourier(const QuantumGroup& qg, const FourierImage& img) {
  const IrrepTable& irr = qg.irr;
  if (img.blocks_img.size() != irr.classes.size())
    throw StructuralError("inverse_fourier: wrong number of blocks");
  Functional c = Functional::Zero(qg.dim());
  for (std::size_t a = 0; a < irr.classes.size(); ++a) {
    const int n = irr.classes[a].n;
    if (img.blocks_img[a].rows() != n || img.blocks_img[a].cols() != n)
      throw StructuralError("inverse_fourier: block size mismatch");
    const int off = irr.offset(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(off + i * n + j) = img.blocks_img[a](i, j);
  }
  return c * irr.dual_units;
}

// --- dual quantum group ---------------------------------------------------------------

QuantumGroup dual_quantum_group(const QuantumGroup& qg, const QgOptions& opts) {
  const int d = qg.dim();
  AlgebraPresentation dual =
      dual_presentation(qg.algebra, qg.comul, qg.counit, qg.antipode);

  // Comultiplication dual to the product: D(w)(x (x) y) = w(xy).
  Mat comul_d(d * d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) comul_d(i * d + j, k) = qg.algebra.mul[k](i, j);
  Cov counit_d = qg.algebra.unit.transpose();
  Mat antipode_d = qg.antipode.transpose();

  // Haar = normalized block-trace: w |-> sum_a n_a Tr(w^(a)) / sum_a n_a^2,
  // written as a covector against the dual coordinates.
  double nsq = 0.0;
  for (const IrrepClass& cl : qg.irr.classes) nsq += double(cl.n) * cl.n;
  Vec wvec = Vec::Zero(d);
  for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
    const int n = qg.irr.classes[a].n;
    const int off = qg.irr.offset(a);
    for (int i = 0; i < n; ++i) wvec(off + i * n + i) = double(n) / nsq;
  }
  Cov haar_d = (qg.irr.coeff_basis * wvec).transpose();

  QgOptions dual_opts = opts;
  dual_opts.seed = opts.seed ^ 0xd0a1;
  return make_quantum_group(dual, comul_d, counit_d, antipode_d, &haar_d, dual_opts);
}

Report compare_structures(const QuantumGroup& a, const QuantumGroup& b, double tol) {
  Report rep;
  const bool same_dim = a.dim() == b.dim();
  rep.add_flag("same_dimension", same_dim);
  if (!same_dim) return rep;
  double mul_res = 0.0;
  for (int k = 0; k < a.dim(); ++k)
    mul_res = std::max(mul_res, sup_abs(Mat(a.algebra.mul[k] - b.algebra.mul[k])));
  rep.add("product_tensor", mul_res, tol);
  rep.add("unit", sup_abs(Vec(a.algebra.unit - b.algebra.unit)), tol);
  rep.add("involution", sup_abs(Mat(a.algebra.invol - b.algebra.invol)), tol);
  rep.add("comultiplication", sup_abs(Mat(a.comul - b.comul)), tol);
  rep.add("counit", sup_abs(Cov(a.counit - b.counit)), tol);
  rep.add("antipode", sup_abs(Mat(a.antipode - b.antipode)), tol);
  rep.add("haar", sup_abs(Cov(a.haar - b.haar)), tol);
  return rep;
}

// --- random draws ------------------------------------------------------------------------

Functional random_functional(int dim, CounterRng& rng) {
  Functional f(dim);
  for (int i = 0; i < dim; ++i) f(i) = rng.cnormal();
  return f;
}

Functional random_state(const QuantumGroup& qg, CounterRng& rng) {
  std::vector<Mat> coeff;
  double trace_sum = 0.0;
  for (int n : qg.blocks.sizes) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    Mat b = g.adjoint() * g;
    trace_sum += b.trace().real();
    coeff.push_back(std::move(b));
  }
  for (Mat& b : coeff) b /= trace_sum;
  return functional_from_blocks(qg.blocks, coeff);
}

Functional random_centered_hermitian(const QuantumGroup& qg, CounterRng& rng) {
  std::vector<Mat> coeff;
  for (int n : qg.blocks.sizes) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    coeff.push_back(Mat(0.5 * (g + g.adjoint())));
  }
  Functional f = functional_from_blocks(qg.blocks, coeff);
  // Recenter so that f(1) = 0 while keeping Hermitian-ness (the counit is
  // a Hermitian functional on a quantum group).
  cplx v = f * qg.algebra.unit;
  return f - v.real() * qg.counit;
}

}  // namespace fqg
