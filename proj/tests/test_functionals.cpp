#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fqg/functionals.hpp"

using namespace fqg;

namespace {

Functional delta(int d, int g) {
  Functional f = Functional::Zero(d);
  f(g) = 1.0;
  return f;
}

const std::vector<std::string>& all_builtins() {
  static std::vector<std::string> names = builtin_names();
  return names;
}

int inverse_in(const GroupTable& t, int g) {
  for (int h = 0; h < (int)t.size(); ++h)
    if (t[g][h] == 0) return h;
  return -1;
}

}  // namespace

TEST_CASE("convolution follows the group law on function algebras") {
  QuantumGroup qg = builtin_quantum_group("c:S3");
  GroupTable t = s3_table();
  for (int g = 0; g < 6; ++g)
    for (int h = 0; h < 6; ++h) {
      Functional prod = convolve(qg, delta(6, g), delta(6, h));
      CHECK(sup_abs(Functional(prod - delta(6, t[g][h]))) < 1e-12);
    }
}

TEST_CASE("counit is the convolution identity and convolution is associative") {
  CounterRng rng(101);
  for (const std::string& name : {"c:S3", "g:S3", "c:Z4"}) {
    QuantumGroup qg = builtin_quantum_group(name);
    for (int trial = 0; trial < 10; ++trial) {
      Functional f = random_functional(qg.dim(), rng);
      Functional g = random_functional(qg.dim(), rng);
      Functional h = random_functional(qg.dim(), rng);
      CHECK(sup_abs(Functional(convolve(qg, qg.counit, f) - f)) < 1e-12);
      CHECK(sup_abs(Functional(convolve(qg, f, qg.counit) - f)) < 1e-12);
      Functional left = convolve(qg, convolve(qg, f, g), h);
      Functional right = convolve(qg, f, convolve(qg, g, h));
      CHECK(sup_abs(Functional(left - right)) < 1e-10);
    }
  }
}

TEST_CASE("convolution powers: binary exponentiation matches iteration") {
  QuantumGroup qg = builtin_quantum_group("c:Z4");
  Functional dg = delta(4, 1);
  CHECK(sup_abs(Functional(convolution_power(qg, dg, 0) - qg.counit)) < 1e-14);
  CHECK(sup_abs(Functional(convolution_power(qg, dg, 1) - dg)) < 1e-14);
  CHECK(sup_abs(Functional(convolution_power(qg, dg, 5) - delta(4, 1))) < 1e-12);
  CHECK(sup_abs(Functional(convolution_power(qg, dg, 6) - delta(4, 2))) < 1e-12);

  CounterRng rng(7);
  QuantumGroup qs = builtin_quantum_group("g:S3");
  Functional f = random_functional(qs.dim(), rng);
  Functional it = qs.counit;
  for (int k = 0; k < 7; ++k) it = convolve(qs, it, f);
  CHECK(sup_abs(Functional(convolution_power(qs, f, 7) - it)) < 1e-8 * (1.0 + sup_abs(it)));
  CHECK_THROWS_AS((void)convolution_power(qs, f, -1), DomainError);
}

TEST_CASE("involution: fixed points, point masses, and antimultiplicativity") {
  for (const std::string& name : all_builtins()) {
    QuantumGroup qg = builtin_quantum_group(name);
    CHECK(sup_abs(Functional(star(qg, qg.haar) - qg.haar)) < 1e-10);
    CHECK(sup_abs(Functional(star(qg, qg.counit) - qg.counit)) < 1e-10);
  }
  QuantumGroup qg = builtin_quantum_group("c:S3");
  GroupTable t = s3_table();
  for (int g = 0; g < 6; ++g) {
    Functional s = star(qg, delta(6, g));
    CHECK(sup_abs(Functional(s - delta(6, inverse_in(t, g)))) < 1e-12);
  }
  // (i eps)* = -i eps
  Functional ie = cplx(0, 1) * qg.counit;
  CHECK(sup_abs(Functional(star(qg, ie) + ie)) < 1e-12);

  CounterRng rng(55);
  for (const std::string& name : {"c:S3", "g:S3"}) {
    QuantumGroup q = builtin_quantum_group(name);
    for (int trial = 0; trial < 10; ++trial) {
      Functional f = random_functional(q.dim(), rng);
      Functional g = random_functional(q.dim(), rng);
      CHECK(sup_abs(Functional(star(q, star(q, f)) - f)) < 1e-10);
      Functional lhs = star(q, convolve(q, f, g));
      Functional rhs = convolve(q, star(q, g), star(q, f));
      CHECK(sup_abs(Functional(lhs - rhs)) < 1e-9);
    }
  }
}

TEST_CASE("Hermitian functionals: predicate matches the defining identity") {
  CounterRng rng(66);
  for (const std::string& name : {"c:Z4", "g:S3"}) {
    QuantumGroup qg = builtin_quantum_group(name);
    CHECK(is_hermitian_functional(qg.algebra, qg.haar));
    CHECK(is_hermitian_functional(qg.algebra, qg.counit));
    CHECK_FALSE(is_hermitian_functional(qg.algebra, Functional(cplx(0, 1) * qg.counit)));
    for (int trial = 0; trial < 8; ++trial) {
      Functional u = random_centered_hermitian(qg, rng);
      CHECK(std::abs(cplx(u * qg.algebra.unit)) < 1e-10);
      CHECK(is_hermitian_functional(qg.algebra, u));
      // defining identity: u(x*) = conj(u(x))
      Vec x = Vec::Zero(qg.dim());
      for (int i = 0; i < qg.dim(); ++i) x(i) = rng.cnormal();
      cplx lhs = u * qg.algebra.star(x);
      cplx rhs = std::conj(cplx(u * x));
      CHECK(std::abs(lhs - rhs) < 1e-9);
      CHECK(sup_abs(Functional(hermitian_adjoint(qg.algebra, hermitian_adjoint(qg.algebra, u)) - u)) <
            1e-12);
    }
  }
}

TEST_CASE("coefficient blocks round-trip the functional") {
  CounterRng rng(77);
  for (const std::string& name : {"c:S3", "g:S3", "c:Z4"}) {
    QuantumGroup qg = builtin_quantum_group(name);
    for (int trial = 0; trial < 5; ++trial) {
      Functional f = random_functional(qg.dim(), rng);
      Functional back = functional_from_blocks(qg, coefficient_blocks(qg, f));
      CHECK(sup_abs(Functional(back - f)) < 1e-10);
    }
  }
}

TEST_CASE("norm: states have norm one, point-mass distance, Banach law") {
  CounterRng rng(88);
  for (const std::string& name : all_builtins()) {
    QuantumGroup qg = builtin_quantum_group(name);
    CHECK(functional_norm(qg, qg.haar) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(functional_norm(qg, qg.counit) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(functional_norm(qg, Functional(Functional::Zero(qg.dim()))) == doctest::Approx(0.0));
    for (int trial = 0; trial < 20; ++trial) {
      Functional s = random_state(qg, rng);
      CHECK(is_state(qg, s));
      CHECK(functional_norm(qg, s) == doctest::Approx(1.0).epsilon(1e-8));
    }
    for (int trial = 0; trial < 200; ++trial) {
      Functional f = random_functional(qg.dim(), rng);
      Functional g = random_functional(qg.dim(), rng);
      double lhs = functional_norm(qg, convolve(qg, f, g));
      double rhs = functional_norm(qg, f) * functional_norm(qg, g);
      CHECK(lhs <= rhs + 1e-9);
      // homogeneity and the triangle inequality
      cplx c = rng.cnormal();
      CHECK(functional_norm(qg, Functional(c * f)) ==
            doctest::Approx(std::abs(c) * functional_norm(qg, f)).epsilon(1e-9));
      CHECK(functional_norm(qg, Functional(f + g)) <=
            functional_norm(qg, f) + functional_norm(qg, g) + 1e-9);
    }
  }
  QuantumGroup z4 = builtin_quantum_group("c:Z4");
  CHECK(functional_norm(z4, Functional(delta(4, 1) - delta(4, 0))) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("norm equals the ell-1 value on commutative function algebras") {
  CounterRng rng(99);
  for (const std::string& name : {"c:Z2", "c:Z3", "c:Z4", "c:Z2xZ2", "c:S3"}) {
    QuantumGroup qg = builtin_quantum_group(name);
    for (int trial = 0; trial < 50; ++trial) {
      Functional f = random_functional(qg.dim(), rng);
      double oracle = 0.0;
      for (int g = 0; g < qg.dim(); ++g) oracle += std::abs(f(g));
      CHECK(functional_norm(qg, f) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("norm equals the total-variation value on cyclic group algebras") {
  CounterRng rng(111);
  for (int n : {2, 3, 4}) {
    QuantumGroup qg = builtin_quantum_group("g:Z" + std::to_string(n));
    for (int trial = 0; trial < 50; ++trial) {
      Functional f = random_functional(n, rng);
      // Functionals on the group algebra of Z_n are measures on the dual
      // cycle group of characters; the norm is their total variation.
      double oracle = 0.0;
      for (int k = 0; k < n; ++k) {
        cplx mu = 0.0;
        for (int g = 0; g < n; ++g)
          mu += f(g) * std::exp(cplx(0, -2.0 * M_PI * k * g / n)) / double(n);
        oracle += std::abs(mu);
      }
      CHECK(functional_norm(qg, f) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("norm matches the classical representation-theoretic value on g:S3") {
  // Irreducible representations of the permutation group on three letters:
  // trivial, sign, and the action on the plane orthogonal to (1,1,1).
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const double sign[6] = {1, -1, -1, 1, 1, -1};
  Eigen::Matrix<double, 3, 2> basis;
  basis << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0), -1 / std::sqrt(2.0), 1 / std::sqrt(6.0), 0,
      -2 / std::sqrt(6.0);
  std::vector<Mat> two(6);
  for (int g = 0; g < 6; ++g) {
    Eigen::Matrix3d p = Eigen::Matrix3d::Zero();
    for (int x = 0; x < 3; ++x) p(perms[g][x], x) = 1.0;
    two[g] = (basis.transpose() * p * basis).cast<cplx>();
  }

  QuantumGroup qg = builtin_quantum_group("g:S3");
  CounterRng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    Functional f = random_functional(6, rng);
    cplx m_triv = 0.0, m_sign = 0.0;
    Mat m_two = Mat::Zero(2, 2);
    for (int g = 0; g < 6; ++g) {
      m_triv += f(g) / 6.0;
      m_sign += f(g) * sign[g] / 6.0;
      m_two += f(g) * (2.0 / 6.0) * two[g];
    }
    Eigen::JacobiSVD<Mat> svd(Mat(m_two.transpose()));
    double oracle = std::abs(m_triv) + std::abs(m_sign) + svd.singularValues().sum();
    CHECK(functional_norm(qg, f) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("norm dominates |f(x)| on the unit ball (sampled)") {
  CounterRng rng(131);
  for (const std::string& name : {"c:Z4", "g:S3"}) {
    QuantumGroup qg = builtin_quantum_group(name);
    Functional f = random_functional(qg.dim(), rng);
    double bound = functional_norm(qg, f);
    double best = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      Vec x(qg.dim());
      for (int i = 0; i < qg.dim(); ++i) x(i) = rng.cnormal();
      double nx = operator_norm(qg.algebra, qg.blocks, x);
      if (nx < 1e-8) continue;
      best = std::max(best, std::abs(cplx(f * x)) / nx);
    }
    CHECK(best <= bound + 1e-9);
    CHECK(best > 0.3 * bound);  // the sampled sup should not be vacuous
  }
}

TEST_CASE("positivity: direct quadratic criterion agrees with the block test") {
  CounterRng rng(141);
  for (const std::string& name : {"c:Z4", "g:S3"}) {
    QuantumGroup qg = builtin_quantum_group(name);
    CHECK(is_positive_functional(qg, qg.haar));
    CHECK(is_positive_functional(qg, qg.counit));
    CHECK_FALSE(is_positive_functional(qg, Functional(-qg.counit)));
    for (int trial = 0; trial < 10; ++trial) {
      Functional s = random_state(qg, rng);
      for (int k = 0; k < 20; ++k) {
        Vec x(qg.dim());
        for (int i = 0; i < qg.dim(); ++i) x(i) = rng.cnormal();
        cplx v = s * qg.algebra.product(qg.algebra.star(x), x);
        CHECK(v.real() > -1e-10);
        CHECK(std::abs(v.imag()) < 1e-10);
      }
    }
  }
  QuantumGroup z4 = builtin_quantum_group("c:Z4");
  CHECK_FALSE(is_positive_functional(z4, Functional(delta(4, 0) - 0.1 * delta(4, 1))));
  CHECK_FALSE(is_state(z4, Functional(2.0 * delta(4, 0))));
  CHECK(is_state(z4, Functional(0.5 * delta(4, 0) + 0.5 * delta(4, 2))));
}

TEST_CASE("Jordan split: sign-definite blocks split with additive norms") {
  QuantumGroup z4 = builtin_quantum_group("c:Z4");
  Functional u = (delta(4, 1) + delta(4, 2) + delta(4, 3)) / 3.0;
  auto split = jordan_split(z4, Functional(u - z4.counit));
  REQUIRE(split.has_value());
  CHECK(sup_abs(Functional(split->first - u)) < 1e-10);
  CHECK(sup_abs(Functional(split->second - z4.counit)) < 1e-10);
  CHECK(functional_norm(z4, split->first) + functional_norm(z4, split->second) ==
        doctest::Approx(functional_norm(z4, Functional(u - z4.counit))).epsilon(1e-9));

  // Positive functionals split trivially.
  auto ps = jordan_split(z4, z4.haar);
  REQUIRE(ps.has_value());
  CHECK(sup_abs(Functional(ps->first - z4.haar)) < 1e-10);
  CHECK(sup_abs(ps->second) < 1e-12);

  // On a commutative carrier every Hermitian functional splits.
  CounterRng rng(151);
  for (int trial = 0; trial < 20; ++trial) {
    Functional h = random_centered_hermitian(z4, rng);
    auto s = jordan_split(z4, h);
    REQUIRE(s.has_value());
    CHECK(sup_abs(Functional(s->first - s->second - h)) < 1e-10);
    CHECK(is_positive_functional(z4, s->first));
    CHECK(is_positive_functional(z4, s->second));
    CHECK(functional_norm(z4, s->first) + functional_norm(z4, s->second) ==
          doctest::Approx(functional_norm(z4, h)).epsilon(1e-8));
  }
}

TEST_CASE("Jordan split refuses indefinite blocks") {
  QuantumGroup qg = builtin_quantum_group("g:S3");
  // Put an indefinite matrix on a two-dimensional block.
  std::vector<Mat> coeff;
  for (int n : qg.blocks.sizes) {
    Mat b = Mat::Zero(n, n);
    if (n == 2) {
      b(0, 0) = 1.0;
      b(1, 1) = -1.0;
    }
    coeff.push_back(b);
  }
  Functional f = functional_from_blocks(qg, coeff);
  CHECK(is_hermitian_functional(qg.algebra, f));
  CHECK_FALSE(jordan_split(qg, f).has_value());
  // Non-Hermitian functionals are refused as well.
  CHECK_FALSE(jordan_split(qg, Functional(cplx(0, 1) * qg.counit)).has_value());
}

TEST_CASE("Fourier: unit, Haar, multiplicativity, involution, inversion") {
  CounterRng rng(161);
  for (const std::string& name : all_builtins()) {
    QuantumGroup qg = builtin_quantum_group(name);
    FourierImage eps_img = fourier(qg, qg.counit);
    FourierImage haar_img = fourier(qg, qg.haar);
    for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
      int n = qg.irr.classes[a].n;
      CHECK(sup_abs(Mat(eps_img.blocks_img[a] - Mat::Identity(n, n))) < 1e-9);
      Mat expected =
          (int)a == qg.irr.trivial_index ? Mat(Mat::Identity(1, 1)) : Mat(Mat::Zero(n, n));
      CHECK(sup_abs(Mat(haar_img.blocks_img[a] - expected)) < 1e-9);
    }
    for (int trial = 0; trial < 50; ++trial) {
      Functional f = random_functional(qg.dim(), rng);
      Functional g = random_functional(qg.dim(), rng);
      FourierImage ff = fourier(qg, f), gg = fourier(qg, g);
      FourierImage pp = fourier(qg, convolve(qg, f, g));
      FourierImage ss = fourier(qg, star(qg, f));
      for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
        CHECK(sup_abs(Mat(pp.blocks_img[a] - ff.blocks_img[a] * gg.blocks_img[a])) < 1e-8);
        CHECK(sup_abs(Mat(ss.blocks_img[a] - ff.blocks_img[a].adjoint())) < 1e-8);
      }
      CHECK(sup_abs(Functional(inverse_fourier(qg, ff) - f)) < 1e-8);
    }
    // Contraction: every Fourier block is dominated by the functional norm.
    for (int trial = 0; trial < 100; ++trial) {
      Functional f = random_functional(qg.dim(), rng);
      double nf = functional_norm(qg, f);
      for (const Mat& b : fourier(qg, f).blocks_img)
        CHECK(b.operatorNorm() <= nf + 1e-9);
    }
  }
}

TEST_CASE("Fourier of point masses on c:Z4 lands on the character values") {
  QuantumGroup qg = builtin_quantum_group("c:Z4");
  // Identify each class with its character exponent k via the coefficient
  // vector (i^{k g})_g.
  std::vector<int> expo(qg.irr.classes.size(), -1);
  for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
    REQUIRE(qg.irr.classes[a].n == 1);
    for (int k = 0; k < 4; ++k) {
      Vec chi(4);
      for (int g = 0; g < 4; ++g) chi(g) = std::pow(cplx(0, 1), k * g);
      if (sup_abs(Vec(qg.irr.classes[a].coeff.col(0) - chi)) < 1e-8) expo[a] = k;
    }
    REQUIRE(expo[a] >= 0);
  }
  for (int g = 0; g < 4; ++g) {
    FourierImage img = fourier(qg, delta(4, g));
    for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
      cplx expect = std::pow(cplx(0, 1), expo[a] * g);
      CHECK(std::abs(img.blocks_img[a](0, 0) - expect) < 1e-9);
    }
  }
}

TEST_CASE("dual quantum group passes the full axiom battery") {
  for (const std::string& name : all_builtins()) {
    QuantumGroup qg = builtin_quantum_group(name);
    QuantumGroup dual = dual_quantum_group(qg);
    Report rep = verify_cqg(dual, 1e-9);
    INFO(name, ": ", rep.first_failure());
    CHECK(rep.passed());
    // The dual of a commutative carrier is cocommutative and vice versa.
    Mat flip = Mat::Zero(dual.dim() * dual.dim(), dual.dim() * dual.dim());
    for (int i = 0; i < dual.dim(); ++i)
      for (int j = 0; j < dual.dim(); ++j) flip(j * dual.dim() + i, i * dual.dim() + j) = 1.0;
    if (name[0] == 'c') {
      CHECK(sup_abs(Mat(flip * dual.comul - dual.comul)) < 1e-12);
    } else {
      double comm = 0.0;
      for (int k = 0; k < dual.dim(); ++k)
        comm = std::max(comm,
                        sup_abs(Mat(dual.algebra.mul[k] - dual.algebra.mul[k].transpose())));
      CHECK(comm < 1e-12);
    }
  }
}

TEST_CASE("dual of a function algebra is literally the group algebra") {
  for (const std::string& grp : {"Z2", "Z3", "S3"}) {
    QuantumGroup cg = builtin_quantum_group("c:" + grp);
    QuantumGroup gg = builtin_quantum_group("g:" + grp);
    Report rep = compare_structures(dual_quantum_group(cg), gg, 1e-7);
    INFO(grp, ": ", rep.first_failure());
    CHECK(rep.passed());
  }
}

TEST_CASE("biduality: the double dual has identical structure tensors") {
  for (const std::string& name : all_builtins()) {
    QuantumGroup qg = builtin_quantum_group(name);
    QuantumGroup dd = dual_quantum_group(dual_quantum_group(qg));
    Report rep = compare_structures(dd, qg, 1e-7);
    INFO(name, ": ", rep.first_failure());
    CHECK(rep.passed());
    CHECK(rep.max_residual() < 1e-7);
  }
}

TEST_CASE("dual Haar weights point masses by block dimension") {
  // On the dual of c:S3 (the group algebra), the Haar state is the point
  // mass at the identity; on the dual of g:S3 it is the normalized counting
  // measure weighted by 1/|G| on each group element.
  QuantumGroup cg = builtin_quantum_group("c:S3");
  QuantumGroup dual = dual_quantum_group(cg);
  Cov expected = Cov::Zero(6);
  expected(0) = 1.0;
  CHECK(sup_abs(Cov(dual.haar - expected)) < 1e-9);

  QuantumGroup gg = builtin_quantum_group("g:S3");
  QuantumGroup dual_g = dual_quantum_group(gg);
  CHECK(sup_abs(Cov(dual_g.haar - Cov::Constant(6, cplx(1.0 / 6.0)))) < 1e-9);
}
