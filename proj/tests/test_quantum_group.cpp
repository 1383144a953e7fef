#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include "fqg/common.hpp"
#include "fqg/quantum_group.hpp"

using namespace fqg;

namespace {

std::vector<int> sorted_class_dims(const QuantumGroup& qg) {
  std::vector<int> dims;
  for (const auto& c : qg.irr.classes) dims.push_back(c.n);
  std::sort(dims.begin(), dims.end());
  return dims;
}

}  // namespace

TEST_CASE("every builtin passes the full verification battery") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    auto qg = builtin_quantum_group(name);
    auto rep = verify_cqg(qg, 1e-9);
    if (!rep.passed()) {
      auto* f = rep.first_failure();
      CAPTURE(f->name);
      CAPTURE(f->residual);
    }
    CHECK(rep.passed());
  }
}

TEST_CASE("orthogonality relations hold on every builtin") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    auto qg = builtin_quantum_group(name);
    auto rep = check_orthogonality(qg, 1e-8);
    CHECK(rep.passed());
  }
}

TEST_CASE("haar state of a function algebra is the uniform measure") {
  auto qg = builtin_quantum_group("c:S3");
  for (int g = 0; g < 6; ++g) CHECK(std::abs(qg.haar(g) - 1.0 / 6) < 1e-12);
}

TEST_CASE("haar state of a group algebra is the point mass at the identity") {
  auto qg = builtin_quantum_group("g:S3");
  CHECK(std::abs(qg.haar(0) - 1.0) < 1e-12);
  for (int g = 1; g < 6; ++g) CHECK(std::abs(qg.haar(g)) < 1e-12);
}

TEST_CASE("representation class dimensions match the classical tables") {
  CHECK(sorted_class_dims(builtin_quantum_group("c:Z2")) == std::vector<int>{1, 1});
  CHECK(sorted_class_dims(builtin_quantum_group("c:Z3")) == std::vector<int>{1, 1, 1});
  CHECK(sorted_class_dims(builtin_quantum_group("c:Z4")) == std::vector<int>{1, 1, 1, 1});
  CHECK(sorted_class_dims(builtin_quantum_group("c:Z2xZ2")) == std::vector<int>{1, 1, 1, 1});
  // functions on S3: the classical representation theory of S3
  CHECK(sorted_class_dims(builtin_quantum_group("c:S3")) == std::vector<int>{1, 1, 2});
  // group algebra of S3: six group-like coefficients (its dual is commutative)
  CHECK(sorted_class_dims(builtin_quantum_group("g:S3")) == std::vector<int>(6, 1));
}

TEST_CASE("underlying block sizes separate the commutative and cocommutative cases") {
  auto c = builtin_quantum_group("c:S3");
  CHECK(c.blocks.sizes == std::vector<int>(6, 1));
  auto g = builtin_quantum_group("g:S3");
  std::vector<int> sorted = g.blocks.sizes;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 1, 2});
}

TEST_CASE("cyclic representation coefficients are the classical characters") {
  auto qg = builtin_quantum_group("c:Z4");
  REQUIRE(qg.irr.classes.size() == 4);
  const cplx img(0.0, 1.0);
  // each class is one-dimensional; its coefficient must be some character
  // chi_k(g) = i^{gk}, and all four characters must appear
  std::vector<bool> seen(4, false);
  for (const auto& cls : qg.irr.classes) {
    REQUIRE(cls.n == 1);
    for (int k = 0; k < 4; ++k) {
      double dist = 0.0;
      for (int g = 0; g < 4; ++g)
        dist = std::max(dist, std::abs(cls.coeff(g, 0) - std::pow(img, g * k)));
      if (dist < 1e-8) seen[k] = true;
    }
  }
  for (int k = 0; k < 4; ++k) CHECK(seen[k]);
}

TEST_CASE("trivial class coefficient is the unit") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    auto qg = builtin_quantum_group(name);
    REQUIRE(qg.irr.trivial_index >= 0);
    const auto& cls = qg.irr.classes[qg.irr.trivial_index];
    REQUIRE(cls.n == 1);
    CHECK(sup_abs(Vec(cls.coeff.col(0) - qg.algebra.unit)) < 1e-9);
  }
}

TEST_CASE("antipode of a function algebra is pullback along inversion") {
  auto qg = builtin_quantum_group("c:Z4");
  for (int g = 0; g < 4; ++g) {
    int ginv = (4 - g) % 4;
    for (int h = 0; h < 4; ++h)
      CHECK(std::abs(qg.antipode(h, g) - (h == ginv ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("group algebras are cocommutative") {
  auto qg = builtin_quantum_group("g:S3");
  int d = qg.dim();
  double res = 0.0;
  for (int t = 0; t < d; ++t)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        res = std::max(res, std::abs(qg.comul(j * d + k, t) - qg.comul(k * d + j, t)));
  CHECK(res < 1e-14);
}

TEST_CASE("convolution of point evaluations follows the group law") {
  auto qg = builtin_quantum_group("c:S3");
  auto tab = s3_table();
  int d = qg.dim();
  auto dual = dual_presentation(qg.algebra, qg.comul, qg.counit, qg.antipode);
  REQUIRE(verify_algebra(dual).passed());
  for (int g = 0; g < d; ++g)
    for (int h = 0; h < d; ++h) {
      Vec dg = Vec::Zero(d), dh = Vec::Zero(d);
      dg(g) = 1.0;
      dh(h) = 1.0;
      Vec prod = dual.product(dg, dh);
      Vec want = Vec::Zero(d);
      want(tab[g][h]) = 1.0;
      CHECK(sup_abs(Vec(prod - want)) < 1e-12);
    }
}

TEST_CASE("dual algebra of a function algebra has the group-algebra blocks") {
  auto qg = builtin_quantum_group("c:S3");
  auto dual = dual_presentation(qg.algebra, qg.comul, qg.counit, qg.antipode);
  auto b = wedderburn(dual);
  std::vector<int> sorted = b.sizes;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 1, 2});
}

TEST_CASE("haar solver rejects a broken comultiplication") {
  auto qg = builtin_quantum_group("c:Z3");
  Mat bad = qg.comul;
  bad(1, 2) += 0.05;
  CHECK_THROWS_AS((void)haar_state(qg.algebra, bad), AxiomViolationError);
}

TEST_CASE("verification flags a broken antipode") {
  auto qg = builtin_quantum_group("c:Z4");
  qg.antipode = Mat::Identity(4, 4);  // wrong: inversion is not the identity on Z4
  auto rep = verify_cqg(qg, 1e-9);
  CHECK(!rep.passed());
  bool antipode_failed = false;
  for (const auto& c : rep.checks)
    if (c.name.find("antipode") != std::string::npos && !c.pass) antipode_failed = true;
  CHECK(antipode_failed);
}

TEST_CASE("an incorrect provided haar state is rejected") {
  auto tab = cyclic_table(3);
  auto good = function_algebra(tab);
  Cov wrong = Cov::Zero(3);
  wrong(0) = 1.0;  // point mass, not invariant for functions on Z3
  CHECK_THROWS_AS(
      (void)make_quantum_group(good.algebra, good.comul, good.counit, good.antipode, &wrong),
      AxiomViolationError);
}

TEST_CASE("group tables are validated") {
  CHECK(validate_group_table(cyclic_table(4)) == 0);
  CHECK(validate_group_table(s3_table()) == 0);
  CHECK(validate_group_table(klein_table()) == 0);

  GroupTable nonsquare{{0, 1}, {1}};
  CHECK_THROWS_AS((void)validate_group_table(nonsquare), StructuralError);
  GroupTable outofrange{{0, 1}, {1, 7}};
  CHECK_THROWS_AS((void)validate_group_table(outofrange), StructuralError);
  GroupTable noinverse{{0, 1}, {1, 1}};
  CHECK_THROWS_AS((void)validate_group_table(noinverse), StructuralError);
  // associativity failure: a Latin square that is not a group table
  GroupTable nonassoc{{0, 1, 2, 3, 4},
                      {1, 0, 3, 4, 2},
                      {2, 4, 0, 1, 3},
                      {3, 2, 4, 0, 1},
                      {4, 3, 1, 2, 0}};
  CHECK_THROWS_AS((void)validate_group_table(nonassoc), StructuralError);
}

TEST_CASE("the trivial group gives the one-dimensional quantum group") {
  GroupTable trivial{{0}};
  auto qg = function_algebra(trivial);
  CHECK(qg.dim() == 1);
  CHECK(verify_cqg(qg).passed());
  CHECK(qg.irr.classes.size() == 1);
}

TEST_CASE("klein and cyclic four-element groups are distinguished by coefficients") {
  auto z4 = builtin_quantum_group("c:Z4");
  auto kl = builtin_quantum_group("c:Z2xZ2");
  // all Klein characters are real, Z4 has a genuinely complex one
  double z4_imag = 0.0, kl_imag = 0.0;
  for (const auto& c : z4.irr.classes) z4_imag = std::max(z4_imag, sup_abs(Mat(c.coeff.imag().cast<cplx>())));
  for (const auto& c : kl.irr.classes) kl_imag = std::max(kl_imag, sup_abs(Mat(c.coeff.imag().cast<cplx>())));
  CHECK(z4_imag > 0.5);
  CHECK(kl_imag < 1e-9);
}

TEST_CASE("unknown builtin names are rejected") {
  CHECK_THROWS_AS((void)builtin_quantum_group("c:Z5"), StructuralError);
  CHECK_THROWS_AS((void)builtin_quantum_group("nonsense"), StructuralError);
}

TEST_CASE("contraction helpers implement the counit laws") {
  auto qg = builtin_quantum_group("g:Z4");
  int d = qg.dim();
  for (int t = 0; t < d; ++t) {
    Vec col = qg.comul.col(t);
    Vec left = contract_first(qg.counit, col, d);
    Vec right = contract_second(qg.counit, col, d);
    Vec et = Vec::Zero(d);
    et(t) = 1.0;
    CHECK(sup_abs(Vec(left - et)) < 1e-12);
    CHECK(sup_abs(Vec(right - et)) < 1e-12);
  }
}
