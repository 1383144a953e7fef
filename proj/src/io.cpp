#include "fqg/io.hpp"

#include <cstdio>
#include <fstream>

namespace fqg {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const ojson& require_field(const ojson& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object()) fail(where, "expected an object");
  const auto it = doc.find(key);
  if (it == doc.end()) fail(where + "/" + key, "missing field");
  return *it;
}

double number_at(const ojson& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

long long integer_at(const ojson& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

int index_at(const ojson& j, long long bound, const std::string& where) {
  const long long v = integer_at(j, where);
  if (v < 0 || v >= bound) {
    fail(where, "index " + std::to_string(v) + " out of range [0, " + std::to_string(bound) + ")");
  }
  return static_cast<int>(v);
}

void check_kind(const ojson& doc, const std::string& kind, const std::string& where) {
  const ojson& k = require_field(doc, "kind", where);
  if (!k.is_string() || k.get<std::string>() != kind) {
    fail(where + "/kind", "expected \"" + kind + "\"");
  }
}

// Sparse matrix entries [row, col, re, im], emitted column-major then
// row-major so the layout is deterministic.
ojson sparse_matrix_to_json(const Mat& m) {
  ojson entries = ojson::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const cplx v = m(r, c);
      if (v == cplx(0.0, 0.0)) continue;
      entries.push_back(ojson::array({r, c, v.real(), v.imag()}));
    }
  }
  return entries;
}

Mat sparse_matrix_from_json(const ojson& j, Eigen::Index rows, Eigen::Index cols,
                            const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of [row, col, re, im] entries");
  Mat m = Mat::Zero(rows, cols);
  for (std::size_t n = 0; n < j.size(); ++n) {
    const std::string here = where + "[" + std::to_string(n) + "]";
    const ojson& e = j[n];
    if (!e.is_array() || e.size() != 4) fail(here, "expected [row, col, re, im]");
    const int r = index_at(e[0], rows, here + "[0]");
    const int c = index_at(e[1], cols, here + "[1]");
    m(r, c) += cplx(number_at(e[2], here + "[2]"), number_at(e[3], here + "[3]"));
  }
  return m;
}

void emit_algebra_fields(ojson& doc, const AlgebraPresentation& pres) {
  doc["dim"] = pres.dim;
  ojson mul = ojson::array();
  for (int k = 0; k < pres.dim; ++k) {
    for (int i = 0; i < pres.dim; ++i) {
      for (int j = 0; j < pres.dim; ++j) {
        const cplx v = pres.mul[k](i, j);
        if (v == cplx(0.0, 0.0)) continue;
        mul.push_back(ojson::array({i, j, k, v.real(), v.imag()}));
      }
    }
  }
  doc["mul"] = std::move(mul);
  doc["unit"] = vector_to_json(pres.unit);
  doc["invol"] = matrix_to_json(pres.invol);
}

AlgebraPresentation parse_algebra_fields(const ojson& doc, const std::string& where) {
  AlgebraPresentation pres;
  const long long dim = integer_at(require_field(doc, "dim", where), where + "/dim");
  if (dim < 1 || dim > 4096) fail(where + "/dim", "dimension out of range [1, 4096]");
  pres.dim = static_cast<int>(dim);

  const ojson& mul = require_field(doc, "mul", where);
  if (!mul.is_array()) fail(where + "/mul", "expected an array of [i, j, k, re, im] entries");
  pres.mul.assign(pres.dim, Mat::Zero(pres.dim, pres.dim));
  for (std::size_t n = 0; n < mul.size(); ++n) {
    const std::string here = where + "/mul[" + std::to_string(n) + "]";
    const ojson& e = mul[n];
    if (!e.is_array() || e.size() != 5) fail(here, "expected [i, j, k, re, im]");
    const int i = index_at(e[0], dim, here + "[0]");
    const int j = index_at(e[1], dim, here + "[1]");
    const int k = index_at(e[2], dim, here + "[2]");
    pres.mul[k](i, j) += cplx(number_at(e[3], here + "[3]"), number_at(e[4], here + "[4]"));
  }

  pres.unit = vector_from_json(require_field(doc, "unit", where), where + "/unit");
  if (pres.unit.size() != pres.dim) fail(where + "/unit", "length does not match dim");
  pres.invol = matrix_from_json(require_field(doc, "invol", where), where + "/invol");
  if (pres.invol.rows() != pres.dim || pres.invol.cols() != pres.dim) {
    fail(where + "/invol", "shape does not match dim");
  }
  return pres;
}

struct CoalgebraFields {
  Mat comul;
  Cov counit;
  Mat coinv;  // antipode or kappa
  bool has_haar = false;
  Cov haar;
};

CoalgebraFields parse_coalgebra_fields(const ojson& doc, int dim, const std::string& coinv_key,
                                       const std::string& where) {
  CoalgebraFields out;
  out.comul = sparse_matrix_from_json(require_field(doc, "comul", where),
                                      Eigen::Index(dim) * dim, dim, where + "/comul");
  out.counit = covector_from_json(require_field(doc, "counit", where), where + "/counit");
  if (out.counit.size() != dim) fail(where + "/counit", "length does not match dim");
  out.coinv = matrix_from_json(require_field(doc, coinv_key, where), where + "/" + coinv_key);
  if (out.coinv.rows() != dim || out.coinv.cols() != dim) {
    fail(where + "/" + coinv_key, "shape does not match dim");
  }
  if (doc.contains("haar")) {
    out.haar = covector_from_json(doc["haar"], where + "/haar");
    if (out.haar.size() != dim) fail(where + "/haar", "length does not match dim");
    out.has_haar = true;
  }
  return out;
}

}  // namespace

// --- scalars, covectors, matrices ---------------------------------------------

ojson complex_to_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

cplx complex_from_json(const ojson& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a [re, im] pair");
  return cplx(number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]"));
}

ojson covector_to_json(const Cov& f) {
  ojson arr = ojson::array();
  for (Eigen::Index i = 0; i < f.size(); ++i) arr.push_back(complex_to_json(f(i)));
  return arr;
}

Cov covector_from_json(const ojson& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of [re, im] pairs");
  Cov f(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    f(Eigen::Index(i)) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return f;
}

ojson vector_to_json(const Vec& v) { return covector_to_json(Cov(v.transpose())); }

Vec vector_from_json(const ojson& j, const std::string& where) {
  return Vec(covector_from_json(j, where).transpose());
}

ojson matrix_to_json(const Mat& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(covector_to_json(Cov(m.row(r))));
  return rows;
}

Mat matrix_from_json(const ojson& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  std::vector<Cov> rows;
  rows.reserve(j.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    rows.push_back(covector_from_json(j[r], where + "[" + std::to_string(r) + "]"));
    if (rows[r].size() != rows[0].size()) {
      fail(where + "[" + std::to_string(r) + "]", "ragged row length");
    }
  }
  Mat m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.row(Eigen::Index(r)) = rows[r];
  return m;
}

// --- structures ------------------------------------------------------------------

ojson algebra_to_json(const AlgebraPresentation& pres) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "algebra";
  emit_algebra_fields(doc, pres);
  return doc;
}

AlgebraPresentation algebra_from_json(const ojson& doc) {
  check_kind(doc, "algebra", "algebra");
  return parse_algebra_fields(doc, "algebra");
}

ojson quantum_group_to_json(const QuantumGroup& qg) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "quantum_group";
  emit_algebra_fields(doc, qg.algebra);
  doc["comul"] = sparse_matrix_to_json(qg.comul);
  doc["counit"] = covector_to_json(qg.counit);
  doc["antipode"] = matrix_to_json(qg.antipode);
  doc["haar"] = covector_to_json(qg.haar);
  return doc;
}

QuantumGroup quantum_group_from_json(const ojson& doc, const QgOptions& opts) {
  const std::string where = "quantum_group";
  check_kind(doc, "quantum_group", where);
  const AlgebraPresentation pres = parse_algebra_fields(doc, where);
  const CoalgebraFields co = parse_coalgebra_fields(doc, pres.dim, "antipode", where);
  return make_quantum_group(pres, co.comul, co.counit, co.coinv,
                            co.has_haar ? &co.haar : nullptr, opts);
}

ojson hypergroup_to_json(const Hypergroup& hg) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "hypergroup";
  emit_algebra_fields(doc, hg.algebra);
  doc["comul"] = sparse_matrix_to_json(hg.comul);
  doc["counit"] = covector_to_json(hg.counit);
  doc["kappa"] = matrix_to_json(hg.kappa);
  doc["haar"] = covector_to_json(hg.haar);
  return doc;
}

Hypergroup hypergroup_from_json(const ojson& doc, const QgOptions& opts) {
  const std::string where = "hypergroup";
  check_kind(doc, "hypergroup", where);
  Hypergroup hg;
  hg.algebra = parse_algebra_fields(doc, where);
  const CoalgebraFields co = parse_coalgebra_fields(doc, hg.algebra.dim, "kappa", where);
  if (!co.has_haar) fail(where + "/haar", "missing field");
  hg.comul = co.comul;
  hg.counit = co.counit;
  hg.kappa = co.coinv;
  hg.haar = co.haar;
  WedderburnOptions wopts;
  wopts.tol = opts.tol;
  wopts.seed = opts.seed;
  hg.blocks = wedderburn(hg.algebra, wopts);
  const int d = hg.algebra.dim;
  hg.embed = Mat::Identity(d, d);
  hg.restrict_map = Mat::Identity(d, d);
  hg.expectation = Mat::Identity(d, d);
  return hg;
}

ojson group_table_to_json(const GroupTable& table, const std::string& algebra_kind) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "group_table";
  doc["algebra"] = algebra_kind;
  ojson rows = ojson::array();
  for (const auto& row : table) rows.push_back(row);
  doc["table"] = std::move(rows);
  return doc;
}

GroupTable group_table_from_json(const ojson& doc, const std::string& where) {
  const ojson& t = require_field(doc, "table", where);
  if (!t.is_array() || t.empty()) fail(where + "/table", "expected a non-empty array of rows");
  const long long n = static_cast<long long>(t.size());
  GroupTable table;
  table.reserve(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) {
    const std::string here = where + "/table[" + std::to_string(r) + "]";
    const ojson& row = t[r];
    if (!row.is_array() || row.size() != t.size()) fail(here, "expected a row of equal length");
    std::vector<int> out;
    out.reserve(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      out.push_back(index_at(row[c], n, here + "[" + std::to_string(c) + "]"));
    }
    table.push_back(std::move(out));
  }
  return table;
}

ojson functional_to_json(const Functional& f) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "functional";
  doc["covector"] = covector_to_json(f);
  return doc;
}

Functional functional_from_json(const ojson& doc) {
  if (doc.is_array()) return covector_from_json(doc, "functional");
  check_kind(doc, "functional", "functional");
  return covector_from_json(require_field(doc, "covector", "functional"), "functional/covector");
}

ojson fourier_image_to_json(const FourierImage& img) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "fourier_image";
  ojson blocks = ojson::array();
  for (const Mat& b : img.blocks_img) blocks.push_back(matrix_to_json(b));
  doc["blocks"] = std::move(blocks);
  return doc;
}

ojson poisson_to_json(const PoissonDecomposition& dec) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "poisson_decomposition";
  doc["phi"] = covector_to_json(dec.phi);
  doc["rate"] = dec.rate;
  doc["jump"] = covector_to_json(dec.jump);
  return doc;
}

PoissonDecomposition poisson_from_json(const ojson& doc) {
  const std::string where = "poisson_decomposition";
  check_kind(doc, "poisson_decomposition", where);
  PoissonDecomposition dec;
  dec.phi = covector_from_json(require_field(doc, "phi", where), where + "/phi");
  dec.rate = number_at(require_field(doc, "rate", where), where + "/rate");
  dec.jump = covector_from_json(require_field(doc, "jump", where), where + "/jump");
  if (dec.jump.size() != dec.phi.size()) fail(where + "/jump", "length does not match phi");
  if (dec.rate < 0.0) fail(where + "/rate", "rate must be nonnegative");
  dec.generator = Functional(dec.rate * (dec.jump - dec.phi));
  return dec;
}

std::string format_residual(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return std::string(buf);
}

ojson report_to_json(const Report& rep) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "report";
  doc["passed"] = rep.passed();
  ojson checks = ojson::array();
  for (const auto& c : rep.checks) {
    ojson e;
    e["name"] = c.name;
    e["residual"] = format_residual(c.residual);
    e["tol"] = format_residual(c.tol);
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  doc["checks"] = std::move(checks);
  return doc;
}

// --- documents -----------------------------------------------------------------------

QuantumGroup quantum_group_from_document(const ojson& doc, const QgOptions& opts) {
  const ojson& kind = require_field(doc, "kind", "document");
  if (!kind.is_string()) fail("document/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "quantum_group") return quantum_group_from_json(doc, opts);
  if (k == "group_table") {
    const GroupTable table = group_table_from_json(doc, "group_table");
    const ojson& alg = require_field(doc, "algebra", "group_table");
    if (!alg.is_string()) fail("group_table/algebra", "expected \"function\" or \"group\"");
    const std::string a = alg.get<std::string>();
    if (a == "function") return function_algebra(table, opts);
    if (a == "group") return group_algebra(table, opts);
    fail("group_table/algebra", "expected \"function\" or \"group\"");
  }
  fail("document/kind", "expected \"quantum_group\" or \"group_table\"");
}

ojson load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const ojson& doc) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace fqg
