#pragma once

// JSON serialization of the core value types.
//
// Every emitted document carries "schema": "fqg/1" and a "kind" tag.  All
// complex numbers are [re, im] pairs, all indices are 0-based, covectors are
// arrays of complex numbers and matrices are row-major nested arrays.
//
//   algebra    {"schema", "kind": "algebra", "dim", "mul", "unit", "invol"}
//              "mul" is a sparse list of [i, j, k, re, im] entries meaning
//              that e_i e_j contains (re + i im) e_k.
//   quantum    algebra fields with "kind": "quantum_group" plus
//    group     "comul" (sparse [row, col, re, im] entries of the d^2 x d
//              matrix; row = j*d + k indexes the tensor factors), "counit",
//              "antipode" (dense d x d) and an optional "haar" covector.
//              The Haar state is always recomputed from invariance on load;
//              a provided covector is only cross-checked.
//   hypergroup same layout with "kind": "hypergroup" and the involutive
//              antiautomorphism stored under "kappa".  The document is
//              intrinsic: embedding data tying a constructed hypergroup to
//              an ambient algebra is not serialized, and a loaded hypergroup
//              stands alone (identity embedding).
//   group      {"schema", "kind": "group_table", "algebra": "function" |
//    table     "group", "table": [[...], ...]} with permutation rows;
//              loading builds the corresponding function or group algebra.
//   functional {"schema", "kind": "functional", "covector": [...]}; loaders
//              also accept a bare array of complex numbers.
//   poisson    {"schema", "kind": "poisson_decomposition", "phi", "rate",
//              "jump"} -- the generator is rate * (jump - phi).
//   fourier    {"schema", "kind": "fourier_image", "blocks": [matrix, ...]}
//   report     {"schema", "kind": "report", "passed", "checks": [{"name",
//              "residual", "tol", "pass"}]} with residuals and tolerances
//              rendered in scientific notation with 6 significant digits.
//
// Loaders throw ParseError with a path to the failing field.

#include <string>

#include "json.hpp"

#include "fqg/functionals.hpp"
#include "fqg/hypergroups.hpp"
#include "fqg/poisson.hpp"
#include "fqg/quantum_group.hpp"

namespace fqg {

/// Malformed input document; the message names the failing field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ojson = nlohmann::ordered_json;

// --- scalars, covectors, matrices ---------------------------------------------

ojson complex_to_json(cplx z);
cplx complex_from_json(const ojson& j, const std::string& where);

ojson covector_to_json(const Cov& f);
Cov covector_from_json(const ojson& j, const std::string& where);

ojson vector_to_json(const Vec& v);
Vec vector_from_json(const ojson& j, const std::string& where);

ojson matrix_to_json(const Mat& m);
Mat matrix_from_json(const ojson& j, const std::string& where);

// --- structures ------------------------------------------------------------------

ojson algebra_to_json(const AlgebraPresentation& pres);
AlgebraPresentation algebra_from_json(const ojson& doc);

ojson quantum_group_to_json(const QuantumGroup& qg);
QuantumGroup quantum_group_from_json(const ojson& doc, const QgOptions& opts = {});

ojson hypergroup_to_json(const Hypergroup& hg);
Hypergroup hypergroup_from_json(const ojson& doc, const QgOptions& opts = {});

ojson group_table_to_json(const GroupTable& table, const std::string& algebra_kind);
GroupTable group_table_from_json(const ojson& doc, const std::string& where);

ojson functional_to_json(const Functional& f);
Functional functional_from_json(const ojson& doc);

ojson fourier_image_to_json(const FourierImage& img);

ojson poisson_to_json(const PoissonDecomposition& dec);
PoissonDecomposition poisson_from_json(const ojson& doc);

ojson report_to_json(const Report& rep);

/// Render a residual or tolerance the way reports do: scientific notation
/// with 6 significant digits.
std::string format_residual(double x);

// --- documents -----------------------------------------------------------------------

/// Load any quantum-group-bearing document: a full presentation
/// ("kind": "quantum_group") or a group table ("kind": "group_table").
QuantumGroup quantum_group_from_document(const ojson& doc, const QgOptions& opts = {});

ojson load_json_file(const std::string& path);
void save_json_file(const std::string& path, const ojson& doc);

}  // namespace fqg
