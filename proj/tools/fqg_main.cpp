// Command-line surface: ingest quantum-group presentations (builtin or JSON),
// dispatch the verification batteries and decomposition pipelines, and emit
// either a human-readable table or deterministic JSON.
//
// Exit codes: 0 = pass, 1 = mathematical failure (axiom violation, rejected
// input object, failed battery), 2 = input error (unparseable file, malformed
// document, unknown builtin, bad flags).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fqg/divisibility.hpp"
#include "fqg/idempotents.hpp"
#include "fqg/io.hpp"

using namespace fqg;

namespace {

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string builtin;
  double tol = 1e-9;
  std::string output = "table";
  std::uint64_t seed = 0x5eed0fULL;
  std::string generator_path;
  std::string idempotent_path;
  std::string state_path;
  long long order = 2;
  int depth = 0;  // 0 = derived from the order
  int samples = 4;
};

QuantumGroup load_input(const RunConfig& cfg, const QgOptions& opts) {
  if (!cfg.builtin.empty()) return builtin_quantum_group(cfg.builtin, opts);
  return quantum_group_from_document(load_json_file(cfg.input_path), opts);
}

Functional load_functional(const std::string& path, int dim, const std::string& what) {
  const Functional f = functional_from_json(load_json_file(path));
  if (f.size() != dim) {
    throw ParseError(what + ": covector length " + std::to_string(f.size()) +
                     " does not match the algebra dimension " + std::to_string(dim));
  }
  return f;
}

void print_report(const Report& rep) {
  for (const auto& c : rep.checks) {
    std::printf("  %-64s %s  tol %s  %s\n", c.name.c_str(), format_residual(c.residual).c_str(),
                format_residual(c.tol).c_str(), c.pass ? "ok" : "FAIL");
  }
}

ojson run_header(const RunConfig& cfg) {
  ojson doc;
  doc["schema"] = "fqg/1";
  doc["kind"] = "run";
  doc["command"] = cfg.command;
  if (!cfg.builtin.empty()) {
    doc["builtin"] = cfg.builtin;
  } else {
    doc["input"] = cfg.input_path;
  }
  doc["tol"] = format_residual(cfg.tol);
  doc["seed"] = cfg.seed;
  return doc;
}

// --- command handlers: fill the payload, print the table, return pass/fail ----

bool cmd_verify(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  Report rep = verify_cqg(qg, cfg.tol);
  rep.merge(check_orthogonality(qg, std::max(cfg.tol, 1e-8)), "orthogonality_");
  doc["report"] = report_to_json(rep);
  if (table) {
    std::printf("verify: dimension %d, %zu checks\n", qg.dim(), rep.checks.size());
    print_report(rep);
  }
  return rep.passed();
}

bool cmd_irreps(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  const Report orth = check_orthogonality(qg, std::max(cfg.tol, 1e-8));
  ojson classes = ojson::array();
  for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
    ojson c;
    c["n"] = qg.irr.classes[a].n;
    c["coeff"] = matrix_to_json(qg.irr.classes[a].coeff);
    classes.push_back(std::move(c));
  }
  doc["classes"] = std::move(classes);
  doc["trivial_index"] = qg.irr.trivial_index;
  doc["orthogonality"] = report_to_json(orth);
  if (table) {
    std::printf("irreps: %zu classes, trivial class %d\n", qg.irr.classes.size(),
                qg.irr.trivial_index);
    for (std::size_t a = 0; a < qg.irr.classes.size(); ++a) {
      std::printf("  class %zu: dimension %d\n", a, qg.irr.classes[a].n);
    }
    print_report(orth);
  }
  return orth.passed();
}

bool cmd_idempotents(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  const IdempotentEnumeration en = enumerate_idempotents_bruteforce(qg);
  ojson list = ojson::array();
  for (std::size_t i = 0; i < en.states.size(); ++i) {
    ojson e;
    e["covector"] = covector_to_json(en.states[i]);
    e["block_ranks"] = en.ranks[i];
    list.push_back(std::move(e));
  }
  doc["count"] = en.states.size();
  doc["idempotents"] = std::move(list);
  if (table) {
    std::printf("idempotents: %zu states\n", en.states.size());
    for (std::size_t i = 0; i < en.states.size(); ++i) {
      std::printf("  %zu: block ranks", i);
      for (int r : en.ranks[i]) std::printf(" %d", r);
      std::printf(", covector");
      for (Eigen::Index j = 0; j < en.states[i].size(); ++j) {
        std::printf(" [%s, %s]", format_residual(en.states[i](j).real()).c_str(),
                    format_residual(en.states[i](j).imag()).c_str());
      }
      std::printf("\n");
    }
  }
  (void)cfg;
  return true;
}

std::vector<Functional> idempotents_for(const RunConfig& cfg, const QuantumGroup& qg) {
  if (!cfg.idempotent_path.empty()) {
    return {load_functional(cfg.idempotent_path, qg.dim(), "idempotent")};
  }
  return enumerate_idempotents_bruteforce(qg).states;
}

bool cmd_hypergroup(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  const QgOptions opts{cfg.tol, cfg.seed};
  bool all = true;
  ojson entries = ojson::array();
  const auto idem = idempotents_for(cfg, qg);
  for (std::size_t i = 0; i < idem.size(); ++i) {
    const Hypergroup hg = build_hypergroup_from_idempotent(qg, idem[i], opts);
    Report rep = verify_hypergroup(hg, std::max(cfg.tol, 1e-8));
    rep.merge(verify_peter_weyl(hg, std::max(cfg.tol, 1e-8)), "peter_weyl_");
    all = all && rep.passed();
    ojson e;
    e["idempotent"] = covector_to_json(idem[i]);
    e["dim"] = hg.dim();
    e["report"] = report_to_json(rep);
    e["document"] = hypergroup_to_json(hg);
    entries.push_back(std::move(e));
    if (table) {
      std::printf("hypergroup %zu: carrier dimension %d\n", i, hg.dim());
      print_report(rep);
    }
  }
  doc["hypergroups"] = std::move(entries);
  return all;
}

bool cmd_duality(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  const QgOptions opts{cfg.tol, cfg.seed};
  bool all = true;
  ojson entries = ojson::array();
  const auto idem = idempotents_for(cfg, qg);
  for (std::size_t i = 0; i < idem.size(); ++i) {
    const Report rep = verify_duality_theorem(qg, idem[i], opts, std::max(cfg.tol, 1e-8));
    all = all && rep.passed();
    ojson e;
    e["idempotent"] = covector_to_json(idem[i]);
    e["report"] = report_to_json(rep);
    entries.push_back(std::move(e));
    if (table) {
      std::printf("duality %zu:\n", i);
      print_report(rep);
    }
  }
  doc["dualities"] = std::move(entries);
  return all;
}

bool cmd_poisson_decompose(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  if (cfg.generator_path.empty()) {
    throw ParseError("poisson-decompose: --generator FILE is required");
  }
  const Functional u = load_functional(cfg.generator_path, qg.dim(), "generator");
  const Functional phi = cfg.idempotent_path.empty()
                             ? Functional(qg.counit)
                             : load_functional(cfg.idempotent_path, qg.dim(), "idempotent");
  const PoissonDecomposition dec = levy_decompose(qg, phi, u, std::max(cfg.tol, 1e-9));
  Report rep;
  rep.add("reconstruction",
          sup_abs(Functional(u - dec.rate * (dec.jump - dec.phi))), std::max(cfg.tol, 1e-9));
  rep.add_flag("jump_is_state", dec.rate == 0.0 || is_state(qg, dec.jump, 1e-7));
  doc["decomposition"] = poisson_to_json(dec);
  doc["report"] = report_to_json(rep);
  if (table) {
    std::printf("poisson-decompose: rate %s\n", format_residual(dec.rate).c_str());
    print_report(rep);
  }
  return rep.passed();
}

bool cmd_divisible_check(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  if (cfg.state_path.empty()) throw ParseError("divisible-check: --state FILE is required");
  const Functional omega = load_functional(cfg.state_path, qg.dim(), "state");
  if (!is_state(qg, omega, std::max(cfg.tol, 1e-7))) {
    throw DomainError("divisible-check: the input covector is not a state");
  }
  const int depth = cfg.depth > 0 ? cfg.depth : recommended_chain_depth(cfg.order);
  const RootSearchOutcome oc = root_chain_search(qg, omega, cfg.order, depth, cfg.tol);
  if (!oc.ok()) {
    doc["poisson"] = false;
    doc["failure"] = oc.failure;
    doc["failed_depth"] = oc.failed_depth;
    if (table) {
      std::printf("divisible-check: NOT infinitely divisible\n  %s (level %d)\n",
                  oc.failure.c_str(), oc.failed_depth);
    }
    return false;
  }
  const PoissonDecomposition dec = capture_and_extract(qg, *oc.chain, std::max(cfg.tol, 1e-7));
  const DecayDiagnostics dd = root_decay_diagnostics(qg, *oc.chain, std::max(cfg.tol, 1e-7));
  doc["poisson"] = true;
  doc["decomposition"] = poisson_to_json(dec);
  ojson chain;
  chain["indices"] = oc.chain->indices;
  ojson roots = ojson::array();
  for (const Functional& r : oc.chain->roots) roots.push_back(covector_to_json(r));
  chain["roots"] = std::move(roots);
  chain["clip_magnitude"] = format_residual(oc.clip_magnitude);
  doc["chain"] = std::move(chain);
  ojson diag = report_to_json(dd.report);
  diag["decay_constant"] = format_residual(dd.decay_constant);
  ojson masses = ojson::array();
  for (double p : dd.counit_masses) masses.push_back(format_residual(p));
  diag["counit_masses"] = std::move(masses);
  doc["diagnostics"] = std::move(diag);
  if (table) {
    std::printf("divisible-check: Poisson state, rate %s\n", format_residual(dec.rate).c_str());
    std::printf("  chain indices:");
    for (long long n : oc.chain->indices) std::printf(" %lld", n);
    std::printf("\n  decay constant %s\n", format_residual(dd.decay_constant).c_str());
    print_report(dd.report);
  }
  return dd.report.passed();
}

bool cmd_suite(const RunConfig& cfg, const QuantumGroup& qg, ojson& doc, bool table) {
  const QgOptions opts{cfg.tol, cfg.seed};
  Report rep;
  rep.merge(verify_cqg(qg, cfg.tol), "cqg_");
  rep.merge(check_orthogonality(qg, std::max(cfg.tol, 1e-8)), "orthogonality_");
  const QuantumGroup bidual = dual_quantum_group(dual_quantum_group(qg, opts), opts);
  rep.merge(compare_structures(qg, bidual, std::max(cfg.tol, 1e-7)), "biduality_");
  const auto idem = enumerate_idempotents_bruteforce(qg).states;
  for (std::size_t i = 0; i < idem.size(); ++i) {
    const std::string pre = "idem" + std::to_string(i) + "_";
    const Hypergroup hg = build_hypergroup_from_idempotent(qg, idem[i], opts);
    rep.merge(verify_hypergroup(hg, std::max(cfg.tol, 1e-8)), pre + "hypergroup_");
    rep.merge(verify_peter_weyl(hg, std::max(cfg.tol, 1e-8)), pre + "peter_weyl_");
    rep.merge(verify_duality_theorem(qg, idem[i], opts, std::max(cfg.tol, 1e-8)), pre + "duality_");
  }
  rep.merge(divisibility_suite(qg, cfg.samples, cfg.seed, std::max(cfg.tol, 1e-6)),
            "divisibility_");
  doc["report"] = report_to_json(rep);
  if (table) {
    std::printf("suite: %zu checks over %zu idempotent states\n", rep.checks.size(), idem.size());
    print_report(rep);
  }
  return rep.passed();
}

int dispatch(const RunConfig& cfg) {
  const QgOptions opts{cfg.tol, cfg.seed};
  const bool table = cfg.output == "table";
  const QuantumGroup qg = load_input(cfg, opts);
  ojson doc = run_header(cfg);
  bool pass = false;
  if (cfg.command == "verify") pass = cmd_verify(cfg, qg, doc, table);
  else if (cfg.command == "irreps") pass = cmd_irreps(cfg, qg, doc, table);
  else if (cfg.command == "idempotents") pass = cmd_idempotents(cfg, qg, doc, table);
  else if (cfg.command == "hypergroup") pass = cmd_hypergroup(cfg, qg, doc, table);
  else if (cfg.command == "duality") pass = cmd_duality(cfg, qg, doc, table);
  else if (cfg.command == "poisson-decompose") pass = cmd_poisson_decompose(cfg, qg, doc, table);
  else if (cfg.command == "divisible-check") pass = cmd_divisible_check(cfg, qg, doc, table);
  else if (cfg.command == "suite") pass = cmd_suite(cfg, qg, doc, table);
  doc["passed"] = pass;
  if (!table) std::cout << doc.dump(2) << "\n";
  else std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"finite quantum groups: verification, hypergroups, Poisson calculus"};
  app.require_subcommand(1);

  const auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path,
                    "path to a quantum group or group table JSON document");
    sub->add_option("--builtin", cfg.builtin,
                    "builtin presentation (c:Z2 c:Z3 c:Z4 c:Z2xZ2 c:S3, g:... group algebras)");
    sub->add_option("--tol", cfg.tol, "base tolerance")->capture_default_str();
    sub->add_option("--output", cfg.output, "output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for randomized batteries")->capture_default_str();
  };

  add_common(app.add_subcommand("verify", "axiom battery and orthogonality relations"));
  add_common(app.add_subcommand("irreps", "representation classes and orthogonality"));
  add_common(app.add_subcommand("idempotents", "enumerate all idempotent states"));
  CLI::App* hyper = app.add_subcommand("hypergroup", "build and verify induced hypergroups");
  add_common(hyper);
  hyper->add_option("--idempotent", cfg.idempotent_path,
                    "functional JSON file (default: all enumerated idempotents)");
  CLI::App* dual = app.add_subcommand("duality", "verify the dual-corner identification");
  add_common(dual);
  dual->add_option("--idempotent", cfg.idempotent_path,
                   "functional JSON file (default: all enumerated idempotents)");
  CLI::App* pd = app.add_subcommand("poisson-decompose",
                                    "minimal-rate decomposition of a generator");
  add_common(pd);
  pd->add_option("--generator", cfg.generator_path, "functional JSON file")->required();
  pd->add_option("--idempotent", cfg.idempotent_path,
                 "idempotent state JSON file (default: the counit)");
  CLI::App* dc = app.add_subcommand("divisible-check",
                                    "root chains, idempotent capture, generator extraction");
  add_common(dc);
  dc->add_option("--state", cfg.state_path, "state covector JSON file")->required();
  dc->add_option("--order", cfg.order, "root order for the chain")->capture_default_str();
  dc->add_option("--depth", cfg.depth, "chain depth (default: derived from the order)");
  CLI::App* suite = app.add_subcommand("suite", "the full verification battery");
  add_common(suite);
  suite->add_option("--samples", cfg.samples, "random states per idempotent")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.input_path.empty() == cfg.builtin.empty()) {
    std::fprintf(stderr, "fqg %s: exactly one of --input or --builtin is required\n",
                 cfg.command.c_str());
    return 2;
  }
  if (cfg.tol <= 0.0) {
    std::fprintf(stderr, "fqg %s: --tol must be positive\n", cfg.command.c_str());
    return 2;
  }
  if (cfg.order < 2) {
    std::fprintf(stderr, "fqg %s: --order must be at least 2\n", cfg.command.c_str());
    return 2;
  }

  try {
    return dispatch(cfg);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "fqg %s: input error: %s\n", cfg.command.c_str(), e.what());
    return 2;
  } catch (const StructuralError& e) {
    std::fprintf(stderr, "fqg %s: input error: %s\n", cfg.command.c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fqg %s: %s\n", cfg.command.c_str(), e.what());
    return 1;
  }
}
