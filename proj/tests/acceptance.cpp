// Acceptance battery: ten end-to-end gates over the whole library and the
// command-line tool.  Each gate prints exactly one PASS/FAIL line; failures
// list their first few defects indented underneath.  The process exit code is
// the number of failed gates.
//
// Gate 10 shells out to the CLI named by the FQG_CLI environment variable.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fqg/divisibility.hpp"
#include "fqg/idempotents.hpp"
#include "fqg/io.hpp"
#include "fqg/rng.hpp"

using namespace fqg;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

struct Gate {
  bool ok = true;
  std::vector<std::string> notes;
  void fail(std::string n) {
    ok = false;
    if (notes.size() < 12) notes.push_back(std::move(n));
  }
  void check(bool c, const std::string& n) {
    if (!c) fail(n);
  }
  void resid(double r, double tol, const std::string& n) {
    if (!(r <= tol)) fail(n + ": residual " + fmt(r) + " exceeds " + fmt(tol));
  }
  void report(const Report& rep, const std::string& n) {
    if (rep.passed()) return;
    const CheckResult* f = rep.first_failure();
    fail(n + ": check '" + (f ? f->name : "?") + "' failed" +
         (f ? " (residual " + fmt(f->residual) + ")" : ""));
  }
};

struct Corpus {
  std::vector<std::string> names;
  std::map<std::string, QuantumGroup> qg;
  std::map<std::string, std::vector<Functional>> idem;
};

Corpus build_corpus() {
  Corpus c;
  c.names = builtin_names();
  for (const std::string& name : c.names) {
    c.qg.emplace(name, builtin_quantum_group(name));
    c.idem.emplace(name, enumerate_idempotents_bruteforce(c.qg.at(name)).states);
  }
  return c;
}

Functional point_mass(int dim, int g) {
  Functional f = Functional::Zero(dim);
  f(g) = 1.0;
  return f;
}

// Hermitian, centered, bi-invariant draw for the generator batteries.
Functional bi_invariant_centered(const QuantumGroup& qg, const Functional& phi, CounterRng& rng) {
  const Functional w = random_centered_hermitian(qg, rng);
  return convolve(qg, phi, convolve(qg, w, phi));
}

Functional bi_invariant_state(const QuantumGroup& qg, const Functional& phi, CounterRng& rng) {
  const Functional v = random_state(qg, rng);
  return convolve(qg, phi, convolve(qg, v, phi));
}

// Independent series oracle: e^{-r} sum_k r^k v^{*k} / k! with v^{*0} = phi.
Functional poisson_series(const QuantumGroup& qg, const Functional& phi, double rate,
                          const Functional& jump) {
  Functional sum = phi;
  Functional term = phi;
  for (long k = 1; k <= 4000; ++k) {
    term = Functional(convolve(qg, term, jump) * (rate / double(k)));
    sum += term;
    if (sup_abs(term) * std::exp(rate) < 1e-15) break;
  }
  return Functional(sum * std::exp(-rate));
}

int table_identity(const GroupTable& t) {
  for (std::size_t e = 0; e < t.size(); ++e) {
    bool id = true;
    for (std::size_t j = 0; j < t.size(); ++j) id = id && t[e][j] == int(j) && t[j][e] == int(j);
    if (id) return int(e);
  }
  return -1;
}

int table_order(const GroupTable& t, int g) {
  const int e = table_identity(t);
  int x = g, k = 1;
  while (x != e) {
    x = t[x][g];
    ++k;
  }
  return k;
}

// --- gates -----------------------------------------------------------------------

void gate_axioms(const Corpus& c, Gate& g) {
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    g.report(verify_cqg(qg, 1e-9), name + " axiom battery");
    g.report(check_orthogonality(qg, 1e-8), name + " orthogonality");
  }
  // Two-dimensional class of the function algebra on the symmetric group of
  // three letters: the pairing haar(u_{ij} u_{kl}^*) equals delta/2 exactly.
  const QuantumGroup& s3 = c.qg.at("c:S3");
  bool found = false;
  for (const IrrepClass& cls : s3.irr.classes) {
    if (cls.n != 2) continue;
    found = true;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const Vec x = cls.coeff.col(i * 2 + j);
            const Vec y = cls.coeff.col(k * 2 + l);
            const cplx val = (s3.haar * s3.algebra.product(x, s3.algebra.star(y)))(0);
            const double want = (i == k && j == l) ? 0.5 : 0.0;
            g.resid(std::abs(val - want), 1e-8, "c:S3 two-dim class pairing");
          }
  }
  g.check(found, "c:S3 has no two-dimensional representation class");
}

void gate_biduality(const Corpus& c, Gate& g) {
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const QuantumGroup bidual = dual_quantum_group(dual_quantum_group(qg));
    g.report(compare_structures(qg, bidual, 1e-7), name + " double dual");
  }
  for (const char* base : {"Z2", "Z3", "S3"}) {
    const std::string cn = std::string("c:") + base, gn = std::string("g:") + base;
    const QuantumGroup dual = dual_quantum_group(c.qg.at(cn));
    g.report(compare_structures(dual, c.qg.at(gn), 1e-7), "dual of " + cn + " vs " + gn);
  }
}

void gate_idempotents(const Corpus& c, Gate& g) {
  const QuantumGroup& qg = c.qg.at("c:Z4");
  const auto& states = c.idem.at("c:Z4");
  g.check(states.size() == 3,
          "c:Z4 enumeration found " + std::to_string(states.size()) + " states, expected 3");
  // Uniform measures on the three subgroups of the cyclic group of order 4.
  std::vector<Functional> oracle;
  oracle.push_back(point_mass(4, 0));
  Functional half = Functional::Zero(4);
  half(0) = half(2) = 0.5;
  oracle.push_back(half);
  oracle.push_back(Functional(Functional::Constant(4, 0.25)));
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    double best = 1e9;
    for (const Functional& s : states) best = std::min(best, sup_abs(Functional(s - oracle[i])));
    g.resid(best, 1e-8, "subgroup measure " + std::to_string(i) + " missing from enumeration");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    g.resid(sup_abs(Functional(states[i] * qg.antipode - states[i])), 1e-8,
            "state " + std::to_string(i) + " not fixed by the antipode");
    const FourierImage img = fourier(qg, states[i]);
    for (const Mat& b : img.blocks_img) {
      g.resid(sup_abs(Mat(b * b - b)), 1e-8, "transform block of state " + std::to_string(i) +
                                                 " is not idempotent");
      g.resid(sup_abs(Mat(b - b.adjoint())), 1e-8,
              "transform block of state " + std::to_string(i) + " is not self-adjoint");
    }
  }
}

void gate_hypergroups(const Corpus& c, Gate& g) {
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const auto& idem = c.idem.at(name);
    for (std::size_t i = 0; i < idem.size(); ++i) {
      const Hypergroup hg = build_hypergroup_from_idempotent(qg, idem[i]);
      const std::string tag = name + " idempotent " + std::to_string(i);
      g.report(verify_hypergroup(hg, 1e-8), tag + " hypergroup battery");
      g.report(verify_peter_weyl(hg, 1e-8), tag + " coefficient orthogonality");
    }
  }
}

void gate_duality(const Corpus& c, Gate& g) {
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const auto& idem = c.idem.at(name);
    for (std::size_t i = 0; i < idem.size(); ++i) {
      g.report(verify_duality_theorem(qg, idem[i], {}, 1e-8),
               name + " idempotent " + std::to_string(i) + " duality");
    }
  }
}

void gate_decomposition(const Corpus& c, Gate& g) {
  CounterRng root(0xacce6701u);
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const auto& idem = c.idem.at(name);
    for (std::size_t i = 0; i < idem.size(); ++i) {
      const Functional& phi = idem[i];
      CounterRng rng = root.fork(name).fork(i);
      const std::string tag = name + " idempotent " + std::to_string(i);
      for (int t = 0; t < 100; ++t) {
        const Functional u = bi_invariant_centered(qg, phi, rng);
        const bool cp = is_conditionally_positive(qg, phi, u, 1e-9);
        bool decomposed = true;
        PoissonDecomposition dec;
        try {
          dec = levy_decompose(qg, phi, u, 1e-9);
        } catch (const DomainError&) {
          decomposed = false;
        }
        if (cp != decomposed) {
          g.fail(tag + " draw " + std::to_string(t) +
                 ": conditional positivity and decomposability disagree");
          continue;
        }
        if (!decomposed) continue;
        g.resid(sup_abs(Functional(u - dec.rate * (dec.jump - dec.phi))), 1e-9,
                tag + " reconstruction");
        const Functional a = exp_phi(qg, phi, u, 1e-13);
        const Functional b = poisson_series(qg, phi, dec.rate, dec.jump);
        g.resid(sup_abs(Functional(a - b)), 1e-9, tag + " series oracles");
      }
    }
  }
  // Closed form on the two-point function algebra: jump at the flip, rate 1.
  const QuantumGroup& z2 = c.qg.at("c:Z2");
  Functional u(2);
  u << -1.0, 1.0;
  const Functional om = exp_phi(z2, Functional(z2.counit), u, 1e-14);
  g.resid(std::abs(om(0) - std::exp(-1.0) * std::cosh(1.0)), 1e-9, "closed form, unit mass");
  g.resid(std::abs(om(1) - std::exp(-1.0) * std::sinh(1.0)), 1e-9, "closed form, flip mass");
  g.resid(std::abs(om(0).real() - 0.567667), 1e-6, "closed form, printed unit mass");
  g.resid(std::abs(om(1).real() - 0.432332), 1e-6, "closed form, printed flip mass");
}

void gate_calculus(const Corpus& c, Gate& g) {
  CounterRng root(0xacce6702u);
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const auto& idem = c.idem.at(name);
    for (std::size_t i = 0; i < idem.size(); ++i) {
      const Functional& phi = idem[i];
      CounterRng rng = root.fork(name).fork(i);
      const std::string tag = name + " idempotent " + std::to_string(i);
      for (int t = 0; t < 5; ++t) {
        // log after exp inside the norm-log-2 ball.
        Functional w = bi_invariant_centered(qg, phi, rng);
        const double nw = functional_norm(qg, w);
        if (nw > 1e-12) w = Functional(w * (0.6 / nw));
        g.resid(sup_abs(Functional(log_phi(qg, phi, exp_phi(qg, phi, w, 1e-14), 1e-14) - w)),
                1e-9, tag + " log of exp");
        // exp after log inside the unit ball around the idempotent.
        const Functional v = bi_invariant_state(qg, phi, rng);
        const double dv = functional_norm(qg, Functional(v - phi));
        const double scale = 0.8 / std::max(1.0, dv);
        const Functional x = Functional(phi + scale * (v - phi));
        g.resid(sup_abs(Functional(exp_phi(qg, phi, log_phi(qg, phi, x, 1e-14), 1e-14) - x)),
                1e-9, tag + " exp of log");
      }
    }
  }
  // Intermediate powers of a canonical chain root stay exponentially close to
  // the idempotent: |root^k - phi| <= (k nu / n) exp(k nu / n).
  for (const char* name : {"c:Z4", "g:S3"}) {
    const QuantumGroup& qg = c.qg.at(name);
    const auto& idem = c.idem.at(name);
    for (std::size_t i = 0; i < idem.size(); ++i) {
      const Functional& phi = idem[i];
      CounterRng rng = root.fork("chain").fork(name).fork(i);
      const Functional v = bi_invariant_state(qg, phi, rng);
      const Functional u = Functional(0.7 * (v - phi));
      const double nu = functional_norm(qg, u);
      const long long n = 12;
      const Functional r = exp_phi(qg, phi, Functional(u / double(n)), 1e-14);
      Functional pw = phi;
      const std::string tag = std::string(name) + " idempotent " + std::to_string(i);
      for (long long k = 1; k <= n; ++k) {
        pw = convolve(qg, pw, r);
        const double bound = (double(k) * nu / double(n)) *
                                 std::exp(double(k) * nu / double(n)) +
                             1e-12;
        const double dist = functional_norm(qg, Functional(pw - phi));
        if (dist > bound) {
          g.fail(tag + " power " + std::to_string(k) + ": distance " + fmt(dist) +
                 " above the bound " + fmt(bound));
        }
      }
      g.resid(sup_abs(Functional(pw - exp_phi(qg, phi, u, 1e-14))), 1e-9,
              tag + " full power vs exponential");
    }
  }
}

void gate_divisibility(const Corpus& c, Gate& g) {
  CounterRng root(0xacce6703u);
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const auto& idem = c.idem.at(name);
    long long n = 1;
    for (int k = 2; k <= qg.dim(); ++k) n = std::lcm(n, static_cast<long long>(k));
    const int depth = recommended_chain_depth(n);
    const int per = int((20 + idem.size() - 1) / idem.size());
    for (std::size_t i = 0; i < idem.size(); ++i) {
      const Functional& phi = idem[i];
      CounterRng rng = root.fork(name).fork(i);
      const std::string tag = name + " idempotent " + std::to_string(i);
      for (int t = 0; t < per; ++t) {
        const Functional v = bi_invariant_state(qg, phi, rng);
        const double rate = 0.4 + 0.8 * rng.uniform();
        const Functional u = Functional(rate * (v - phi));
        const Functional omega = exp_phi(qg, phi, u, 1e-14);
        const RootSearchOutcome oc = root_chain_search(qg, omega, n, depth);
        if (!oc.ok()) {
          g.fail(tag + " sample " + std::to_string(t) + ": chain search failed (" + oc.failure +
                 ")");
          continue;
        }
        const PoissonDecomposition dec = capture_and_extract(qg, *oc.chain, 1e-7);
        g.resid(sup_abs(Functional(dec.phi - phi)), 1e-6, tag + " captured idempotent");
        g.resid(sup_abs(Functional(dec.generator - u)), 1e-6, tag + " captured generator");
        const DecayDiagnostics dd = root_decay_diagnostics(qg, *oc.chain, 1e-7);
        g.report(dd.report, tag + " decay diagnostics");
        g.resid(sup_abs(Functional(dd.generator - u)), 1e-6, tag + " extrapolated generator");
        // Re-prove the state is the exponential of the recovered generator.
        const Functional gen = convolve(qg, phi, convolve(qg, dd.generator, phi));
        g.resid(sup_abs(Functional(exp_phi(qg, phi, gen, 1e-14) - omega)), 1e-6,
                tag + " exponential of the recovered generator");
      }
    }
  }
  // Counit/flip mixtures on the two-point function algebra: the square-root
  // search fails exactly when the counit weight drops below one half.
  const QuantumGroup& z2 = c.qg.at("c:Z2");
  for (int step = 0; step <= 20; ++step) {
    const double p = double(step) / 20.0;
    Functional om(2);
    om << p, 1.0 - p;
    const RootSearchOutcome oc = root_chain_search(z2, om, 2, 3);
    if (p < 0.5 && oc.ok()) {
      g.fail("mixture with counit weight " + fmt(p) + " unexpectedly has a root chain");
    }
    if (p >= 0.5 && !oc.ok()) {
      g.fail("mixture with counit weight " + fmt(p) + " unexpectedly fails: " + oc.failure);
    }
  }
}

void gate_orders(const Corpus& c, Gate& g) {
  const std::vector<std::pair<std::string, GroupTable>> tables = {
      {"c:Z2", cyclic_table(2)},     {"c:Z3", cyclic_table(3)}, {"c:Z4", cyclic_table(4)},
      {"c:Z2xZ2", klein_table()},    {"c:S3", s3_table()},
  };
  for (const auto& [name, table] : tables) {
    const QuantumGroup& qg = c.qg.at(name);
    const int d = qg.dim();
    for (int e = 0; e < d; ++e) {
      const StateOrder so = unitary_state_order(qg, point_mass(d, e), 1e-8);
      const int want = table_order(table, e);
      g.check(so.order == want, name + " point mass " + std::to_string(e) + ": order " +
                                    std::to_string(so.order) + ", expected " +
                                    std::to_string(want));
      g.check(so.order <= d, name + " point mass order exceeds the dual dimension");
      g.check(so.is_character, name + " point mass " + std::to_string(e) + " not multiplicative");
    }
  }
  for (const auto& name : c.names) {
    const QuantumGroup& qg = c.qg.at(name);
    const std::optional<Functional> s = find_order_two_character(qg);
    if (!s) continue;
    const StateOrder so = unitary_state_order(qg, *s, 1e-8);
    g.check(so.order == 2, name + ": order-two character has order " + std::to_string(so.order));
    g.check(so.is_character, name + ": order-two state is not multiplicative");
  }
  // Orders modulo an idempotent stay within the dimension bound wherever the
  // double-smoothed point mass is convolution-unitary on the corner.
  int successes = 0, nontrivial = 0;
  for (const auto& [name, table] : tables) {
    const QuantumGroup& qg = c.qg.at(name);
    const int d = qg.dim();
    for (const Functional& phi : c.idem.at(name)) {
      for (int e = 0; e < d; ++e) {
        const Functional rho = convolve(qg, phi, convolve(qg, point_mass(d, e), phi));
        try {
          const int k = order_mod_idempotent(qg, rho, phi, 1e-8);
          g.check(k >= 1 && k <= d, name + ": order " + std::to_string(k) +
                                        " outside [1, " + std::to_string(d) + "]");
          ++successes;
          if (k > 1) ++nontrivial;
        } catch (const DomainError&) {
          // not convolution-unitary on this corner, so no order is defined
        }
      }
    }
  }
  g.check(successes > 0, "no corner order was computable");
  g.check(nontrivial > 0, "every computable corner order was trivial");
}

std::optional<std::string> run_capture(const std::string& cmd) {
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return std::nullopt;
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
  const int rc = pclose(p);
  if (rc != 0) return std::nullopt;
  return out;
}

void gate_determinism(Gate& g) {
  const char* cli = std::getenv("FQG_CLI");
  if (!cli || !*cli) {
    g.fail("FQG_CLI is not set; cannot locate the command-line binary");
    return;
  }
  const std::vector<std::string> cmds = {
      std::string(cli) + " verify --builtin c:Z4 --output json",
      std::string(cli) + " idempotents --builtin c:S3 --output json --seed 7",
      std::string(cli) + " suite --builtin c:Z2 --output json --samples 3",
  };
  for (const std::string& cmd : cmds) {
    const auto a = run_capture(cmd);
    const auto b = run_capture(cmd);
    if (!a || !b) {
      g.fail("command failed: " + cmd);
      continue;
    }
    g.check(!a->empty(), "empty output: " + cmd);
    g.check(*a == *b, "two runs differ: " + cmd);
  }
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    void (*run)(const Corpus&, Gate&);
  };
  const Corpus corpus = build_corpus();
  const std::vector<Entry> entries = {
      {"axiom batteries and orthogonality constants", gate_axioms},
      {"double duals and function/group algebra duality", gate_biduality},
      {"idempotent enumeration against subgroup measures", gate_idempotents},
      {"hypergroups from every idempotent state", gate_hypergroups},
      {"duality identification on every corner", gate_duality},
      {"minimal decompositions of random generators", gate_decomposition},
      {"exponential/logarithm calculus and power bounds", gate_calculus},
      {"root chains recover every sampled Poisson state", gate_divisibility},
      {"convolution orders within the dimension bound", gate_orders},
  };
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Gate g;
    try {
      entries[i].run(corpus, g);
    } catch (const std::exception& e) {
      g.fail(std::string("unhandled error: ") + e.what());
    }
    std::printf("criterion %2zu: %s  %s\n", i + 1, g.ok ? "PASS" : "FAIL", entries[i].label);
    for (const std::string& n : g.notes) std::printf("              - %s\n", n.c_str());
    failures += g.ok ? 0 : 1;
  }
  Gate g10;
  gate_determinism(g10);
  std::printf("criterion 10: %s  %s\n", g10.ok ? "PASS" : "FAIL",
              "command-line runs are byte-identical");
  for (const std::string& n : g10.notes) std::printf("              - %s\n", n.c_str());
  failures += g10.ok ? 0 : 1;
  return failures;
}
