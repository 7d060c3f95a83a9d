// phcalc: command-line front end for the library.
//
// Exit codes: 0 success, 1 a verification failed (the report says which),
// 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "phcalc/calculus.hpp"
#include "phcalc/counterexamples.hpp"
#include "phcalc/errors.hpp"
#include "phcalc/json_io.hpp"
#include "phcalc/order.hpp"
#include "phcalc/sampling.hpp"

using namespace phcalc;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

/// Thrown for bad flag values; carries the flag name.
struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& what)
      : std::runtime_error(flag + ": " + what) {}
};

template <class F>
auto for_flag(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ResourceLimit&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(flag, e.what());
  }
}

struct Output {
  std::string format = "json";

  void print(const Json& j) const {
    if (format == "json") {
      std::cout << j.dump() << '\n';
    } else {
      text(j, 0);
    }
  }

 private:
  static void text(const Json& j, int indent) {
    const std::string pad(indent, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      if (v.is_object() || (v.is_array() && !v.empty() && v.front().is_object())) {
        std::cout << pad << it.key() << ":\n";
        if (v.is_object()) {
          text(v, indent + 2);
        } else {
          for (const auto& item : v) {
            std::cout << pad << "  -\n";
            text(item, indent + 4);
          }
        }
      } else {
        std::cout << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                  << '\n';
      }
    }
  }
};

RationalPoint parse_point(const std::string& text) {
  RationalPoint p;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(',', start);
    p.push_back(parse_rational(text.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return p;
}

/// Function descriptors: a JSON object, "euclidean", "pnorm:P" or
/// "pnorm:P:w1,w2,...", "coord:I", or a term in the DSL.
PHFunction parse_function(const std::string& text, std::size_t arity) {
  if (!text.empty() && text.front() == '{') return ph_from_json(Json::parse(text));
  if (text == "euclidean") return PHFunction::euclidean(arity);
  if (text.rfind("pnorm:", 0) == 0) {
    const std::string rest = text.substr(6);
    const std::size_t colon = rest.find(':');
    const double p = std::stod(rest.substr(0, colon));
    std::vector<double> w(arity, 1.0);
    if (colon != std::string::npos) {
      w.clear();
      for (const auto& q : parse_point(rest.substr(colon + 1))) w.push_back(to_double(q));
    }
    return PHFunction::pnorm(p, std::move(w));
  }
  if (text.rfind("coord:", 0) == 0) {
    const long i = std::stol(text.substr(6));
    if (i < 1) throw InvalidArgument("coordinate indices start at 1");
    return PHFunction::coordinate(arity, std::size_t(i - 1));
  }
  return PHFunction::lattice(parse_term(text, arity));
}

double eps_to_double(const std::string& text) { return to_double(parse_rational(text)); }

// ----------------------------------------------------------------------------

struct CommonTuple {
  std::string model = "finite";
  std::string x;

  Tuple tuple() const {
    const Model m = for_flag("--model", [&] { return parse_model(model); });
    return for_flag("--x", [&] { return parse_tuple(m, x); });
  }
};

int run_normalize(const Output& out, const std::string& term, std::size_t n, bool no_prune) {
  const Term t = for_flag("TERM", [&] { return parse_term(term, n); });
  NormalizeOptions opt;
  opt.prune = !no_prune;
  const MaxMinNF nf = normalize(t, opt);
  Json j = to_json(nf);
  if (out.format == "text") j["term"] = to_string(to_term(nf));
  out.print(j);
  return kOk;
}

int run_eval(const Output& out, const std::string& term, std::size_t n, const std::string& point) {
  const Term t = for_flag("TERM", [&] { return parse_term(term, n); });
  const RationalPoint p = for_flag("--point", [&] { return parse_point(point); });
  if (p.size() != n) throw UsageError("--point", "expected " + std::to_string(n) + " coordinates");
  const Rational a = eval_term(t, p);
  const Rational b = eval_nf(normalize(t), p);
  out.print(Json{{"term", to_string(t)},
                 {"point", to_json(p)},
                 {"term_value", to_json(a)},
                 {"nf_value", to_json(b)},
                 {"agree", a == b}});
  return a == b ? kOk : kFailed;
}

int run_approx(const Output& out, const std::string& g_text, std::size_t n, const std::string& eps,
               std::size_t audit, std::uint64_t seed, std::size_t point_cap) {
  const PHFunction g = for_flag("--g", [&] { return parse_function(g_text, n); });
  const double e = for_flag("--eps", [&] { return eps_to_double(eps); });
  ApproxOptions opt;
  opt.point_cap = point_cap;
  const ApproxCertificate cert = krivine_approximate(g, e, opt);
  Json j = to_json(cert);
  bool ok = cert.epsilon <= e + kFloatSlack;
  if (audit > 0) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<std::size_t> axis(0, g.arity() - 1);
    double worst = 0;
    std::vector<double> p(g.arity());
    for (std::size_t k = 0; k < audit; ++k) {
      for (auto& c : p) c = u(rng);
      p[axis(rng)] = (rng() & 1) ? 1.0 : -1.0;
      worst = std::max(worst, std::fabs(g.eval(p) - cert.approximant.eval(p)));
    }
    const bool audit_ok = worst <= cert.epsilon + kFloatSlack;
    j["audit"] = {{"points", audit}, {"seed", seed}, {"max_error", worst}, {"pass", audit_ok}};
    ok = ok && audit_ok;
  }
  out.print(j);
  return ok ? kOk : kFailed;
}

int run_calculus(const Output& out, const CommonTuple& ct, const std::string& g_text,
                 const std::string& eps, bool direct) {
  const Tuple x = ct.tuple();
  const PHFunction g = for_flag("--g", [&] { return parse_function(g_text, x.size()); });
  if (g.arity() != x.size())
    throw UsageError("--g", "function arity " + std::to_string(g.arity()) + " differs from tuple size " +
                                std::to_string(x.size()));
  Json j;
  if (x.model() == Model::germ) {
    std::vector<GermClass> z;
    for (const auto& e : x.elements()) z.push_back(std::get<GermClass>(e));
    j = {{"value", to_json(LatticeElement(apply_quotient_calculus(z, g)))},
         {"mode", "exact"},
         {"error_bound", to_json(Rational(0))}};
  } else if (x.model() == Model::lex) {
    if (!g.is_exact())
      throw UsageError("--g", "the lexicographic plane admits only lattice terms");
    j = {{"value", to_json(apply_nf(x, g.lattice_form()))},
         {"mode", "exact"},
         {"error_bound", to_json(Rational(0))}};
  } else if (direct) {
    j = {{"value", to_json(apply_direct(x, g))}, {"mode", "direct"}};
  } else {
    const Rational e = for_flag("--eps", [&] { return parse_rational(eps); });
    j = to_json(apply_calculus(x, g, e));
  }
  out.print(j);
  return kOk;
}

int run_verify(const Output& out, const CommonTuple& ct, const std::vector<std::string>& f_texts,
               const std::string& g_text, const std::string& eps) {
  const Tuple x = ct.tuple();
  std::vector<PHFunction> fs;
  for (const auto& f : f_texts) fs.push_back(for_flag("--f", [&] { return parse_function(f, x.size()); }));
  const PHFunction g = for_flag("--g", [&] { return parse_function(g_text, fs.size()); });
  const Rational e = for_flag("--eps", [&] { return parse_rational(eps); });
  const CompositionReport rep = verify_composition(x, fs, g, e);
  out.print(to_json(rep));
  return rep.pass ? kOk : kFailed;
}

std::optional<Corruption> parse_corruption(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "sum") return Corruption::sum;
  if (s == "left") return Corruption::left_projection;
  if (s == "join0") return Corruption::join_with_zero;
  throw UsageError("--corrupt", "expected sum, left or join0");
}

int run_axioms(const Output& out, const std::string& model, std::size_t trials, std::uint64_t seed,
               const std::string& corrupt, std::size_t length) {
  const Model m = for_flag("--model", [&] { return parse_model(model); });
  const auto c = parse_corruption(corrupt);
  if (trials == 0) throw UsageError("--trials", "must be positive");
  const SigmaOracle o = c ? corrupted_oracle(m, *c) : calculus_oracle(m);
  const AxiomReport rep = axiom_suite(o, model_sampler(m, length), trials, seed);
  out.print(to_json(rep));
  return rep.all_pass() ? kOk : kFailed;
}

ObstructionCandidate candidate_from_flags(const std::string& c1, const std::string& s,
                                          const std::string& c2, const std::string& t) {
  return {for_flag("--c1", [&] { return parse_rational(c1); }),
          for_flag("--s", [&] { return parse_point(s); }),
          for_flag("--c2", [&] { return parse_rational(c2); }),
          for_flag("--t", [&] { return parse_point(t); })};
}

struct DemoFlags {
  std::string c1 = "1", s = "1,0", c2 = "1", t = "0,1";
  std::size_t steps = 250;
  std::size_t m_max = 1000;
  std::string model = "lex";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t n_max = 1'000'000;
  std::string f = "[(0,0),(1,1)]";
  std::string eps = "1/4";
  bool verbose = false;
};

int run_demo(const Output& out, const std::string& which, const DemoFlags& d) {
  if (which == "lex") {
    const ObstructionOutcome o = lex_obstruction(candidate_from_flags(d.c1, d.s, d.c2, d.t));
    bool ok = true;
    if (const auto* c = std::get_if<ContradictionCertificate>(&o))
      ok = sgn(c->route_a) == 0 && sgn(c->route_b) > 0;
    out.print(Json{{"forced_phi1", to_json(forced_phi1())}, {"candidate", to_json(o)}});
    return ok ? kOk : kFailed;
  }
  if (which == "sweep") {
    const SweepSummary s = lex_obstruction_sweep(obstruction_grid(d.steps));
    out.print(to_json(s));
    return s.survivors == 0 && s.routes_valid ? kOk : kFailed;
  }
  if (which == "kernel") {
    const KernelWitnessReport r = kernel_nonclosed_witness(d.m_max);
    Json j = to_json(r);
    if (!d.verbose) {
      Json failing = Json::array();
      for (const auto& s : j["steps"])
        if (!(s["in_kernel"] && s["distance_ok"] && s["dominated"] && s["identity_ok"]))
          failing.push_back(s);
      j["checked_m"] = {2, d.m_max};
      j["steps"] = std::move(failing);
    }
    out.print(j);
    return r.pass ? kOk : kFailed;
  }
  if (which == "uniform") {
    const UniformCompletenessReport r = not_uniformly_complete_witness(d.m_max, 100, d.seed);
    Json j = to_json(r);
    if (!d.verbose) {
      Json first = Json::array();
      for (std::size_t i = 0; i < j["steps"].size() && i < 4; ++i) first.push_back(j["steps"][i]);
      j["steps"] = std::move(first);
    }
    out.print(j);
    return r.pass ? kOk : kFailed;
  }
  if (which == "archimedean") {
    const Model m = for_flag("--model", [&] { return parse_model(d.model); });
    const ArchimedeanSearch r = archimedean_search(m, d.trials, d.seed, d.n_max);
    Json j = to_json(r);
    j["archimedean_model"] = is_archimedean(m);
    out.print(j);
    // A witness is expected exactly when the model is not Archimedean.
    return (r.witnesses == 0) == is_archimedean(m) ? kOk : kFailed;
  }
  if (which == "density") {
    const PLFunc f = for_flag("--f", [&] { return std::get<PLFunc>(parse_element(Model::pl, d.f)); });
    const Rational e = for_flag("--eps", [&] { return parse_rational(d.eps); });
    const DensityResult r = density_construction(f, e);
    out.print(to_json(r));
    return r.pass() ? kOk : kFailed;
  }
  throw UsageError("DEMO", "expected lex, sweep, kernel, uniform, archimedean or density");
}

struct ProbeFlags {
  CommonTuple tuple;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::string term;
  std::size_t depth = 4;
};

int run_probe(const Output& out, const std::string& which, const ProbeFlags& p) {
  if (which == "fuc") {
    CommonTuple ct = p.tuple;
    if (ct.model == "finite") ct.model = "pl";
    const Tuple x = ct.tuple();
    std::vector<PLFunc> fs;
    for (const auto& e : x.elements()) {
      if (const auto* f = std::get_if<PLFunc>(&e)) fs.push_back(*f);
      else if (const auto* g = std::get_if<EventuallyConstPL>(&e)) fs.push_back(g->f);
      else throw UsageError("--model", "fuc expects pl or ecpl elements");
    }
    const FiniteUCReport r =
        for_flag("--x", [&] { return finitely_uc_probe(fs, p.trials, p.seed, p.depth); });
    out.print(to_json(r));
    return r.pass() ? kOk : kFailed;
  }
  if (which == "contractivity") {
    // Without --x every trial draws a fresh pair from --model.
    const bool fixed = !p.tuple.x.empty();
    const Model m = for_flag("--model", [&] { return parse_model(p.tuple.model); });
    std::optional<Tuple> given;
    if (fixed) given = p.tuple.tuple();
    if (!p.term.empty()) {
      if (!given) throw UsageError("--x", "--term needs a tuple");
      const Term t = for_flag("--term", [&] { return parse_term(p.term, given->size()); });
      const ContractivityReport r = contractivity_check(*given, t);
      out.print(to_json(r));
      return r.pass ? kOk : kFailed;
    }
    Rng rng(p.seed);
    std::size_t pass = 0;
    Json first_failure;
    for (std::size_t k = 0; k < p.trials; ++k) {
      const Tuple x = given ? *given : Tuple({random_element(rng, m), random_element(rng, m)});
      const Term t = random_term(rng, x.size(), p.depth);
      const ContractivityReport r = contractivity_check(x, t);
      if (r.pass) ++pass;
      else if (first_failure.is_null())
        first_failure = {{"term", to_string(t)}, {"report", to_json(r)}};
    }
    Json j{{"trials", p.trials}, {"seed", p.seed}, {"pass", pass == p.trials}, {"passed", pass}};
    if (!first_failure.is_null()) j["first_failure"] = first_failure;
    out.print(j);
    return pass == p.trials ? kOk : kFailed;
  }
  if (which == "fidelity") {
    const Model m = for_flag("--model", [&] { return parse_model(p.tuple.model); });
    const FidelityReport r = reconstruction_fidelity(m, p.trials, p.seed);
    out.print(to_json(r));
    return r.pass() ? kOk : kFailed;
  }
  throw UsageError("PROBE", "expected fuc, contractivity or fidelity");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phcalc: lattice-linear terms, certified approximation and function calculus"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  std::string term, point, g_text, eps = "1/100";
  std::size_t n = 0, audit = 0, point_cap = 20'000;
  std::uint64_t seed = 1;
  bool no_prune = false, direct = false;
  CommonTuple ct;
  std::vector<std::string> f_texts;

  auto* normalize_cmd = app.add_subcommand("normalize", "Max-min normal form of a term");
  normalize_cmd->add_option("TERM", term, "Term, e.g. \"p1 + (p2 v 0)\"")->required();
  normalize_cmd->add_option("-n,--arity", n, "Number of variables")->required()->check(CLI::PositiveNumber);
  normalize_cmd->add_flag("--no-prune", no_prune, "Skip dominance pruning");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a term and its normal form at a point");
  eval_cmd->add_option("TERM", term)->required();
  eval_cmd->add_option("-n,--arity", n)->required()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--point", point, "Comma-separated rationals")->required();

  auto* approx_cmd = app.add_subcommand("approx", "Certified max-min approximation");
  approx_cmd->add_option("--g", g_text, "Function: euclidean, pnorm:P[:w1,..], coord:I, a term or JSON")
      ->required();
  approx_cmd->add_option("-n,--arity", n)->required()->check(CLI::PositiveNumber);
  approx_cmd->add_option("--eps", eps)->capture_default_str();
  approx_cmd->add_option("--audit", audit, "Random sphere points to audit the certificate on");
  approx_cmd->add_option("--seed", seed)->capture_default_str();
  approx_cmd->add_option("--point-cap", point_cap)->capture_default_str();

  const auto add_tuple = [&](CLI::App* cmd, CommonTuple& t) {
    cmd->add_option("--model", t.model, "finite, pl, ecpl, germ or lex")->capture_default_str();
    cmd->add_option("--x", t.x, "Tuple literal, elements separated by ';'");
  };

  auto* calc_cmd = app.add_subcommand("calculus", "Apply g to a tuple");
  add_tuple(calc_cmd, ct);
  calc_cmd->get_option("--x")->required();
  calc_cmd->add_option("--g", g_text)->required();
  calc_cmd->add_option("--eps", eps)->capture_default_str();
  calc_cmd->add_flag("--direct", direct, "Pointwise evaluation instead of the certified calculus");

  auto* verify_cmd = app.add_subcommand("verify-comp", "Check the composition law on a tuple");
  add_tuple(verify_cmd, ct);
  verify_cmd->get_option("--x")->required();
  verify_cmd->add_option("--f", f_texts, "Inner function (repeat)")->required();
  verify_cmd->add_option("--g", g_text, "Outer function")->required();
  verify_cmd->add_option("--eps", eps)->capture_default_str();

  std::string axiom_model = "finite", corrupt;
  std::size_t trials = 1000, length = 3;
  auto* axioms_cmd = app.add_subcommand("axioms", "Vector-lattice axioms of the order read off a calculus");
  axioms_cmd->add_option("--model", axiom_model)->capture_default_str();
  axioms_cmd->add_option("--trials", trials)->capture_default_str();
  axioms_cmd->add_option("--seed", seed)->capture_default_str();
  axioms_cmd->add_option("--corrupt", corrupt, "Break sigma on purpose: sum, left or join0");
  axioms_cmd->add_option("--length", length, "Length of sampled finite vectors")->capture_default_str();

  std::string demo;
  DemoFlags d;
  auto* demo_cmd = app.add_subcommand("demo", "Counterexample replays");
  demo_cmd->add_option("DEMO", demo, "lex, sweep, kernel, uniform, archimedean or density")->required();
  demo_cmd->add_option("--c1", d.c1)->capture_default_str();
  demo_cmd->add_option("--s", d.s)->capture_default_str();
  demo_cmd->add_option("--c2", d.c2)->capture_default_str();
  demo_cmd->add_option("--t", d.t)->capture_default_str();
  demo_cmd->add_option("--steps", d.steps, "Grid steps per sphere edge for the sweep")->capture_default_str();
  demo_cmd->add_option("--m-max", d.m_max)->capture_default_str()->check(CLI::Range(2, 1'000'000));
  demo_cmd->add_option("--model", d.model)->capture_default_str();
  demo_cmd->add_option("--trials", d.trials)->capture_default_str();
  demo_cmd->add_option("--seed", d.seed)->capture_default_str();
  demo_cmd->add_option("--n-max", d.n_max)->capture_default_str();
  demo_cmd->add_option("--f", d.f, "PL function for the density demo")->capture_default_str();
  demo_cmd->add_option("--eps", d.eps)->capture_default_str();
  demo_cmd->add_flag("--verbose", d.verbose, "Print every step");

  std::string probe;
  ProbeFlags p;
  auto* probe_cmd = app.add_subcommand("probe", "Property probes on concrete tuples");
  probe_cmd->add_option("PROBE", probe, "fuc, contractivity or fidelity")->required();
  add_tuple(probe_cmd, p.tuple);
  probe_cmd->add_option("--trials", p.trials)->capture_default_str();
  probe_cmd->add_option("--seed", p.seed)->capture_default_str();
  probe_cmd->add_option("--term", p.term, "Single term for the contractivity probe");
  probe_cmd->add_option("--depth", p.depth, "Depth of random terms")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*normalize_cmd) return run_normalize(out, term, n, no_prune);
    if (*eval_cmd) return run_eval(out, term, n, point);
    if (*approx_cmd) return run_approx(out, g_text, n, eps, audit, seed, point_cap);
    if (*calc_cmd) return run_calculus(out, ct, g_text, eps, direct);
    if (*verify_cmd) return run_verify(out, ct, f_texts, g_text, eps);
    if (*axioms_cmd) return run_axioms(out, axiom_model, trials, seed, corrupt, length);
    if (*demo_cmd) return run_demo(out, demo, d);
    if (*probe_cmd) return run_probe(out, probe, p);
  } catch (const UsageError& e) {
    std::cerr << "phcalc: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "phcalc: resource limit: " << e.what() << '\n';
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "phcalc: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
