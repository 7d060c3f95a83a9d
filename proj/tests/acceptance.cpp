// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "phcalc/calculus.hpp"
#include "phcalc/counterexamples.hpp"
#include "phcalc/order.hpp"
#include "phcalc/sampling.hpp"

using namespace phcalc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> random_sphere_point(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> p(n);
  for (auto& c : p) c = u(rng);
  p[rng() % n] = (rng() & 1) ? 1.0 : -1.0;
  return p;
}

Outcome normalization_soundness() {
  const auto t0 = Clock::now();
  Rng rng(1);
  std::size_t checks = 0, failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng() % 4;
    const Term t = random_term(rng, n, 6);
    const MaxMinNF f = normalize(t);
    for (int j = 0; j < 20; ++j) {
      const RationalPoint p = random_point(rng, n);
      ++checks;
      if (eval_nf(f, p) != eval_term(t, p)) ++failures;
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 30,
          fmt("%zu exact comparisons, %zu mismatches, %.2f s (limit 30 s)", checks, failures, secs)};
}

Outcome sphere_identity() {
  std::size_t points = 0, failures = 0;
  for (std::size_t n : {1u, 2u, 3u}) {
    const MaxMinNF e = normalize(Term::sphere_unit(n));
    for (const auto& p : make_sphere_net(n, Rational(1, 10)).points) {
      ++points;
      if (e.eval(p) != 1) ++failures;
    }
  }
  return {failures == 0 && points > 0, fmt("%zu net points, %zu not exactly 1", points, failures)};
}

Outcome krivine_certificate() {
  bool ok = true;
  std::string detail;
  const PHFunction g = PHFunction::euclidean(2);
  for (double eps : {0.05, 0.01}) {
    const auto t0 = Clock::now();
    const ApproxCertificate c = krivine_approximate(g, eps);
    const double secs = seconds_since(t0);
    Rng rng(eps == 0.05 ? 505 : 101);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const auto p = random_sphere_point(rng, 2);
      worst = std::max(worst, std::fabs(c.approximant.eval(p) - g.eval(p)));
    }
    const bool run_ok = c.epsilon <= eps && worst <= eps + 1e-9 && (eps > 0.02 || secs < 60);
    ok = ok && run_ok;
    detail += fmt("%seps=%g: certified %.5f, audit max %.5f, %zu clauses, %.2f s", detail.empty() ? "" : "; ",
                  eps, c.epsilon, worst, c.clause_count, secs);
  }
  return {ok, detail};
}

Outcome calculus_uniqueness() {
  // Certificates depend only on g, so each p-norm is approximated once and
  // applied to every tuple drawn for it.
  Rng rng(4);
  std::map<std::pair<double, double>, ApproxCertificate> certs;
  const double ps[] = {1, 2, 3, 4};
  const double w2s[] = {1, 2};
  Rational worst = 0;
  std::size_t failures = 0;
  for (int k = 0; k < 100; ++k) {
    const double p = ps[rng() % 4], w2 = w2s[rng() % 2];
    const PHFunction g = PHFunction::pnorm(p, {1.0, w2});
    auto it = certs.find({p, w2});
    if (it == certs.end()) it = certs.emplace(std::make_pair(p, w2), krivine_approximate(g, 0.01)).first;
    const Tuple x({random_element(rng, Model::finite, 8), random_element(rng, Model::finite, 8)});
    const CalculusResult r = apply_certificate(x, it->second);
    const LatticeElement direct = apply_direct(x, g);
    const Rational d = order_unit_norm(make_order_unit(tuple_unit(x)), lat_sub(r.value, direct));
    worst = max(worst, d);
    if (to_double(d) > 0.01 + 1e-9 || r.error_bound > Rational(1, 100)) ++failures;
  }
  return {failures == 0,
          fmt("100 tuples of length 8, %zu p-norm certificates, max e-norm gap %.6f, %zu over 0.01", certs.size(),
              to_double(worst), failures)};
}

Outcome composition_law() {
  Rng rng(5);
  std::size_t exact_fail = 0, exact_total = 0;
  for (Model m : {Model::finite, Model::pl, Model::lex, Model::germ}) {
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = 2 + rng() % 2, arity_g = 1 + rng() % 3;
      std::vector<LatticeElement> xs;
      for (std::size_t i = 0; i < n; ++i) xs.push_back(random_element(rng, m));
      std::vector<PHFunction> fs;
      for (std::size_t i = 0; i < arity_g; ++i) fs.push_back(PHFunction::lattice(random_term(rng, n, 3)));
      const PHFunction g = PHFunction::lattice(random_term(rng, arity_g, 3));
      const CompositionReport r = verify_composition(Tuple(xs), fs, g, Rational(1, 100));
      ++exact_total;
      const bool zero = r.exact && r.equal && (!r.discrepancy || *r.discrepancy == 0);
      if (!zero || !r.pass) ++exact_fail;
    }
  }
  std::size_t approx_fail = 0, approx_total = 0;
  double worst_ratio = 0;
  const std::vector<PHFunction> coords{PHFunction::coordinate(2, 0), PHFunction::coordinate(2, 1)};
  const std::vector<PHFunction> mixed{PHFunction::lattice(parse_term("p1 v p2", 2)),
                                      PHFunction::lattice(parse_term("p1 - p2", 2))};
  for (int k = 0; k < 10; ++k) {
    const Model m = k % 2 ? Model::pl : Model::finite;
    const Tuple x({random_element(rng, m, 4), random_element(rng, m, 4)});
    const CompositionReport r =
        verify_composition(x, k < 6 ? coords : mixed, PHFunction::euclidean(2), Rational(1, 20));
    ++approx_total;
    if (!r.pass || !r.discrepancy) {
      ++approx_fail;
      continue;
    }
    worst_ratio = std::max(worst_ratio, to_double(*r.discrepancy) / r.budget);
  }
  return {exact_fail == 0 && approx_fail == 0,
          fmt("%zu exact instances over 4 models, %zu nonzero; %zu approximate instances, %zu over budget "
              "(max discrepancy/budget %.3f)",
              exact_total, exact_fail, approx_total, approx_fail, worst_ratio)};
}

Outcome contractivity() {
  Rng rng(6);
  std::size_t violations = 0, total = 0;
  for (Model m : {Model::finite, Model::pl}) {
    for (int k = 0; k < 1000; ++k) {
      const std::size_t n = 1 + rng() % 3;
      std::vector<LatticeElement> xs;
      for (std::size_t i = 0; i < n; ++i) xs.push_back(random_element(rng, m));
      const ContractivityReport r = contractivity_check(Tuple(xs), random_term(rng, n, 4));
      ++total;
      if (!r.pass || r.norm > r.bound || !r.unit_identity) ++violations;
    }
  }
  return {violations == 0, fmt("%zu (x, t) pairs on finite and pl, %zu violations", total, violations)};
}

Outcome order_reconstruction() {
  const std::vector<Model> models{Model::finite, Model::pl, Model::lex, Model::germ};
  std::size_t suites = 0, suite_fail = 0, fidelity_fail = 0, mutants = 0, mutants_caught = 0;
  for (Model m : models) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ++suites;
      if (!axiom_suite(calculus_oracle(m), model_sampler(m), 1000, seed).all_pass()) ++suite_fail;
    }
    if (!reconstruction_fidelity(m, 1000, 1).pass()) ++fidelity_fail;
    for (Corruption c : {Corruption::sum, Corruption::left_projection, Corruption::join_with_zero}) {
      ++mutants;
      const AxiomReport r = axiom_suite(corrupted_oracle(m, c), model_sampler(m), 1000, 1);
      bool witnessed = !r.all_pass();
      for (const auto& a : r.results)
        if (a.failures > 0 && a.witness.empty()) witnessed = false;
      if (witnessed) ++mutants_caught;
    }
  }
  return {suite_fail == 0 && fidelity_fail == 0 && mutants_caught == mutants,
          fmt("%zu axiom suites (1000 trials, seeds 1-5), %zu failed; fidelity failures %zu; %zu/%zu corrupted "
              "oracles caught with witnesses",
              suites, suite_fail, fidelity_fail, mutants_caught, mutants)};
}

Outcome non_archimedean() {
  const LatticeElement x1 = LexVec{1, 0}, x2 = LexVec{0, 1};
  const GermClass h = quotient_Q(PLFunc::identity()), one = quotient_Q(PLFunc::constant(1));
  bool lex_ok = !lat_equal(x2, zero_like(x2)), germ_ok = !lat_equal(h, zero_like(LatticeElement{h}));
  for (long n = 1; n <= 1'000'000; ++n) {
    const Rational q(n);
    lex_ok = lex_ok && lat_leq(lat_scale(x2, q), x1);
    germ_ok = germ_ok && lat_leq(lat_scale(h, q), one);
  }
  const ArchimedeanSearch fin = archimedean_search(Model::finite, 1000, 8);
  const ArchimedeanSearch pl = archimedean_search(Model::pl, 1000, 8);
  return {lex_ok && germ_ok && fin.witnesses == 0 && pl.witnesses == 0,
          fmt("lex n x2 <= x1 for n <= 1e6: %s; germ n Q(h) <= Q(1) for n <= 1e6 with Q(h) != 0: %s; "
              "witnesses in 1000 pairs: finite %zu, pl %zu",
              lex_ok ? "yes" : "no", germ_ok ? "yes" : "no", fin.witnesses, pl.witnesses)};
}

Outcome kernel_witness() {
  const KernelWitnessReport r = kernel_nonclosed_witness(1000);
  std::size_t bad = 0;
  for (const auto& s : r.steps)
    if (!(s.in_kernel && s.distance_ok && s.dominated && s.identity_ok)) ++bad;
  return {r.pass && r.image_nonzero && r.steps.size() == 999 && bad == 0,
          fmt("m = 2..1000: %zu steps, %zu failing a check; Phi(f) nonzero: %s", r.steps.size(), bad,
              r.image_nonzero ? "yes" : "no")};
}

Outcome uniform_completeness() {
  const UniformCompletenessReport u = not_uniformly_complete_witness(1000);
  std::size_t rate_bad = 0;
  for (const auto& s : u.steps)
    if (!(s.in_X && s.distance <= Rational(1, static_cast<long>(s.m)))) ++rate_bad;
  Rng rng(10);
  std::vector<PLFunc> fs;
  for (int i = 0; i < 3; ++i) fs.push_back(random_flat_pl(rng));
  const FiniteUCReport fuc = finitely_uc_probe(fs, 1000, 10);
  std::size_t density_bad = 0;
  for (int k = 0; k < 100; ++k) {
    const PLFunc f = random_pl(rng);
    const DensityResult d = density_construction(f, ratio(1 + static_cast<long>(rng() % 20), 40));
    if (!d.pass()) ++density_bad;
  }
  return {u.pass && rate_bad == 0 && !u.h_in_X && fuc.pass() && fuc.terms == 1000 && density_bad == 0,
          fmt("g_m rates m <= 1000: %zu steps, %zu bad; Y-stable terms %zu/%zu; density failures %zu/100",
              u.steps.size(), rate_bad, fuc.stable, fuc.terms, density_bad)};
}

Outcome lex_obstruction_replay() {
  const auto t0 = Clock::now();
  const ForcedPhi1 f = forced_phi1();
  const bool forced = f.c1 == 1 && f.s == RationalPoint{1, 0};
  const auto grid = obstruction_grid(250);
  const SweepSummary s = lex_obstruction_sweep(grid);
  const double secs = seconds_since(t0);
  return {forced && s.candidates >= 10000 && s.survivors == 0 && s.routes_valid && secs < 60,
          fmt("forced (c1, s) = (%s, (%s,%s)); %zu candidates, %zu certificates, %zu rejections, %zu survivors; "
              "routes valid: %s; %.2f s (limit 60 s)",
              to_string(f.c1).c_str(), to_string(f.s[0]).c_str(), to_string(f.s[1]).c_str(), s.candidates,
              s.certificates, s.rejections, s.survivors, s.routes_valid ? "yes" : "no", secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"normalization soundness", normalization_soundness},
      {"sphere identity", sphere_identity},
      {"approximation certificate", krivine_certificate},
      {"calculus uniqueness", calculus_uniqueness},
      {"composition law", composition_law},
      {"contractivity", contractivity},
      {"order reconstruction", order_reconstruction},
      {"non-Archimedean witnesses", non_archimedean},
      {"kernel not closed", kernel_witness},
      {"eventually constant functions", uniform_completeness},
      {"lexicographic obstruction", lex_obstruction_replay},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
