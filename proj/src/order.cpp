#include "phcalc/order.hpp"

#include <stdexcept>

#include "phcalc/calculus.hpp"
#include "phcalc/errors.hpp"
#include "phcalc/ph_function.hpp"

namespace phcalc {

namespace {

SigmaOracle base_oracle(Model m, std::string provenance) {
  SigmaOracle o;
  o.provenance = model_name(m) + ":" + std::move(provenance);
  o.add = [](const LatticeElement& x, const LatticeElement& y) { return lat_add(x, y); };
  o.scale = [](const LatticeElement& x, const Rational& s) { return lat_scale(x, s); };
  o.equal = [](const LatticeElement& x, const LatticeElement& y) { return lat_equal(x, y); };
  return o;
}

LatticeElement apply_pair(const Term& t, const LatticeElement& x, const LatticeElement& y) {
  return apply_term(Tuple({x, y}), t);
}

}  // namespace

SigmaOracle calculus_oracle(Model m) {
  SigmaOracle o = base_oracle(m, "calculus");
  const Term join = Term::join(Term::var(2, 0), Term::var(2, 1));
  o.sigma = [join](const LatticeElement& x, const LatticeElement& y) {
    return apply_pair(join, x, y);
  };
  return o;
}

std::string corruption_name(Corruption c) {
  switch (c) {
    case Corruption::sum: return "sum";
    case Corruption::left_projection: return "left-projection";
    case Corruption::join_with_zero: return "join-with-zero";
  }
  return "?";
}

SigmaOracle corrupted_oracle(Model m, Corruption c) {
  SigmaOracle o = base_oracle(m, "corrupted-" + corruption_name(c));
  switch (c) {
    case Corruption::sum:
      o.sigma = [](const LatticeElement& x, const LatticeElement& y) { return lat_add(x, y); };
      break;
    case Corruption::left_projection:
      o.sigma = [](const LatticeElement& x, const LatticeElement&) { return x; };
      break;
    case Corruption::join_with_zero: {
      const Term t = parse_term("p1 v p2 v 0", 2);
      o.sigma = [t](const LatticeElement& x, const LatticeElement& y) {
        return apply_pair(t, x, y);
      };
      break;
    }
  }
  return o;
}

bool derive_leq(const SigmaOracle& o, const LatticeElement& x, const LatticeElement& y) {
  return o.equal(o.sigma(x, y), y);
}

LatticeElement derive_sup(const SigmaOracle& o, const LatticeElement& x, const LatticeElement& y) {
  return o.sigma(x, y);
}

ElementSampler model_sampler(Model m, std::size_t finite_length) {
  return [m, finite_length](Rng& rng) { return random_element(rng, m, finite_length); };
}

bool AxiomReport::all_pass() const {
  for (const auto& r : results)
    if (r.failures != 0) return false;
  return true;
}

const AxiomResult& AxiomReport::result(const std::string& axiom) const {
  for (const auto& r : results)
    if (r.axiom == axiom) return r;
  throw InvalidArgument("no axiom named '" + axiom + "'");
}

namespace {

class AxiomTally {
 public:
  explicit AxiomTally(std::string name) { r_.axiom = std::move(name); }

  void record(bool ok, std::vector<LatticeElement> witness, const std::string& detail = {}) {
    ++r_.checks;
    if (ok) return;
    if (r_.failures++ == 0) {
      r_.witness = std::move(witness);
      r_.detail = detail;
    }
  }
  AxiomResult take() { return std::move(r_); }

 private:
  AxiomResult r_;
};

}  // namespace

AxiomReport axiom_suite(const SigmaOracle& o, const ElementSampler& sample, std::size_t trials,
                        std::uint64_t seed) {
  if (trials == 0) throw InvalidArgument("axiom_suite needs at least one trial");
  Rng rng(seed);
  AxiomTally refl("reflexivity"), symm("symmetry"), assoc("associativity"),
      homog("positive homogeneity"), transl("translation invariance"), upper("upper bound"),
      least("least upper bound");
  const auto abs_sigma = [&](const LatticeElement& w) { return o.sigma(w, o.scale(w, -1)); };

  for (std::size_t k = 0; k < trials; ++k) {
    LatticeElement x = sample(rng), y = sample(rng), z = sample(rng), w = sample(rng);
    Rational lambda = abs(random_rational(rng));
    if (k % 10 == 0) lambda = 0;

    refl.record(o.equal(o.sigma(x, x), x), {x}, "sigma(x,x) != x");

    LatticeElement sxy = o.sigma(x, y);
    symm.record(o.equal(sxy, o.sigma(y, x)), {x, y}, "sigma(x,y) != sigma(y,x)");

    assoc.record(o.equal(o.sigma(x, o.sigma(y, z)), o.sigma(sxy, z)), {x, y, z},
                 "sigma(x,sigma(y,z)) != sigma(sigma(x,y),z)");

    homog.record(o.equal(o.sigma(o.scale(x, lambda), o.scale(y, lambda)), o.scale(sxy, lambda)),
                 {x, y}, "sigma(l x, l y) != l sigma(x,y) for l = " + lambda.get_str());

    transl.record(o.equal(o.sigma(o.add(x, z), o.add(y, z)), o.add(sxy, z)), {x, y, z},
                  "sigma(x+z,y+z) != sigma(x,y)+z");

    upper.record(derive_leq(o, x, sxy) && derive_leq(o, y, sxy), {x, y},
                 "x or y is not below sigma(x,y)");

    // Upper bounds of {x, y} drawn from several constructions; the property
    // is checked whenever the derived order confirms the candidate is one.
    const LatticeElement candidates[] = {
        w,
        o.add(x, abs_sigma(o.add(y, o.scale(x, -1)))),
        o.add(y, abs_sigma(o.add(x, o.scale(y, -1)))),
        o.add(sxy, abs_sigma(w)),
    };
    for (const auto& u : candidates) {
      if (!(derive_leq(o, x, u) && derive_leq(o, y, u))) continue;
      least.record(derive_leq(o, sxy, u), {x, y, u}, "sigma(x,y) is not below the upper bound u");
    }
  }

  AxiomReport rep;
  rep.provenance = o.provenance;
  rep.trials = trials;
  rep.seed = seed;
  for (auto* t : {&refl, &symm, &assoc, &homog, &transl, &upper, &least})
    rep.results.push_back(t->take());
  return rep;
}

FidelityReport reconstruction_fidelity(Model m, std::size_t trials, std::uint64_t seed) {
  const SigmaOracle o = calculus_oracle(m);
  const ElementSampler sample = model_sampler(m);
  Rng rng(seed);
  FidelityReport rep;
  rep.model = m;
  rep.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    LatticeElement x = sample(rng);
    LatticeElement y = sample(rng);
    if (k % 2 == 1) y = lat_add(x, lat_abs(y));
    const bool agree = derive_leq(o, x, y) == lat_leq(x, y);
    if (agree) {
      ++rep.agreements;
    } else if (rep.witness.empty()) {
      rep.witness = {x, y};
    }
  }
  return rep;
}

std::optional<std::size_t> archimedean_escape(const LatticeElement& x, const LatticeElement& y,
                                              std::size_t n_max) {
  if (!lat_leq(zero_like(x), x)) throw InvalidArgument("archimedean_escape needs x >= 0");
  const auto fails = [&](std::size_t n) { return !lat_leq(lat_scale(x, Rational(long(n))), y); };
  if (n_max == 0 || !fails(n_max)) return std::nullopt;
  std::size_t lo = 0, hi = n_max;  // fails(hi), and lo == 0 or !fails(lo)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (fails(mid) ? hi : lo) = mid;
  }
  return hi;
}

ArchimedeanSearch archimedean_search(Model m, std::size_t trials, std::uint64_t seed,
                                     std::size_t n_max) {
  const ElementSampler sample = model_sampler(m);
  Rng rng(seed);
  ArchimedeanSearch rep;
  rep.model = m;
  rep.trials = trials;
  rep.n_max = n_max;
  for (std::size_t k = 0; k < trials; ++k) {
    const LatticeElement x = lat_abs(sample(rng));
    const LatticeElement y = lat_abs(sample(rng));
    if (lat_equal(x, zero_like(x))) continue;
    if (archimedean_escape(x, y, n_max)) continue;
    if (rep.witnesses++ == 0) rep.witness = {x, y};
  }
  return rep;
}

Term kernel_sequence_term(std::size_t m) {
  if (m == 0) throw InvalidArgument("sequence index must be positive");
  const Term p1 = Term::var(2, 0), p2 = Term::var(2, 1);
  return Term::meet(
      Term::positive_part(Term::sub(p1, Term::scale(Rational(1, long(m)), p2))),
      Term::positive_part(p2));
}

KernelWitnessReport kernel_nonclosed_witness(std::size_t m_max) {
  const Term p1 = Term::var(2, 0), p2 = Term::var(2, 1);
  const Term f = Term::meet(Term::positive_part(p1), Term::positive_part(p2));
  const MaxMinNF f_nf = normalize(f);
  const std::vector<GermClass> z{quotient_Q(PLFunc::identity()), quotient_Q(PLFunc::constant(1))};
  const GermClass zero = quotient_Q(PLFunc::constant(0));

  KernelWitnessReport rep{f, apply_quotient_calculus(z, PHFunction::lattice(f_nf)),
                          apply_quotient_calculus(z, PHFunction::lattice(Term::sphere_unit(2)))};
  rep.image_nonzero = !lat_equal(rep.image_f, zero);
  rep.pass = rep.image_nonzero;

  const SphereNet net = make_sphere_net(2, Rational(1, 4));
  for (std::size_t m = 2; m <= m_max; ++m) {
    const MaxMinNF fm = normalize(kernel_sequence_term(m));
    const MaxMinNF diff = nf_sub(f_nf, fm);
    KernelStep s;
    s.m = m;
    s.in_kernel = lat_equal(apply_quotient_calculus(z, PHFunction::lattice(fm)), zero);
    s.distance = exact_sup_norm(diff);
    s.distance_upper = sup_norm_bound(diff, net).hi;
    s.distance_ok = s.distance <= Rational(1, long(m));
    const LatticeElement scaled = lat_scale(rep.image_f, Rational(long(m)));
    s.dominated = lat_leq(scaled, rep.image_unit);
    s.identity_ok = lat_equal(
        scaled, apply_quotient_calculus(z, PHFunction::lattice(nf_scale(Rational(long(m)), diff))));
    rep.pass = rep.pass && s.in_kernel && s.distance_ok && s.dominated && s.identity_ok;
    rep.steps.push_back(std::move(s));
  }
  return rep;
}

}  // namespace phcalc
