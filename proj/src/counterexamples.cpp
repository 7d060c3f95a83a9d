#include "phcalc/counterexamples.hpp"

#include <algorithm>

#include "phcalc/calculus.hpp"
#include "phcalc/errors.hpp"
#include "phcalc/sampling.hpp"

namespace phcalc {

namespace {

const LexVec kX1{1, 0};
const LexVec kX2{0, 1};

Tuple lex_x() { return Tuple({kX1, kX2}); }

const LexVec& as_lex(const LatticeElement& e) { return std::get<LexVec>(e); }

std::string point_text(const RationalPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + p[i].get_str();
  return s + ")";
}

bool on_sphere(const RationalPoint& p) { return p.size() == 2 && linf_norm(p) == 1; }

}  // namespace

ForcedPhi1 forced_phi1() {
  const Tuple x = lex_x();
  ForcedPhi1 out;
  const LexVec unit = as_lex(apply_term(x, Term::sphere_unit(2)));
  out.trace.push_back({"Phi_x(|p1| v |p2|) = |x1| v |x2|", to_string(LatticeElement(unit))});
  out.c1 = unit.first;
  out.trace.push_back({"c1 = phi_1(1) = pi_1(|x1| v |x2|)", out.c1.get_str()});
  for (std::size_t i = 0; i < 2; ++i) {
    const LexVec xi = as_lex(apply_term(x, Term::var(2, i)));
    // c1 * s_i = phi_1(p_i) = pi_1(x_i).
    out.s.push_back(xi.first / out.c1);
    out.trace.push_back({"s" + std::to_string(i + 1) + " = pi_1(x" + std::to_string(i + 1) +
                             ") / c1",
                         out.s.back().get_str()});
  }
  return out;
}

Rational obstruction_lambda(const Rational& t1, const Rational& t2) {
  if (sgn(t2) <= 0) throw InvalidArgument("lambda needs t2 > 0");
  return floor(t1 / t2) + 1;
}

ObstructionOutcome lex_obstruction(const ObstructionCandidate& cand) {
  const auto reject = [&](std::string eq, std::string detail) -> ObstructionOutcome {
    return Rejection{cand, std::move(eq), std::move(detail)};
  };
  if (sgn(cand.c1) < 0 || sgn(cand.c2) < 0)
    return reject("c1, c2 >= 0", "candidate scale factors must be nonnegative");
  if (!on_sphere(cand.s) || !on_sphere(cand.t))
    return reject("s, t on the sphere", "s = " + point_text(cand.s) + ", t = " + point_text(cand.t));
  if (cand.t == RationalPoint{1, 0})
    return reject("t != (1,0)", "t must avoid the point where phi_1 is evaluated");

  const ForcedPhi1 forced = forced_phi1();
  if (cand.c1 != forced.c1)
    return reject("c1 = 1", "candidate has c1 = " + cand.c1.get_str());
  if (cand.s != forced.s)
    return reject("s = (1,0)", "candidate has s = " + point_text(cand.s));

  const Tuple x = lex_x();
  // p2 vanishes at x1, so phi_2(p2) = c2 t2 while also phi_2(p2) = pi_2(x2).
  const Rational phi2_p2 = as_lex(apply_term(x, Term::var(2, 1))).second;
  if (cand.c2 * cand.t[1] != phi2_p2)
    return reject("c2 t2 = 1", "candidate has c2 t2 = " + Rational(cand.c2 * cand.t[1]).get_str());

  ContradictionCertificate cert{cand};
  cert.trace = forced.trace;
  cert.trace.push_back({"c2 t2 = phi_2(p2) = pi_2(x2)", phi2_p2.get_str()});
  cert.lambda = obstruction_lambda(cand.t[0], cand.t[1]);
  cert.trace.push_back({"lambda = floor(t1/t2) + 1", cert.lambda.get_str()});

  const Term p1 = Term::var(2, 0), p2 = Term::var(2, 1);
  cert.f = Term::sub(Term::join(p1, Term::scale(cert.lambda, p2)), p1);
  cert.trace.push_back({"f", to_string(cert.f)});
  const RationalPoint x1_point{1, 0};
  cert.trace.push_back({"f(x1) (f lies in ker phi_1)", eval_term(cert.f, x1_point).get_str()});

  const LexVec image = as_lex(apply_term(x, cert.f));
  cert.trace.push_back({"Phi_x(f) = x1 v (lambda x2) - x1", to_string(LatticeElement(image))});
  cert.route_a = image.second;
  cert.trace.push_back({"route A: pi_2(Phi_x(f))", cert.route_a.get_str()});
  cert.route_b = cand.c2 * eval_term(cert.f, cand.t);
  cert.trace.push_back({"route B: c2 f(t)", cert.route_b.get_str()});
  return cert;
}

SweepSummary lex_obstruction_sweep(const std::vector<ObstructionCandidate>& grid) {
  SweepSummary sum;
  for (const auto& cand : grid) {
    ++sum.candidates;
    ObstructionOutcome out = lex_obstruction(cand);
    if (const auto* r = std::get_if<Rejection>(&out)) {
      ++sum.rejections;
      ++sum.rejected_by[r->equation];
      continue;
    }
    const auto& cert = std::get<ContradictionCertificate>(out);
    const bool valid = sgn(cert.route_a) == 0 && sgn(cert.route_b) > 0;
    if (valid) {
      ++sum.certificates;
    } else {
      ++sum.survivors;
      sum.routes_valid = false;
    }
  }
  return sum;
}

std::vector<ObstructionCandidate> obstruction_grid(std::size_t steps_per_edge) {
  if (steps_per_edge == 0) return {};
  const SphereNet net = make_sphere_net(2, ratio(2, long(steps_per_edge)));
  const std::vector<std::pair<Rational, RationalPoint>> phi1_choices{
      {1, {1, 0}}, {2, {1, 0}}, {1, {0, 1}}, {Rational(1, 2), {-1, 1}}};
  std::vector<ObstructionCandidate> grid;
  for (const auto& t : net.points) {
    std::vector<Rational> c2s{1, 2};
    if (sgn(t[1]) > 0) c2s.insert(c2s.begin(), 1 / t[1]);
    else c2s.push_back(Rational(1, 3));
    for (const auto& [c1, s] : phi1_choices)
      for (const auto& c2 : c2s) grid.push_back({c1, s, c2, t});
  }
  return grid;
}

UniformCompletenessReport not_uniformly_complete_witness(std::size_t m_max,
                                                          std::size_t random_members,
                                                          std::uint64_t seed) {
  UniformCompletenessReport rep;
  rep.h_in_X = membership_X(rep.h).member;
  const auto g_of = [](std::size_t m) {
    const Rational inv(1, long(m));
    if (m == 1) return PLFunc::constant(1);
    return PLFunc({{0, inv}, {inv, inv}, {1, 1}});
  };
  const auto distance_check = [&rep](const PLFunc& x) {
    const MembershipX mx = membership_X(x);
    if (!mx.member) return;
    ++rep.distance_checks;
    if (pl_sub(rep.h, x).sup_norm() < mx.delta / 2) ++rep.distance_failures;
  };

  bool ok = !rep.h_in_X;
  for (std::size_t m = 1; m <= m_max; ++m) {
    UniformCompletenessStep s{m, g_of(m)};
    const MembershipX mx = membership_X(s.g);
    s.in_X = mx.member;
    s.delta = mx.delta;
    s.distance = pl_sub(rep.h, s.g).sup_norm();
    s.rate_ok = s.distance <= Rational(1, long(m));
    ok = ok && s.in_X && s.rate_ok;
    distance_check(s.g);
    for (std::size_t k : {m + 1, 2 * m, m_max}) {
      if (k == m || k > m_max) continue;
      ++rep.cauchy_checks;
      if (pl_sub(s.g, g_of(k)).sup_norm() > Rational(1, long(std::min(m, k))))
        ++rep.cauchy_failures;
    }
    rep.steps.push_back(std::move(s));
  }

  Rng rng(seed);
  for (std::size_t i = 0; i < random_members; ++i) distance_check(random_flat_pl(rng));

  rep.pass = ok && rep.cauchy_failures == 0 && rep.distance_failures == 0;
  return rep;
}

FiniteUCReport finitely_uc_probe(const std::vector<PLFunc>& fs, std::size_t terms,
                                 std::uint64_t seed, std::size_t max_depth) {
  if (fs.empty()) throw InvalidArgument("probe needs at least one function");
  FiniteUCReport rep;
  rep.c = 0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const MembershipX mx = membership_X(fs[j]);
    if (!mx.member)
      throw InvalidArgument("input " + std::to_string(j + 1) + " is not constant near 0");
    rep.delta = j == 0 ? mx.delta : min(rep.delta, mx.delta);
    rep.c = max(rep.c, fs[j].sup_norm());
  }
  if (sgn(rep.c) == 0) rep.c = 1;
  rep.unit = PLFunc::constant(rep.c);

  const OrderUnitContext ctx = make_order_unit(rep.unit);
  rep.in_ideal = std::all_of(fs.begin(), fs.end(), [&](const PLFunc& f) {
    return order_unit_norm(ctx, f) <= 1;
  });

  std::vector<LatticeElement> xs(fs.begin(), fs.end());
  const Tuple x(std::move(xs));
  Rng rng(seed);
  for (std::size_t i = 0; i < terms; ++i) {
    const Term t = random_term(rng, fs.size(), max_depth);
    ++rep.terms;
    const PLFunc image = std::get<PLFunc>(apply_term(x, t));
    const bool flat = image.breakpoints().size() == 2 && image.breakpoints()[0].y ==
                                                             image.breakpoints()[1].y;
    if (flat || image.flat_prefix() >= rep.delta) {
      ++rep.stable;
    } else if (rep.witness.empty()) {
      rep.witness = to_string(t);
    }
  }
  return rep;
}

DensityResult density_construction(const PLFunc& f, const Rational& eps) {
  if (sgn(eps) <= 0) throw InvalidArgument("eps must be positive");
  const Rational c = f.value_at_zero();
  const PLFunc dev = pl_abs(pl_sub(f, PLFunc::constant(c)));

  // Largest v with |f - f(0)| <= eps on [0, v].
  Rational v = 1;
  const auto& pts = dev.breakpoints();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].y <= eps) continue;
    const auto& a = pts[i - 1];
    v = a.x + (eps - a.y) * (pts[i].x - a.x) / (pts[i].y - a.y);
    break;
  }
  const Rational delta = v / 2;

  // b vanishes on [0, delta], ramps to eps on [delta, 2 delta], and is never
  // below |f - f(0)| - eps. Clamping f into [c - b, c + b] then moves f by at
  // most eps and freezes it at c near 0.
  std::vector<Breakpoint> ramp{{0, 0}, {delta, 0}, {2 * delta, eps}};
  if (2 * delta < 1) ramp.push_back({1, eps});
  const PLFunc b = pl_join(PLFunc(std::move(ramp)), pl_sub(dev, PLFunc::constant(eps)));
  const PLFunc upper = pl_add(PLFunc::constant(c), b);
  const PLFunc lower = pl_sub(PLFunc::constant(c), b);

  DensityResult out{pl_join(pl_meet(f, upper), lower), delta};
  out.distance = pl_sub(f, out.g).sup_norm();
  const MembershipX mx = membership_X(out.g);
  out.in_X = mx.member;
  out.flat_at_f0 = mx.member && out.g.value_at_zero() == c && mx.delta >= delta;
  out.within_eps = out.distance <= eps;
  return out;
}

}  // namespace phcalc
