#include "phcalc/calculus.hpp"

#include <algorithm>

#include "phcalc/errors.hpp"

namespace phcalc {

Tuple::Tuple(std::vector<LatticeElement> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("tuple must be non-empty");
  // lat_leq performs the model and shape checks.
  for (std::size_t i = 1; i < elements_.size(); ++i) (void)lat_leq(elements_[0], elements_[i]);
}

Tuple parse_tuple(Model m, std::string_view text) {
  std::vector<LatticeElement> xs;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(';', start);
    xs.push_back(parse_element(m, text.substr(start, end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return Tuple(std::move(xs));
}

LatticeElement tuple_unit(const Tuple& x) {
  LatticeElement e = lat_abs(x[0]);
  for (std::size_t i = 1; i < x.size(); ++i) e = lat_join(e, lat_abs(x[i]));
  return e;
}

LatticeElement apply_term(const Tuple& x, const Term& t) {
  if (t.arity() != x.size())
    throw DimensionMismatch("term has arity " + std::to_string(t.arity()) + " but the tuple has " +
                            std::to_string(x.size()) + " elements");
  switch (t.kind()) {
    case TermKind::var: return x[t.index()];
    case TermKind::scale: return lat_scale(apply_term(x, t.lhs()), t.factor());
    case TermKind::sum: return lat_add(apply_term(x, t.lhs()), apply_term(x, t.rhs()));
    case TermKind::join: return lat_join(apply_term(x, t.lhs()), apply_term(x, t.rhs()));
    case TermKind::meet: return lat_meet(apply_term(x, t.lhs()), apply_term(x, t.rhs()));
  }
  throw InvalidArgument("unknown term kind");
}

namespace {

LatticeElement apply_form(const Tuple& x, const LinearForm& f) {
  LatticeElement acc = zero_like(x[0]);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    if (sgn(f.coeffs[i]) != 0) acc = lat_add(acc, lat_scale(x[i], f.coeffs[i]));
  return acc;
}

}  // namespace

LatticeElement apply_nf(const Tuple& x, const MaxMinNF& f) {
  if (f.arity() != x.size())
    throw DimensionMismatch("normal form has arity " + std::to_string(f.arity()) +
                            " but the tuple has " + std::to_string(x.size()) + " elements");
  std::optional<LatticeElement> out;
  for (const auto& clause : f.clauses()) {
    std::optional<LatticeElement> m;
    for (const auto& form : clause) {
      LatticeElement v = apply_form(x, form);
      m = m ? lat_meet(*m, v) : v;
    }
    out = out ? lat_join(*out, *m) : *m;
  }
  return *out;
}

LatticeElement apply_direct(const Tuple& x, const PHFunction& g) {
  if (g.arity() != x.size())
    throw DimensionMismatch("function has arity " + std::to_string(g.arity()) +
                            " but the tuple has " + std::to_string(x.size()) + " elements");
  if (const auto* c = std::get_if<PHFunction::Coordinate>(&g.kind())) return x[c->index];
  switch (x.model()) {
    case Model::finite: {
      const std::size_t len = std::get<FiniteVec>(x[0]).values.size();
      const bool exact = g.is_exact();
      FiniteVec out;
      out.values.reserve(len);
      RationalPoint p(x.size());
      std::vector<double> pd(x.size());
      for (std::size_t k = 0; k < len; ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          p[i] = std::get<FiniteVec>(x[i]).values[k];
          pd[i] = to_double(p[i]);
        }
        out.values.push_back(exact ? g.eval_exact(p) : from_double(g.eval(pd)));
      }
      return out;
    }
    case Model::pl:
    case Model::eventually_const:
      if (!g.is_exact())
        throw UnsupportedKind("pointwise " + g.describe() +
                              " does not stay piecewise linear; use the approximate calculus");
      return apply_nf(x, g.lattice_form());
    case Model::germ:
    case Model::lex:
      throw UnsupportedKind("the " + model_name(x.model()) + " model has no pointwise calculus");
  }
  throw ModelMismatch("unknown model");
}

CalculusResult apply_certificate(const Tuple& x, const ApproxCertificate& cert) {
  if (!is_archimedean(x.model()))
    throw NonArchimedean("the " + model_name(x.model()) +
                         " model is not Archimedean; only exact lattice terms apply");
  CalculusResult r{apply_nf(x, cert.approximant)};
  if (cert.exact) {
    r.mode = CalculusMode::exact;
    r.error_bound = 0;
  } else {
    r.mode = CalculusMode::approximate;
    r.error_bound = from_double(cert.epsilon);
  }
  r.certificate = std::make_shared<const ApproxCertificate>(cert);
  return r;
}

CalculusResult apply_calculus(const Tuple& x, const PHFunction& g, const Rational& eps,
                              const ApproxOptions& opt) {
  if (!is_archimedean(x.model()))
    throw NonArchimedean("the " + model_name(x.model()) +
                         " model is not Archimedean; only exact lattice terms apply");
  if (sgn(eps) <= 0) throw InvalidArgument("eps must be positive");
  if (g.arity() != x.size())
    throw DimensionMismatch("function has arity " + std::to_string(g.arity()) +
                            " but the tuple has " + std::to_string(x.size()) + " elements");
  return apply_certificate(x, krivine_approximate(g, to_double(eps), opt));
}

GermClass apply_quotient_calculus(const std::vector<GermClass>& z, const PHFunction& g) {
  if (!g.is_exact())
    throw UnsupportedKind("the germ calculus is limited to lattice terms, got " + g.describe());
  std::vector<LatticeElement> reps;
  reps.reserve(z.size());
  for (const auto& c : z) reps.emplace_back(quotient_R(c));
  return quotient_Q(std::get<PLFunc>(apply_direct(Tuple(std::move(reps)), g)));
}

CompositionReport verify_composition(const Tuple& x, const std::vector<PHFunction>& fs,
                                     const PHFunction& g, const Rational& eps,
                                     const ApproxOptions& opt) {
  if (fs.size() != g.arity())
    throw DimensionMismatch("outer function has arity " + std::to_string(g.arity()) + " but " +
                            std::to_string(fs.size()) + " inner functions were given");
  for (const auto& f : fs)
    if (f.arity() != x.size())
      throw DimensionMismatch("inner function arity differs from the tuple size");

  const bool exact =
      g.is_exact() && std::all_of(fs.begin(), fs.end(), [](const auto& f) { return f.is_exact(); });
  const PHFunction composed = compose_ph(g, fs, opt.normalize);
  const bool normed = is_archimedean(x.model());

  if (exact) {
    std::vector<LatticeElement> ys;
    for (const auto& f : fs) ys.push_back(apply_nf(x, f.lattice_form(opt.normalize)));
    CompositionReport rep{apply_nf(Tuple(std::move(ys)), g.lattice_form(opt.normalize)),
                          apply_nf(x, composed.lattice_form(opt.normalize))};
    rep.exact = true;
    rep.equal = lat_equal(rep.lhs, rep.rhs);
    if (normed)
      rep.discrepancy = order_unit_norm(make_order_unit(tuple_unit(x)), lat_sub(rep.lhs, rep.rhs));
    rep.pass = rep.equal;
    return rep;
  }

  if (!normed)
    throw NonArchimedean("approximate composition needs an Archimedean model, got " +
                         model_name(x.model()));
  const OrderUnitContext ctx = make_order_unit(tuple_unit(x));
  std::vector<LatticeElement> ys;
  double inner_eps = 0;
  for (const auto& f : fs) {
    CalculusResult r = apply_calculus(x, f, eps, opt);
    inner_eps = std::max(inner_eps, to_double(r.error_bound));
    ys.push_back(std::move(r.value));
  }
  Tuple y(std::move(ys));
  CalculusResult outer = apply_calculus(y, g, eps, opt);
  CalculusResult whole = apply_calculus(x, composed, eps, opt);
  // Errors of the outer step are measured against e_y; rescale into e.
  const Rational ey_norm = order_unit_norm(ctx, tuple_unit(y));

  CompositionReport rep{outer.value, whole.value};
  rep.exact = false;
  rep.equal = lat_equal(rep.lhs, rep.rhs);
  rep.discrepancy = order_unit_norm(ctx, lat_sub(rep.lhs, rep.rhs));
  rep.budget = g.lipschitz() * inner_eps + to_double(outer.error_bound) * to_double(ey_norm) +
               to_double(whole.error_bound) + kFloatSlack;
  rep.pass = to_double(*rep.discrepancy) <= rep.budget;
  return rep;
}

ContractivityReport contractivity_check(const Tuple& x, const Term& t) {
  if (!is_archimedean(x.model()))
    throw NonArchimedean("contractivity needs an order-unit norm; " + model_name(x.model()) +
                         " has none");
  ContractivityReport rep{apply_term(x, Term::sphere_unit(x.size()))};
  rep.unit_identity = lat_equal(rep.unit, tuple_unit(x));
  rep.norm = order_unit_norm(make_order_unit(rep.unit), apply_term(x, t));
  const SphereNet net = make_sphere_net(x.size(), Rational(1, 2));
  rep.bound = sup_norm_bound(normalize(t), net).hi;
  rep.pass = rep.unit_identity && rep.norm <= rep.bound;
  return rep;
}

}  // namespace phcalc
