#include "phcalc/json_io.hpp"

#include "phcalc/errors.hpp"

namespace phcalc {

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("expected a rational, got " + j.dump());
}

Json to_json(const RationalPoint& p) {
  Json a = Json::array();
  for (const auto& q : p) a.push_back(to_json(q));
  return a;
}

Json to_json(const LinearForm& f) { return to_json(f.coeffs); }

Json to_json(const MaxMinNF& f) {
  Json clauses = Json::array();
  for (const auto& c : f.clauses()) {
    Json forms = Json::array();
    for (const auto& form : c) forms.push_back(to_json(form));
    clauses.push_back(std::move(forms));
  }
  return Json{{"n", f.arity()}, {"clauses", std::move(clauses)}};
}

MaxMinNF nf_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Clause> clauses;
    for (const auto& c : j.at("clauses")) {
      Clause clause;
      for (const auto& form : c) {
        LinearForm f;
        for (const auto& q : form) f.coeffs.push_back(rational_from_json(q));
        clause.push_back(std::move(f));
      }
      clauses.push_back(std::move(clause));
    }
    return MaxMinNF(n, std::move(clauses));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed normal form: ") + e.what());
  }
}

Json to_json(const SupNormInterval& s) { return Json{{"lo", to_json(s.lo)}, {"hi", to_json(s.hi)}}; }

namespace {

Json breakpoints_json(const PLFunc& f) {
  Json a = Json::array();
  for (const auto& p : f.breakpoints()) a.push_back(Json::array({to_json(p.x), to_json(p.y)}));
  return a;
}

PLFunc pl_from_json(const Json& a) {
  std::vector<Breakpoint> pts;
  for (const auto& p : a) pts.push_back({rational_from_json(p.at(0)), rational_from_json(p.at(1))});
  return PLFunc(std::move(pts));
}

Json elements_json(const std::vector<LatticeElement>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

Json trace_json(const std::vector<TraceStep>& trace) {
  Json a = Json::array();
  for (const auto& s : trace) a.push_back(Json{{"step", s.label}, {"value", s.value}});
  return a;
}

Json candidate_json(const ObstructionCandidate& c) {
  return Json{{"c1", to_json(c.c1)}, {"s", to_json(c.s)}, {"c2", to_json(c.c2)}, {"t", to_json(c.t)}};
}

}  // namespace

Json to_json(const LatticeElement& x) {
  Json j{{"model", model_name(model_of(x))}};
  switch (model_of(x)) {
    case Model::finite: j["values"] = to_json(std::get<FiniteVec>(x).values); break;
    case Model::pl: j["breakpoints"] = breakpoints_json(std::get<PLFunc>(x)); break;
    case Model::eventually_const: {
      const auto& e = std::get<EventuallyConstPL>(x);
      j["breakpoints"] = breakpoints_json(e.f);
      j["delta"] = to_json(e.delta);
      break;
    }
    case Model::germ:
      j["representative"] = breakpoints_json(std::get<GermClass>(x).rep);
      break;
    case Model::lex: {
      const auto& v = std::get<LexVec>(x);
      j["values"] = Json::array({to_json(v.first), to_json(v.second)});
      break;
    }
  }
  return j;
}

LatticeElement element_from_json(const Json& j) {
  try {
    const Model m = parse_model(j.at("model").get<std::string>());
    switch (m) {
      case Model::finite: {
        FiniteVec v;
        for (const auto& q : j.at("values")) v.values.push_back(rational_from_json(q));
        return v;
      }
      case Model::pl: return pl_from_json(j.at("breakpoints"));
      case Model::eventually_const: return make_eventually_const(pl_from_json(j.at("breakpoints")));
      case Model::germ: return GermClass{pl_from_json(j.at("representative"))};
      case Model::lex: {
        const auto& v = j.at("values");
        if (v.size() != 2) throw ParseError("lexicographic pair needs two values");
        return LexVec{rational_from_json(v.at(0)), rational_from_json(v.at(1))};
      }
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed element: ") + e.what());
  }
  throw ParseError("unknown model");
}

Json to_json(const PHFunction& g) {
  return std::visit(
      [&](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PHFunction::Coordinate>) {
          return Json{{"kind", "coordinate"}, {"n", g.arity()}, {"index", k.index + 1}};
        } else if constexpr (std::is_same_v<K, PHFunction::LatticeTerm>) {
          return Json{{"kind", "lattice"}, {"nf", to_json(k.nf)}};
        } else if constexpr (std::is_same_v<K, PHFunction::PNorm>) {
          return Json{{"kind", "pnorm"}, {"p", k.p}, {"weights", k.weights}, {"sign", k.sign}};
        } else if constexpr (std::is_same_v<K, PHFunction::BlackBox>) {
          return Json{{"kind", "blackbox"}, {"name", k.name}, {"n", g.arity()},
                      {"lipschitz", g.lipschitz()}};
        } else {
          Json inner = Json::array();
          for (const auto& f : k.inner) inner.push_back(to_json(f));
          return Json{{"kind", "composite"}, {"outer", to_json(*k.outer)}, {"inner", inner}};
        }
      },
      g.kind());
}

PHFunction ph_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "coordinate") {
      const auto index = j.at("index").get<std::size_t>();
      if (index == 0) throw ParseError("coordinate indices start at 1");
      return PHFunction::coordinate(j.at("n").get<std::size_t>(), index - 1);
    }
    if (kind == "pnorm") {
      return PHFunction::pnorm(j.at("p").get<double>(), j.at("weights").get<std::vector<double>>(),
                               j.value("sign", 1));
    }
    if (kind == "euclidean") return PHFunction::euclidean(j.at("n").get<std::size_t>());
    if (kind == "lattice") {
      if (j.contains("nf")) return PHFunction::lattice(nf_from_json(j.at("nf")));
      return PHFunction::lattice(
          parse_term(j.at("term").get<std::string>(), j.at("n").get<std::size_t>()));
    }
    if (kind == "composite") {
      std::vector<PHFunction> inner;
      for (const auto& f : j.at("inner")) inner.push_back(ph_from_json(f));
      return compose_ph(ph_from_json(j.at("outer")), inner);
    }
    if (kind == "blackbox") throw UnsupportedKind("black-box functions cannot be read from JSON");
    throw ParseError("unknown function kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed function descriptor: ") + e.what());
  }
}

Json to_json(const ApproxCertificate& c) {
  return Json{{"target", to_json(c.target)},
              {"approximant", to_json(c.approximant)},
              {"exact", c.exact},
              {"construction", c.construction},
              {"net", {{"n", c.net_arity},
                       {"mesh", to_json(c.net_mesh)},
                       {"covering_radius", to_json(c.covering_radius)},
                       {"points", c.net_points},
                       {"level", c.level}}},
              {"target_lipschitz", c.target_lipschitz},
              {"approximant_lipschitz", c.approximant_lipschitz},
              {"net_defect", c.net_defect},
              {"slack", c.slack},
              {"epsilon", c.epsilon},
              {"interpolants", c.interpolant_count},
              {"clauses", c.clause_count}};
}

Json to_json(const CalculusResult& r) {
  Json j{{"value", to_json(r.value)},
         {"mode", r.mode == CalculusMode::exact ? "exact" : "approximate"},
         {"error_bound", to_json(r.error_bound)}};
  if (r.certificate) {
    const auto& c = *r.certificate;
    j["certificate"] = {{"epsilon", c.epsilon},
                        {"clauses", c.clause_count},
                        {"net_points", c.net_points},
                        {"target", to_json(c.target)}};
  }
  return j;
}

Json to_json(const CompositionReport& r) {
  Json j{{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"exact", r.exact},
         {"equal", r.equal}};
  j["discrepancy"] = r.discrepancy ? to_json(*r.discrepancy) : Json(nullptr);
  j["budget"] = r.budget;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const ContractivityReport& r) {
  return Json{{"unit", to_json(r.unit)},  {"unit_identity", r.unit_identity},
              {"norm", to_json(r.norm)},  {"bound", to_json(r.bound)},
              {"pass", r.pass}};
}

Json to_json(const AxiomReport& r) {
  Json axioms = Json::array();
  for (const auto& a : r.results) {
    Json j{{"axiom", a.axiom}, {"checks", a.checks}, {"failures", a.failures},
           {"pass", a.failures == 0}};
    if (a.failures != 0) {
      j["witness"] = elements_json(a.witness);
      j["detail"] = a.detail;
    }
    axioms.push_back(std::move(j));
  }
  return Json{{"oracle", r.provenance}, {"trials", r.trials}, {"seed", r.seed},
              {"pass", r.all_pass()}, {"axioms", std::move(axioms)}};
}

Json to_json(const FidelityReport& r) {
  Json j{{"model", model_name(r.model)}, {"trials", r.trials}, {"agreements", r.agreements},
         {"pass", r.pass()}};
  if (!r.witness.empty()) j["witness"] = elements_json(r.witness);
  return j;
}

Json to_json(const ArchimedeanSearch& r) {
  Json j{{"model", model_name(r.model)}, {"trials", r.trials}, {"n_max", r.n_max},
         {"witnesses", r.witnesses}};
  if (!r.witness.empty()) j["witness"] = elements_json(r.witness);
  return j;
}

Json to_json(const KernelWitnessReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back(Json{{"m", s.m},
                         {"in_kernel", s.in_kernel},
                         {"distance", to_json(s.distance)},
                         {"distance_net_upper", to_json(s.distance_upper)},
                         {"distance_ok", s.distance_ok},
                         {"dominated", s.dominated},
                         {"identity_ok", s.identity_ok}});
  return Json{{"f", to_string(r.f)},
              {"image_f", to_json(LatticeElement(r.image_f))},
              {"image_unit", to_json(LatticeElement(r.image_unit))},
              {"image_nonzero", r.image_nonzero},
              {"pass", r.pass},
              {"steps", std::move(steps)}};
}

Json to_json(const ForcedPhi1& r) {
  return Json{{"c1", to_json(r.c1)}, {"s", to_json(r.s)}, {"trace", trace_json(r.trace)}};
}

Json to_json(const ObstructionOutcome& r) {
  if (const auto* rej = std::get_if<Rejection>(&r))
    return Json{{"outcome", "rejected"},
                {"candidate", candidate_json(rej->candidate)},
                {"violates", rej->equation},
                {"detail", rej->detail}};
  const auto& c = std::get<ContradictionCertificate>(r);
  return Json{{"outcome", "contradiction"},
              {"candidate", candidate_json(c.candidate)},
              {"lambda", to_json(c.lambda)},
              {"f", to_string(c.f)},
              {"route_a", to_json(c.route_a)},
              {"route_b", to_json(c.route_b)},
              {"trace", trace_json(c.trace)}};
}

Json to_json(const SweepSummary& r) {
  Json by = Json::object();
  for (const auto& [eq, n] : r.rejected_by) by[eq] = n;
  return Json{{"candidates", r.candidates}, {"certificates", r.certificates},
              {"rejections", r.rejections}, {"survivors", r.survivors},
              {"routes_valid", r.routes_valid}, {"rejected_by", std::move(by)}};
}

Json to_json(const UniformCompletenessReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back(Json{{"m", s.m},
                         {"g", breakpoints_json(s.g)},
                         {"in_X", s.in_X},
                         {"delta", to_json(s.delta)},
                         {"distance", to_json(s.distance)},
                         {"rate_ok", s.rate_ok}});
  return Json{{"h", breakpoints_json(r.h)},
              {"h_in_X", r.h_in_X},
              {"cauchy_checks", r.cauchy_checks},
              {"cauchy_failures", r.cauchy_failures},
              {"distance_checks", r.distance_checks},
              {"distance_failures", r.distance_failures},
              {"pass", r.pass},
              {"steps", std::move(steps)}};
}

Json to_json(const FiniteUCReport& r) {
  Json j{{"delta", to_json(r.delta)}, {"c", to_json(r.c)}, {"in_ideal", r.in_ideal},
         {"terms", r.terms}, {"stable", r.stable}, {"pass", r.pass()}};
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

Json to_json(const DensityResult& r) {
  return Json{{"g", breakpoints_json(r.g)},
              {"delta", to_json(r.delta)},
              {"distance", to_json(r.distance)},
              {"in_X", r.in_X},
              {"flat_at_f0", r.flat_at_f0},
              {"within_eps", r.within_eps},
              {"pass", r.pass()}};
}

}  // namespace phcalc
