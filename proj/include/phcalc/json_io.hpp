#pragma once

#include <json.hpp>

#include "phcalc/calculus.hpp"
#include "phcalc/counterexamples.hpp"
#include "phcalc/lattice.hpp"
#include "phcalc/order.hpp"
#include "phcalc/ph_function.hpp"
#include "phcalc/term.hpp"

namespace phcalc {

using Json = nlohmann::ordered_json;

// Rationals are written as "num/den" strings. Readers also accept integers
// and any string parse_rational understands.
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const RationalPoint& p);
Json to_json(const LinearForm& f);

/// {"n": arity, "clauses": [[[c1, ..., cn], ...], ...]}
Json to_json(const MaxMinNF& f);
MaxMinNF nf_from_json(const Json& j);

Json to_json(const SupNormInterval& s);

/// {"model": name, ...} with a model-specific payload.
Json to_json(const LatticeElement& x);
LatticeElement element_from_json(const Json& j);

/// Builtin descriptors: {"kind":"coordinate","n":2,"index":1},
/// {"kind":"pnorm","p":2,"weights":[1,1]}, {"kind":"euclidean","n":2},
/// {"kind":"lattice","nf":{...}} or {"kind":"lattice","n":2,"term":"p1 v p2"},
/// {"kind":"composite","outer":{...},"inner":[...]}. Black boxes serialize
/// for reporting only.
Json to_json(const PHFunction& g);
PHFunction ph_from_json(const Json& j);

Json to_json(const ApproxCertificate& c);
Json to_json(const CalculusResult& r);
Json to_json(const CompositionReport& r);
Json to_json(const ContractivityReport& r);
Json to_json(const AxiomReport& r);
Json to_json(const FidelityReport& r);
Json to_json(const ArchimedeanSearch& r);
Json to_json(const KernelWitnessReport& r);
Json to_json(const ForcedPhi1& r);
Json to_json(const ObstructionOutcome& r);
Json to_json(const SweepSummary& r);
Json to_json(const UniformCompletenessReport& r);
Json to_json(const FiniteUCReport& r);
Json to_json(const DensityResult& r);

}  // namespace phcalc
