#include "phcalc/sampling.hpp"

#include <algorithm>
#include <set>

namespace phcalc {

namespace {

long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// A rational in the open interval (0,1) with denominator at most `max_den`.
Rational random_abscissa(Rng& rng, long max_den) {
  long den = uniform(rng, 2, std::max(2L, max_den));
  return ratio(uniform(rng, 1, den - 1), den);
}

std::vector<Rational> sorted_abscissae(Rng& rng, std::size_t count, long max_den) {
  std::set<Rational> xs;
  for (std::size_t i = 0; i < count; ++i) xs.insert(random_abscissa(rng, max_den));
  return {xs.begin(), xs.end()};
}

}  // namespace

Rational random_rational(Rng& rng, const SampleLimits& lim) {
  long den = uniform(rng, 1, lim.max_denominator);
  long num = uniform(rng, -lim.max_magnitude * den, lim.max_magnitude * den);
  return ratio(num, den);
}

RationalPoint random_point(Rng& rng, std::size_t arity, const SampleLimits& lim) {
  RationalPoint p;
  p.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) p.push_back(random_rational(rng, lim));
  return p;
}

Term random_term(Rng& rng, std::size_t arity, std::size_t max_depth, const SampleLimits& lim) {
  if (max_depth <= 1 || uniform(rng, 0, 9) < 2) {
    if (uniform(rng, 0, 19) == 0) return Term::zero(arity);
    return Term::var(arity, static_cast<std::size_t>(uniform(rng, 0, long(arity) - 1)));
  }
  switch (uniform(rng, 0, 3)) {
    case 0: return Term::scale(random_rational(rng, lim), random_term(rng, arity, max_depth - 1, lim));
    case 1:
      return Term::sum(random_term(rng, arity, max_depth - 1, lim),
                       random_term(rng, arity, max_depth - 1, lim));
    case 2:
      return Term::join(random_term(rng, arity, max_depth - 1, lim),
                        random_term(rng, arity, max_depth - 1, lim));
    default:
      return Term::meet(random_term(rng, arity, max_depth - 1, lim),
                        random_term(rng, arity, max_depth - 1, lim));
  }
}

PLFunc random_pl(Rng& rng, std::size_t max_interior, const SampleLimits& lim) {
  auto count = static_cast<std::size_t>(uniform(rng, 0, long(max_interior)));
  std::vector<Breakpoint> pts{{0, random_rational(rng, lim)}};
  for (const auto& x : sorted_abscissae(rng, count, lim.max_denominator))
    pts.push_back({x, random_rational(rng, lim)});
  pts.push_back({1, random_rational(rng, lim)});
  return PLFunc(std::move(pts));
}

PLFunc random_flat_pl(Rng& rng, std::size_t max_interior, const SampleLimits& lim) {
  auto count = static_cast<std::size_t>(uniform(rng, 1, long(max_interior) + 1));
  auto xs = sorted_abscissae(rng, count, lim.max_denominator);
  Rational c = random_rational(rng, lim);
  std::vector<Breakpoint> pts{{0, c}, {xs.front(), c}};
  for (std::size_t i = 1; i < xs.size(); ++i) pts.push_back({xs[i], random_rational(rng, lim)});
  pts.push_back({1, random_rational(rng, lim)});
  return PLFunc(std::move(pts));
}

LatticeElement random_element(Rng& rng, Model m, std::size_t finite_length,
                              const SampleLimits& lim) {
  switch (m) {
    case Model::finite: {
      FiniteVec v;
      for (std::size_t i = 0; i < finite_length; ++i) v.values.push_back(random_rational(rng, lim));
      return v;
    }
    case Model::pl: return random_pl(rng, 3, lim);
    case Model::eventually_const: return make_eventually_const(random_flat_pl(rng, 3, lim));
    case Model::germ: {
      // Germs are decided by the value at 0 and the first slope; drawing both
      // from small pools keeps ties frequent.
      PLFunc tail = random_pl(rng, 2, lim);
      Rational x1 = random_abscissa(rng, lim.max_denominator);
      Rational y0 = uniform(rng, -2, 2);
      Rational y1 = y0 + x1 * uniform(rng, -2, 2);
      std::vector<Breakpoint> pts{{0, y0}, {x1, y1}};
      for (const auto& p : tail.breakpoints())
        if (p.x > x1) pts.push_back(p);
      if (pts.back().x != 1) pts.push_back({1, tail.eval(Rational(1))});
      return GermClass{PLFunc(std::move(pts))};
    }
    case Model::lex:
      return LexVec{Rational(uniform(rng, -2, 2)), random_rational(rng, lim)};
  }
  return FiniteVec{};
}

}  // namespace phcalc
