#include <doctest.h>

#include <cmath>

#include "phcalc/calculus.hpp"
#include "phcalc/errors.hpp"
#include "phcalc/sampling.hpp"

using namespace phcalc;

namespace {

const FiniteVec& fv(const LatticeElement& x) { return std::get<FiniteVec>(x); }
const PLFunc& as_pl(const LatticeElement& x) { return std::get<PLFunc>(x); }

Tuple random_tuple(Rng& rng, Model m, std::size_t n, std::size_t length = 3) {
  std::vector<LatticeElement> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(random_element(rng, m, length));
  return Tuple(xs);
}

}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("apply_term examples") {
    const Tuple lex({LexVec{1, 0}, LexVec{0, 1}});
    CHECK(std::get<LexVec>(apply_term(lex, parse_term("p2", 2))) == LexVec{0, 1});
    CHECK(std::get<LexVec>(apply_term(lex, parse_term("|p1| v |p2|", 2))) == LexVec{1, 0});
    const Tuple fin({FiniteVec{{1, -2}}, FiniteVec{{0, 1}}});
    CHECK(fv(apply_term(fin, parse_term("|p1| v |p2|", 2))) == FiniteVec{{1, 2}});
    CHECK_THROWS_AS(apply_term(fin, parse_term("p1", 3)), DimensionMismatch);
    CHECK_THROWS(Tuple({FiniteVec{{1}}, LexVec{0, 1}}));
    CHECK_THROWS(Tuple({FiniteVec{{1}}, FiniteVec{{1, 2}}}));
  }

  TEST_CASE("apply_direct examples") {
    const Tuple x({FiniteVec{{3, 0, -3}}, FiniteVec{{4, 0, 4}}});
    const FiniteVec r = fv(apply_direct(x, PHFunction::euclidean(2)));
    REQUIRE(r.values.size() == 3);
    CHECK(to_double(r.values[0]) == doctest::Approx(5));
    CHECK(r.values[1] == 0);
    CHECK(to_double(r.values[2]) == doctest::Approx(5));
    CHECK(lat_equal(apply_direct(x, PHFunction::coordinate(2, 1)), x[1]));

    const Tuple p({PLFunc::identity(), PLFunc::constant(Rational(1, 2))});
    const PLFunc j = as_pl(apply_direct(p, PHFunction::lattice(parse_term("p1 v p2", 2))));
    CHECK(j == as_pl(lat_join(p[0], p[1])));
    CHECK(j.breakpoints().size() == 3);
    CHECK_THROWS_AS(apply_direct(p, PHFunction::euclidean(2)), UnsupportedKind);
  }

  TEST_CASE("apply_calculus examples") {
    const Tuple x({FiniteVec{{3, 0}}, FiniteVec{{4, 0}}});
    const CalculusResult r = apply_calculus(x, PHFunction::euclidean(2), Rational(1, 100));
    CHECK(r.mode == CalculusMode::approximate);
    CHECK(r.error_bound <= Rational(1, 100));
    CHECK(std::fabs(to_double(fv(r.value).values[0]) - 5) <= 0.04 + 1e-9);
    CHECK(fv(r.value).values[1] == 0);

    const CalculusResult c = apply_calculus(x, PHFunction::coordinate(2, 0), Rational(1, 10));
    CHECK(c.mode == CalculusMode::exact);
    CHECK(c.error_bound == 0);
    CHECK(lat_equal(c.value, x[0]));

    CHECK_THROWS_AS(apply_calculus(Tuple({LexVec{1, 0}}), PHFunction::euclidean(1), Rational(1, 10)),
                    NonArchimedean);
  }

  TEST_CASE("p-norm calculus on PL inputs against a pointwise oracle") {
    Rng rng(21);
    const Tuple x({random_pl(rng), random_pl(rng)});
    const PHFunction g = PHFunction::pnorm(3, {1.0, 1.0});
    const CalculusResult r = apply_calculus(x, g, Rational(1, 20));
    const PLFunc& v = as_pl(r.value);
    const PLFunc e = as_pl(tuple_unit(x));
    for (int k = 0; k <= 1000; ++k) {
      const double t = k / 1000.0;
      const double a = as_pl(x[0]).eval(t), b = as_pl(x[1]).eval(t);
      CHECK(std::fabs(v.eval(t) - g.eval(std::vector<double>{a, b})) <=
            0.05 * e.eval(t) + 1e-9);
    }
  }

  TEST_CASE("homomorphism laws hold exactly in every model") {
    for (Model m : {Model::finite, Model::pl, Model::eventually_const, Model::germ, Model::lex}) {
      CAPTURE(model_name(m));
      Rng rng(40 + static_cast<int>(m));
      for (int k = 0; k < 50; ++k) {
        const Tuple x = random_tuple(rng, m, 3);
        const Term a = random_term(rng, 3, 3), b = random_term(rng, 3, 3);
        const LatticeElement xa = apply_term(x, a), xb = apply_term(x, b);
        const Rational s = random_rational(rng);
        CHECK(lat_equal(apply_term(x, Term::join(a, b)), lat_join(xa, xb)));
        CHECK(lat_equal(apply_term(x, Term::meet(a, b)), lat_meet(xa, xb)));
        CHECK(lat_equal(apply_term(x, Term::sum(a, b)), lat_add(xa, xb)));
        CHECK(lat_equal(apply_term(x, Term::scale(s, a)), lat_scale(xa, s)));
        CHECK(lat_equal(apply_nf(x, normalize(a)), xa));
        CHECK(lat_equal(apply_term(x, Term::sphere_unit(3)), tuple_unit(x)));
      }
    }
  }

  TEST_CASE("direct application of lattice terms equals structural evaluation") {
    Rng rng(44);
    for (Model m : {Model::finite, Model::pl}) {
      for (int k = 0; k < 50; ++k) {
        const Tuple x = random_tuple(rng, m, 2);
        const Term t = random_term(rng, 2, 4);
        CHECK(lat_equal(apply_direct(x, PHFunction::lattice(t)), apply_term(x, t)));
      }
    }
  }

  TEST_CASE("quotient calculus") {
    const GermClass h = quotient_Q(PLFunc::identity());
    const GermClass one = quotient_Q(PLFunc::constant(1));
    CHECK(lat_equal(apply_quotient_calculus({h, one}, PHFunction::coordinate(2, 1)), one));
    CHECK(lat_equal(apply_quotient_calculus({h, one}, PHFunction::lattice(parse_term("p1 ^ p2", 2))), h));
    CHECK_THROWS_AS(apply_quotient_calculus({h, one}, PHFunction::euclidean(2)), UnsupportedKind);
  }

  TEST_CASE("quotient calculus ignores the choice of representative") {
    Rng rng(46);
    for (int k = 0; k < 100; ++k) {
      const PLFunc f1 = random_pl(rng), f2 = random_pl(rng);
      // Same germ at 0, different far away.
      const Rational cut = min(f1.breakpoints()[1].x, f2.breakpoints()[1].x) / 2;
      std::vector<Breakpoint> bs{f1.breakpoints()[0], {cut, f1.eval(cut)}, {1, f1.eval(cut) + 5}};
      const PLFunc f1b(bs);
      const PHFunction g = PHFunction::lattice(random_term(rng, 2, 4));
      const GermClass a = apply_quotient_calculus({quotient_Q(f1), quotient_Q(f2)}, g);
      const GermClass b = apply_quotient_calculus({quotient_Q(f1b), quotient_Q(f2)}, g);
      CHECK(lat_equal(a, b));
    }
  }

  TEST_CASE("composition law") {
    Rng rng(48);
    const Tuple x({FiniteVec{{1, -2, 3}}, FiniteVec{{0, 5, -1}}});
    const std::vector<PHFunction> fs{PHFunction::lattice(parse_term("p1 v p2", 2)),
                                     PHFunction::lattice(parse_term("p1 - p2", 2))};
    const PHFunction g = PHFunction::lattice(parse_term("|p1| ^ 2*p2", 2));
    const CompositionReport r = verify_composition(x, fs, g, Rational(1, 100));
    CHECK(r.exact);
    CHECK(r.equal);
    CHECK(r.pass);
    REQUIRE(r.discrepancy);
    CHECK(*r.discrepancy == 0);

    const Tuple z({LatticeElement{quotient_Q(random_pl(rng))}, LatticeElement{quotient_Q(random_pl(rng))}});
    const CompositionReport q = verify_composition(z, fs, g, Rational(1, 100));
    CHECK(q.equal);
    CHECK(q.pass);
    CHECK_FALSE(q.discrepancy);

    const std::vector<PHFunction> coords{PHFunction::coordinate(2, 0), PHFunction::coordinate(2, 1)};
    const CompositionReport e = verify_composition(x, coords, PHFunction::euclidean(2), Rational(1, 100));
    CHECK_FALSE(e.exact);
    CHECK(e.pass);
    REQUIRE(e.discrepancy);
    CHECK(to_double(*e.discrepancy) <= 0.02);
  }

  TEST_CASE("contractivity") {
    const Tuple x({FiniteVec{{1, -4}}, FiniteVec{{2, 2}}});
    const ContractivityReport a = contractivity_check(x, parse_term("p1", 2));
    CHECK(a.unit_identity);
    CHECK(a.norm <= 1);
    CHECK(a.pass);
    const ContractivityReport b = contractivity_check(x, parse_term("5*p1", 2));
    CHECK(b.norm <= 5);
    CHECK(b.pass);

    Rng rng(50);
    for (int k = 0; k < 1000; ++k) {
      const Tuple y = random_tuple(rng, Model::finite, 2, 4);
      const ContractivityReport r = contractivity_check(y, random_term(rng, 2, 4));
      CHECK(r.pass);
      CHECK(r.norm <= r.bound);
    }
  }
}
