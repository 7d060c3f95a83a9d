#include <doctest.h>

#include <cmath>
#include <map>

#include "phcalc/errors.hpp"
#include "phcalc/ph_function.hpp"
#include "phcalc/sampling.hpp"

using namespace phcalc;

namespace {

LinearForm lf(std::initializer_list<long> c) {
  LinearForm f;
  for (long v : c) f.coeffs.emplace_back(v);
  return f;
}

std::vector<double> random_sphere_point(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> p(n);
  for (auto& c : p) c = u(rng);
  p[rng() % n] = (rng() & 1) ? 1.0 : -1.0;
  return p;
}

RationalPoint to_sphere(RationalPoint p) {
  const Rational m = linf_norm(p);
  if (m == 0) return {};
  for (auto& c : p) c /= m;
  return p;
}

// The Euclidean certificate is the slow one; build it once per eps.
const ApproxCertificate& euclid_cert(double eps) {
  static std::map<double, ApproxCertificate> cache;
  auto it = cache.find(eps);
  if (it == cache.end()) it = cache.emplace(eps, krivine_approximate(PHFunction::euclidean(2), eps)).first;
  return it->second;
}

}  // namespace

TEST_SUITE("ph_approx") {
  TEST_CASE("pairwise interpolant examples") {
    const RationalPoint e1{1, 0}, e2{0, 1}, m1{-1, 0};
    CHECK(pairwise_interpolant(e1, e2, 2, 3) == MaxMinNF::form(lf({2, 3})));
    const MaxMinNF a = pairwise_interpolant(e1, m1, 1, 1);
    const MaxMinNF abs1 = normalize(parse_term("|p1|", 2));
    for (long i = -4; i <= 4; ++i)
      for (long j = -4; j <= 4; ++j) {
        const RationalPoint p{ratio(i, 4), ratio(j, 4)};
        CHECK(a.eval(p) == abs1.eval(p));
      }
    CHECK(a.eval(e1) == 1);
    CHECK(a.eval(m1) == 1);
    const MaxMinNF z = pairwise_interpolant(e1, e2, 0, 0);
    CHECK(z.eval(RationalPoint{Rational(1, 3), -1}) == 0);
    CHECK_THROWS_AS(pairwise_interpolant(e1, e1, 1, 2), InvalidPair);
  }

  TEST_CASE("pairwise interpolant hits prescribed values exactly") {
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = 2 + k % 3;
      RationalPoint s = to_sphere(random_point(rng, n)), t = to_sphere(random_point(rng, n));
      if (s.empty() || t.empty()) continue;
      if (k % 10 == 0) {
        t = s;
        for (auto& c : t) c = -c;
      }
      if (s == t) continue;
      const Rational a = random_rational(rng), b = random_rational(rng);
      const MaxMinNF h = pairwise_interpolant(s, t, a, b);
      CHECK(h.eval(s) == a);
      CHECK(h.eval(t) == b);
    }
  }

  TEST_CASE("exact targets give exact certificates") {
    const ApproxCertificate c = krivine_approximate(PHFunction::coordinate(3, 0), 0.1);
    CHECK(c.exact);
    CHECK(c.epsilon == 0);
    CHECK(c.approximant == MaxMinNF::coordinate(3, 0));

    const MaxMinNF f = normalize(parse_term("(p1 v p2) ^ -p2", 2));
    const ApproxCertificate d = krivine_approximate(PHFunction::lattice(f), 0.5);
    CHECK(d.exact);
    CHECK(d.epsilon == 0);
    CHECK(d.approximant == f);
  }

  TEST_CASE("Euclidean norm at eps 0.05") {
    const ApproxCertificate& c = euclid_cert(0.05);
    CHECK(c.epsilon <= 0.05);
    CHECK_FALSE(c.exact);
    CHECK(std::fabs(c.approximant.eval(std::vector<double>{1, 1}) - std::sqrt(2.0)) <= 0.05);
    CHECK(std::fabs(c.approximant.eval(std::vector<double>{1, 0}) - 1.0) <= 0.05);
    CHECK(replay_certificate(c) == doctest::Approx(c.epsilon).epsilon(1e-12));
    CHECK(c.interpolant_count > 0);
    CHECK(c.clause_count == c.approximant.clauses().size());

    Rng rng(2024);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const auto p = random_sphere_point(rng, 2);
      worst = std::max(worst, std::fabs(c.approximant.eval(p) - std::hypot(p[0], p[1])));
    }
    CHECK(worst <= c.epsilon + 1e-9);
  }

  TEST_CASE("halving eps does not increase the certified error") {
    const PHFunction g = PHFunction::pnorm(1.5, {1.0, 2.0});
    const ApproxCertificate a = krivine_approximate(g, 0.2);
    const ApproxCertificate b = krivine_approximate(g, 0.1);
    CHECK(a.epsilon <= 0.2);
    CHECK(b.epsilon <= 0.1);
    CHECK(b.epsilon <= a.epsilon);
  }

  TEST_CASE("concave targets switch to the cone construction") {
    const PHFunction g = PHFunction::pnorm(2, {1.0, 1.0}, -1);
    const ApproxCertificate c = krivine_approximate(g, 0.1);
    CHECK(c.epsilon <= 0.1);
    CHECK(c.construction == "cone");
    Rng rng(3);
    for (int k = 0; k < 500; ++k) {
      const auto s = random_sphere_point(rng, 2);
      const double a = c.approximant.eval(s), v = g.eval(s);
      CHECK(a <= v + 1e-9);
      CHECK(v - a <= c.epsilon + 1e-9);
    }
  }

  TEST_CASE("p-norm certificates hold on random samples") {
    Rng rng(99);
    for (double p : {1.0, 3.0, 8.0}) {
      const PHFunction g = PHFunction::pnorm(p, {1.0, 0.5}, -1);
      const ApproxCertificate c = krivine_approximate(g, 0.1);
      for (int k = 0; k < 300; ++k) {
        const auto s = random_sphere_point(rng, 2);
        CHECK(std::fabs(c.approximant.eval(s) - g.eval(s)) <= c.epsilon + 1e-9);
      }
    }
  }

  TEST_CASE("builtin functions are homogeneous and Lipschitz") {
    Rng rng(5);
    std::vector<PHFunction> fs{PHFunction::euclidean(3), PHFunction::pnorm(1, {1, -2, 0.5}),
                               PHFunction::pnorm(4, {1, 1, 1}, -1), PHFunction::coordinate(3, 2),
                               PHFunction::lattice(parse_term("p1 ^ |p2 - p3|", 3))};
    for (const auto& f : fs) {
      for (int k = 0; k < 100; ++k) {
        const auto s = random_sphere_point(rng, 3);
        for (double lambda : {0.0, 0.5, 2.0}) {
          std::vector<double> ls(s);
          for (auto& c : ls) c *= lambda;
          CHECK(f.eval(ls) == doctest::Approx(lambda * f.eval(s)).epsilon(1e-12));
        }
        const auto q = random_sphere_point(rng, 3);
        double d = 0;
        for (int i = 0; i < 3; ++i) d = std::max(d, std::fabs(s[i] - q[i]));
        CHECK(std::fabs(f.eval(s) - f.eval(q)) <= f.lipschitz() * d + 1e-12);
      }
    }
  }

  TEST_CASE("black boxes violating their Lipschitz claim are rejected") {
    const PHFunction liar = PHFunction::black_box(
        2, [](std::span<const double> t) { return 10 * std::fabs(t[0]); }, 1.0, "liar");
    CHECK_THROWS_AS(krivine_approximate(liar, 0.1), InvalidLipschitz);
  }

  TEST_CASE("net point cap") {
    ApproxOptions opt;
    opt.point_cap = 10;
    CHECK_THROWS_AS(krivine_approximate(PHFunction::euclidean(2), 0.01, opt), ResourceLimit);
  }

  TEST_CASE("product map") {
    const ProductMap id = product_map({PHFunction::coordinate(2, 0), PHFunction::coordinate(2, 1)});
    CHECK(id.eval_exact(RationalPoint{3, 4}) == RationalPoint{3, 4});
    const ProductMap mm = product_map({PHFunction::lattice(parse_term("p1 v p2", 2)),
                                       PHFunction::lattice(parse_term("p1 ^ p2", 2))});
    CHECK(mm.eval_exact(RationalPoint{3, 4}) == RationalPoint{4, 3});
    const ProductMap ab = product_map({PHFunction::lattice(parse_term("|p1|", 2))});
    CHECK(ab.size() == 1);
    CHECK(ab.eval(std::vector<double>{-2, 5}) == std::vector<double>{2});
    CHECK_THROWS_AS(product_map({PHFunction::coordinate(2, 0), PHFunction::coordinate(3, 0)}),
                    DimensionMismatch);
  }

  TEST_CASE("composition") {
    const PHFunction f = PHFunction::lattice(parse_term("p1 - 2*p2 ^ p3", 3));
    const PHFunction c = compose_ph(PHFunction::coordinate(1, 0), {f});
    CHECK(c.lattice_form() == f.lattice_form());

    const PHFunction j = compose_ph(PHFunction::lattice(parse_term("p1 v p2", 2)),
                                    {PHFunction::coordinate(2, 0),
                                     PHFunction::lattice(parse_term("-p1", 2))});
    CHECK(j.is_exact());
    CHECK(j.lattice_form() == normalize(parse_term("|p1|", 2)));

    const PHFunction e = compose_ph(PHFunction::euclidean(2),
                                    {PHFunction::coordinate(2, 0), PHFunction::coordinate(2, 1)});
    CHECK(e.eval(std::vector<double>{3, 4}) == doctest::Approx(5.0));
    CHECK(e.lipschitz() == doctest::Approx(PHFunction::euclidean(2).lipschitz()));
    CHECK_THROWS_AS(compose_ph(PHFunction::euclidean(2), {PHFunction::coordinate(2, 0)}),
                    DimensionMismatch);
  }

  TEST_CASE("symbolic composition agrees with pointwise evaluation") {
    Rng rng(13);
    for (int k = 0; k < 40; ++k) {
      const PHFunction g = PHFunction::lattice(random_term(rng, 2, 3));
      const std::vector<PHFunction> fs{PHFunction::lattice(random_term(rng, 3, 3)),
                                       PHFunction::lattice(random_term(rng, 3, 3))};
      const MaxMinNF h = compose_ph(g, fs).lattice_form();
      for (int j = 0; j < 20; ++j) {
        const RationalPoint t = random_point(rng, 3);
        const RationalPoint inner{fs[0].eval_exact(t), fs[1].eval_exact(t)};
        CHECK(h.eval(t) == g.eval_exact(inner));
      }
    }
  }
}
