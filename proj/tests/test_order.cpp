#include <doctest.h>

#include "phcalc/calculus.hpp"
#include "phcalc/order.hpp"

using namespace phcalc;

namespace {

const std::vector<Model> kModels{Model::finite, Model::pl, Model::eventually_const, Model::germ,
                                 Model::lex};

}  // namespace

TEST_SUITE("order") {
  TEST_CASE("derived order examples") {
    const SigmaOracle fin = calculus_oracle(Model::finite);
    CHECK(derive_leq(fin, FiniteVec{{1, 2}}, FiniteVec{{2, 2}}));
    CHECK_FALSE(derive_leq(fin, FiniteVec{{3, 2}}, FiniteVec{{2, 2}}));
    const SigmaOracle lex = calculus_oracle(Model::lex);
    CHECK(derive_leq(lex, LexVec{0, 100}, LexVec{1, -100}));
    CHECK_FALSE(derive_leq(lex, LexVec{1, -100}, LexVec{0, 100}));
    for (Model m : kModels) {
      Rng rng(1);
      const auto x = random_element(rng, m);
      CHECK(derive_leq(calculus_oracle(m), x, x));
      CHECK(lat_equal(derive_sup(calculus_oracle(m), x, x), x));
    }
  }

  TEST_CASE("derived supremum examples") {
    CHECK(std::get<FiniteVec>(derive_sup(calculus_oracle(Model::finite), FiniteVec{{1, 0}},
                                         FiniteVec{{0, 1}})) == FiniteVec{{1, 1}});
    CHECK(std::get<LexVec>(derive_sup(calculus_oracle(Model::lex), LexVec{1, 0}, LexVec{0, 1})) ==
          LexVec{1, 0});
  }

  TEST_CASE("axiom suite passes for every shipped calculus") {
    for (Model m : kModels) {
      const AxiomReport r = axiom_suite(calculus_oracle(m), model_sampler(m), 300, 7);
      CAPTURE(model_name(m));
      CHECK(r.all_pass());
      CHECK(r.results.size() == 7);
      for (const auto& a : r.results) CHECK(a.checks > 0);
    }
  }

  TEST_CASE("corrupted oracles are caught with concrete witnesses") {
    for (Model m : {Model::finite, Model::lex, Model::pl}) {
      CAPTURE(model_name(m));
      const AxiomReport sum = axiom_suite(corrupted_oracle(m, Corruption::sum), model_sampler(m), 200, 3);
      CHECK_FALSE(sum.all_pass());
      const AxiomResult& refl = sum.result("reflexivity");
      REQUIRE(refl.failures > 0);
      REQUIRE(refl.witness.size() == 1);
      // sigma(x, x) = 2x differs from x exactly when x != 0.
      CHECK_FALSE(lat_equal(refl.witness[0], zero_like(refl.witness[0])));

      const AxiomReport left =
          axiom_suite(corrupted_oracle(m, Corruption::left_projection), model_sampler(m), 200, 3);
      CHECK(left.result("symmetry").failures > 0);
      CHECK_FALSE(left.result("symmetry").witness.empty());

      const AxiomReport j0 =
          axiom_suite(corrupted_oracle(m, Corruption::join_with_zero), model_sampler(m), 200, 3);
      CHECK_FALSE(j0.all_pass());
      CHECK(j0.result("translation invariance").failures > 0);
    }
  }

  TEST_CASE("failing axioms always carry witnesses") {
    for (Corruption c : {Corruption::sum, Corruption::left_projection, Corruption::join_with_zero}) {
      const AxiomReport r = axiom_suite(corrupted_oracle(Model::finite, c), model_sampler(Model::finite), 100, 9);
      for (const auto& a : r.results)
        if (a.failures > 0) CHECK_FALSE(a.witness.empty());
    }
  }

  TEST_CASE("derived sup is the least upper bound against independent samples") {
    for (Model m : kModels) {
      CAPTURE(model_name(m));
      const SigmaOracle o = calculus_oracle(m);
      Rng rng(77);
      for (int k = 0; k < 200; ++k) {
        const auto x = random_element(rng, m), y = random_element(rng, m);
        const auto s = derive_sup(o, x, y);
        CHECK(lat_leq(x, s));
        CHECK(lat_leq(y, s));
        // Upper bounds built by hand: s + |w|.
        const auto u = lat_add(s, lat_abs(random_element(rng, m)));
        CHECK(derive_leq(o, s, u));
      }
    }
  }

  TEST_CASE("reconstructed order matches the native order") {
    for (Model m : kModels) {
      const FidelityReport r = reconstruction_fidelity(m, 1000, 5);
      CAPTURE(model_name(m));
      CHECK(r.trials == 1000);
      CHECK(r.pass());
    }
  }

  TEST_CASE("Archimedean escape") {
    CHECK(archimedean_escape(FiniteVec{{1, 0}}, FiniteVec{{5, 1}}, 1000000) == std::size_t{6});
    CHECK(archimedean_escape(FiniteVec{{0, 0}}, FiniteVec{{5, 1}}, 1000000) == std::nullopt);
    CHECK(archimedean_escape(LexVec{0, 1}, LexVec{1, 0}, 1000000) == std::nullopt);
    CHECK(archimedean_escape(LexVec{0, 1}, LexVec{0, 7}, 1000000) == std::size_t{8});
    CHECK(archimedean_escape(quotient_Q(PLFunc::identity()), quotient_Q(PLFunc::constant(1)), 1000000) ==
          std::nullopt);
  }

  TEST_CASE("Archimedean escape agrees with a linear scan") {
    Rng rng(13);
    for (Model m : {Model::finite, Model::pl, Model::lex, Model::germ}) {
      for (int k = 0; k < 50; ++k) {
        const auto x = lat_abs(random_element(rng, m)), y = lat_abs(random_element(rng, m));
        std::optional<std::size_t> scan;
        for (std::size_t n = 1; n <= 300 && !scan; ++n)
          if (!lat_leq(lat_scale(x, Rational(static_cast<long>(n))), y)) scan = n;
        const auto fast = archimedean_escape(x, y, 300);
        CHECK(fast == scan);
      }
    }
  }

  TEST_CASE("Archimedean witness search") {
    for (Model m : {Model::lex, Model::germ}) {
      const ArchimedeanSearch s = archimedean_search(m, 300, 1);
      CAPTURE(model_name(m));
      CHECK(s.witnesses > 0);
      REQUIRE(s.witness.size() == 2);
      CHECK_FALSE(lat_equal(s.witness[0], zero_like(s.witness[0])));
      for (long n : {1L, 1000L, 1000000L})
        CHECK(lat_leq(lat_scale(s.witness[0], n), s.witness[1]));
    }
    for (Model m : {Model::finite, Model::pl, Model::eventually_const}) {
      const ArchimedeanSearch s = archimedean_search(m, 1000, 1);
      CAPTURE(model_name(m));
      CHECK(s.witnesses == 0);
      CHECK(s.witness.empty());
    }
  }

  TEST_CASE("kernel of the germ calculus is not closed") {
    const KernelWitnessReport r = kernel_nonclosed_witness(1000);
    CHECK(r.pass);
    CHECK(r.image_nonzero);
    CHECK(lat_equal(r.image_f, quotient_Q(PLFunc::identity())));
    CHECK(r.steps.size() == 999);
    for (const auto& s : r.steps) {
      CHECK(s.in_kernel);
      CHECK(s.distance <= Rational(1, static_cast<long>(s.m)));
      CHECK(s.dominated);
      CHECK(s.identity_ok);
    }
  }

  TEST_CASE("kernel sequence spot checks") {
    const GermClass h = quotient_Q(PLFunc::identity());
    const GermClass one = quotient_Q(PLFunc::constant(1));
    const GermClass f5 = apply_quotient_calculus({h, one}, PHFunction::lattice(kernel_sequence_term(5)));
    CHECK(lat_equal(f5, zero_like(LatticeElement{f5})));
    // The representative vanishes on [0, 1/5].
    const Tuple reps({PLFunc::identity(), PLFunc::constant(1)});
    const PLFunc rep = std::get<PLFunc>(apply_direct(reps, PHFunction::lattice(kernel_sequence_term(5))));
    for (long i = 0; i <= 20; ++i) CHECK(rep.eval(ratio(i, 100)) == 0);
    CHECK(rep.eval(Rational(1, 2)) > 0);

    const MaxMinNF f = normalize(parse_term("(p1 v 0) ^ (p2 v 0)", 2));
    const MaxMinNF d = nf_sub(f, normalize(kernel_sequence_term(3)));
    CHECK(exact_sup_norm(d) <= Rational(1, 3));
  }
}
