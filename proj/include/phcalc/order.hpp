#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phcalc/lattice.hpp"
#include "phcalc/rational.hpp"
#include "phcalc/sampling.hpp"
#include "phcalc/term.hpp"

namespace phcalc {

/// A vector space together with a binary map sigma, from which an order is
/// read off as x <= y iff sigma(x, y) = y.
struct SigmaOracle {
  std::string provenance;
  std::function<LatticeElement(const LatticeElement&, const LatticeElement&)> add;
  std::function<LatticeElement(const LatticeElement&, const Rational&)> scale;
  std::function<bool(const LatticeElement&, const LatticeElement&)> equal;
  std::function<LatticeElement(const LatticeElement&, const LatticeElement&)> sigma;
};

/// sigma(x, y) = Phi_(x,y)(p1 v p2) computed by the model's calculus.
SigmaOracle calculus_oracle(Model m);

/// Deliberately broken oracles for mutation testing.
enum class Corruption { sum, left_projection, join_with_zero };
SigmaOracle corrupted_oracle(Model m, Corruption c);
std::string corruption_name(Corruption c);

bool derive_leq(const SigmaOracle& o, const LatticeElement& x, const LatticeElement& y);
LatticeElement derive_sup(const SigmaOracle& o, const LatticeElement& x, const LatticeElement& y);

using ElementSampler = std::function<LatticeElement(Rng&)>;

ElementSampler model_sampler(Model m, std::size_t finite_length = 3);

struct AxiomResult {
  std::string axiom;
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// Elements of the first failing instance, in the order the identity uses them.
  std::vector<LatticeElement> witness;
  std::string detail;
};

struct AxiomReport {
  std::string provenance;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<AxiomResult> results;

  bool all_pass() const;
  const AxiomResult& result(const std::string& axiom) const;
};

/// Exact checks of reflexivity, symmetry, associativity, positive
/// homogeneity, translation invariance, the upper-bound property and the
/// least-upper-bound property on sampled elements.
AxiomReport axiom_suite(const SigmaOracle& o, const ElementSampler& sample, std::size_t trials,
                        std::uint64_t seed);

struct FidelityReport {
  Model model = Model::finite;
  std::size_t trials = 0;
  std::size_t agreements = 0;
  std::vector<LatticeElement> witness;
  bool pass() const { return agreements == trials; }
};

/// Compares the derived order with the model's native order on sampled pairs.
/// Half the pairs are built comparable (y = x + |w|) so both answers occur.
FidelityReport reconstruction_fidelity(Model m, std::size_t trials, std::uint64_t seed);

/// Smallest n in [1, n_max] with n x not below y, or nothing when n x <= y for
/// all of them. Requires x >= 0, so failures are upward closed and a
/// bisection suffices.
std::optional<std::size_t> archimedean_escape(const LatticeElement& x, const LatticeElement& y,
                                              std::size_t n_max);

struct ArchimedeanSearch {
  Model model = Model::finite;
  std::size_t trials = 0;
  std::size_t n_max = 0;
  std::size_t witnesses = 0;
  /// First pair (x, y) with x != 0 and n x <= y for every n <= n_max.
  std::vector<LatticeElement> witness;
};

/// Samples pairs x = |a|, y = |b| and counts those with x != 0 that never
/// escape.
ArchimedeanSearch archimedean_search(Model m, std::size_t trials, std::uint64_t seed,
                                     std::size_t n_max = 1'000'000);

struct KernelStep {
  std::size_t m = 0;
  bool in_kernel = false;
  Rational distance{};
  Rational distance_upper{};
  bool distance_ok = false;
  /// m * Phi(f) <= Phi(1), i.e. a witness against the Archimedean property.
  bool dominated = false;
  /// m * Phi(f) = Phi(m (f - f_m)).
  bool identity_ok = false;
};

struct KernelWitnessReport {
  Term f;
  GermClass image_f;
  GermClass image_unit;
  bool image_nonzero = false;
  std::vector<KernelStep> steps{};
  bool pass = false;
};

/// The germ calculus at z = (Q(h), Q(1)), h(t) = t, with
/// f = p1+ ^ p2+ and f_m = (p1 - p2/m)+ ^ p2+ for m in [2, m_max].
Term kernel_sequence_term(std::size_t m);
KernelWitnessReport kernel_nonclosed_witness(std::size_t m_max);

}  // namespace phcalc
