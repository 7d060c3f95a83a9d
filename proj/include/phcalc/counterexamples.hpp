#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "phcalc/lattice.hpp"
#include "phcalc/rational.hpp"
#include "phcalc/term.hpp"

namespace phcalc {

/// One line of an exact computation: a label and the value it produced.
struct TraceStep {
  std::string label;
  std::string value;
};

// --- The lexicographic plane ------------------------------------------------
//
// The replays below take x = ((1,0), (0,1)) in the lexicographic plane and
// assume that a calculus Phi_x exists. Then phi_i = pi_i o Phi_x, and the
// candidate forms phi_1 = c1 * eval_s and phi_2 = c2 * eval_t (on the kernel
// of phi_1) are hypotheses to be refuted.

struct ForcedPhi1 {
  Rational c1;
  RationalPoint s;
  std::vector<TraceStep> trace;
};

/// Computes c1 = pi_1(|x1| v |x2|) and s_i = pi_1(x_i) in exact lex arithmetic.
ForcedPhi1 forced_phi1();

struct ObstructionCandidate {
  Rational c1;
  RationalPoint s;
  Rational c2;
  RationalPoint t;
};

struct ContradictionCertificate {
  ObstructionCandidate candidate;
  Rational lambda{};
  Term f = Term::zero(2);
  /// pi_2(Phi_x(f)) evaluated by the lattice operations of the plane.
  Rational route_a{};
  /// c2 * f(t), the value the candidate form predicts.
  Rational route_b{};
  std::vector<TraceStep> trace{};
};

struct Rejection {
  ObstructionCandidate candidate;
  /// The forced equation the candidate violates, such as "c1 = 1".
  std::string equation;
  std::string detail;
};

using ObstructionOutcome = std::variant<ContradictionCertificate, Rejection>;

/// Total: every candidate is rejected by a forced value or refuted by a
/// certificate whose two routes disagree.
ObstructionOutcome lex_obstruction(const ObstructionCandidate& candidate);

/// Smallest integer strictly above t1/t2 (t2 > 0).
Rational obstruction_lambda(const Rational& t1, const Rational& t2);

struct SweepSummary {
  std::size_t candidates = 0;
  std::size_t certificates = 0;
  std::size_t rejections = 0;
  std::size_t survivors = 0;
  /// Every certificate had route A exactly 0 and route B exactly positive.
  bool routes_valid = true;
  std::map<std::string, std::size_t> rejected_by;
};

SweepSummary lex_obstruction_sweep(const std::vector<ObstructionCandidate>& grid);

/// Candidate grid: t over a face grid of the sphere with the given number of
/// steps per edge, crossed with several (c1, s) and c2 choices.
std::vector<ObstructionCandidate> obstruction_grid(std::size_t steps_per_edge);

// --- Eventually constant functions ------------------------------------------

struct UniformCompletenessStep {
  std::size_t m = 0;
  PLFunc g;
  bool in_X = false;
  Rational delta{};
  Rational distance{};
  bool rate_ok = false;
};

struct UniformCompletenessReport {
  PLFunc h = PLFunc::identity();
  bool h_in_X = true;
  std::vector<UniformCompletenessStep> steps{};
  /// |g_m - g_k| <= 1/min(m,k) on the sampled pairs.
  std::size_t cauchy_checks = 0;
  std::size_t cauchy_failures = 0;
  /// |h - x| >= delta_x / 2 for x in X.
  std::size_t distance_checks = 0;
  std::size_t distance_failures = 0;
  bool pass = false;
};

/// g_m(t) = max(t, 1/m): a Cauchy sequence in X whose limit h(t) = t is not
/// in X. Also checks |h - x| >= delta_x/2 on `random_members` random x in X.
UniformCompletenessReport not_uniformly_complete_witness(std::size_t m_max,
                                                          std::size_t random_members = 100,
                                                          std::uint64_t seed = 1);

struct FiniteUCReport {
  Rational delta;
  Rational c;
  PLFunc unit = PLFunc::constant(1);
  std::size_t terms = 0;
  std::size_t stable = 0;
  /// First term whose image is not constant on [0, delta].
  std::string witness{};
  bool in_ideal = false;
  bool pass() const { return in_ideal && stable == terms; }
};

/// Inputs must lie in X. Images of random terms must be constant on [0, delta]
/// with delta the smallest flat prefix.
FiniteUCReport finitely_uc_probe(const std::vector<PLFunc>& fs, std::size_t terms,
                                 std::uint64_t seed, std::size_t max_depth = 4);

struct DensityResult {
  PLFunc g;
  Rational delta{};
  Rational distance{};
  bool in_X = false;
  bool flat_at_f0 = false;
  bool within_eps = false;
  bool pass() const { return in_X && flat_at_f0 && within_eps; }
};

/// Returns g in X, equal to f(0) on [0, delta], with |f - g| <= eps.
DensityResult density_construction(const PLFunc& f, const Rational& eps);

}  // namespace phcalc
