#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "phcalc/lattice.hpp"
#include "phcalc/rational.hpp"
#include "phcalc/term.hpp"

namespace phcalc {

using Rng = std::mt19937_64;

/// Sampler bounds shared by the property tests and the CLI.
struct SampleLimits {
  long max_denominator = 16;
  long max_magnitude = 8;
};

/// Uniform numerator and denominator, so small-denominator values are common.
Rational random_rational(Rng& rng, const SampleLimits& lim = {});
RationalPoint random_point(Rng& rng, std::size_t arity, const SampleLimits& lim = {});

/// Random lattice-linear term; leaves are variables or the literal 0.
Term random_term(Rng& rng, std::size_t arity, std::size_t max_depth,
                 const SampleLimits& lim = {});

/// Random PL function with up to `max_interior` interior breakpoints.
PLFunc random_pl(Rng& rng, std::size_t max_interior = 3, const SampleLimits& lim = {});

/// Random PL function that is constant on an initial interval.
PLFunc random_flat_pl(Rng& rng, std::size_t max_interior = 3, const SampleLimits& lim = {});

/// Random element of a model. Finite vectors get length `finite_length`.
/// Lexicographic pairs draw their first coordinate from a small pool so that
/// ties, where the second coordinate decides, occur often.
LatticeElement random_element(Rng& rng, Model m, std::size_t finite_length = 3,
                              const SampleLimits& lim = {});

}  // namespace phcalc
