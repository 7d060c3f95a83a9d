#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace phcalc {

using Rational = mpq_class;
using RationalPoint = std::vector<Rational>;

/// Parses "7", "-3/2", "0.05" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; integers print as "n/1".
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact: every finite double is a dyadic rational.
Rational from_double(double v);

/// num/den in lowest terms. Prefer this to the two-argument constructor,
/// which does not reduce.
Rational ratio(long num, long den);

Rational floor(const Rational& q);
Rational abs(const Rational& q);
Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);

std::vector<double> to_doubles(const RationalPoint& p);

/// max_i |p_i|
Rational linf_norm(const RationalPoint& p);

}  // namespace phcalc
