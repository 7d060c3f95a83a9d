#pragma once

#include <vector>

#include "phcalc/rational.hpp"

namespace phcalc {

/// Exact maximum of t ↦ min_j (rows[j]·t + offsets[j]) over the box [-1,1]^m,
/// where m is the common row length. Solved by a dense rational simplex with
/// Bland's rule, so the answer is exact. Requires at least one row.
Rational max_min_affine_over_box(const std::vector<std::vector<Rational>>& rows,
                                 const std::vector<Rational>& offsets);

}  // namespace phcalc
