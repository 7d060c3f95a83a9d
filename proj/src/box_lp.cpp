#include "phcalc/box_lp.hpp"

#include <cstddef>

#include "phcalc/errors.hpp"

namespace phcalc {

namespace {

// maximize obj·x  s.t.  A x <= b, x >= 0, with b >= 0 so the origin is a basic
// feasible solution.
Rational simplex_max(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
                     const std::vector<Rational>& obj) {
  const std::size_t m = A.size();
  const std::size_t n = obj.size();
  const std::size_t cols = n + m;

  std::vector<std::vector<Rational>> T(m, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
  }
  std::vector<Rational> reduced(cols);
  for (std::size_t j = 0; j < n; ++j) reduced[j] = obj[j];
  Rational value = 0;
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(reduced[j]) > 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) return value;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(T[i][enter]) <= 0) continue;
      Rational ratio = b[i] / T[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) throw Error("linear program is unbounded");

    Rational pivot = T[leave][enter];
    for (auto& v : T[leave]) v /= pivot;
    b[leave] /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(T[i][enter]) == 0) continue;
      Rational factor = T[i][enter];
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(T[leave][j]) != 0) T[i][j] -= factor * T[leave][j];
      b[i] -= factor * b[leave];
    }
    Rational factor = reduced[enter];
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(T[leave][j]) != 0) reduced[j] -= factor * T[leave][j];
    value += factor * b[leave];
    basis[leave] = enter;
  }
}

}  // namespace

Rational max_min_affine_over_box(const std::vector<std::vector<Rational>>& rows,
                                 const std::vector<Rational>& offsets) {
  if (rows.empty() || rows.size() != offsets.size())
    throw InvalidArgument("max_min_affine_over_box needs matching, non-empty rows");
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != dim) throw DimensionMismatch("ragged rows in box LP");

  if (dim == 0) {
    Rational m = offsets.front();
    for (const auto& o : offsets) m = min(m, o);
    return m;
  }

  // Substitute t = v - 1 (v in [0,2]) and z = w - B (w >= 0), with B large
  // enough that every right-hand side is nonnegative.
  Rational shift = 0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    Rational l1 = 0;
    for (const auto& c : rows[j]) l1 += abs(c);
    shift = max(shift, l1 - offsets[j]);
  }

  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  A.reserve(rows.size() + dim);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::vector<Rational> row(dim + 1);
    Rational rhs = shift + offsets[j];
    for (std::size_t k = 0; k < dim; ++k) {
      row[k] = -rows[j][k];
      rhs -= rows[j][k];
    }
    row[dim] = 1;
    A.push_back(std::move(row));
    b.push_back(std::move(rhs));
  }
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<Rational> row(dim + 1);
    row[k] = 1;
    A.push_back(std::move(row));
    b.push_back(2);
  }
  std::vector<Rational> obj(dim + 1);
  obj[dim] = 1;
  return simplex_max(std::move(A), std::move(b), obj) - shift;
}

}  // namespace phcalc
