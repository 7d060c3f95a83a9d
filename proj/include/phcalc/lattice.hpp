#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phcalc/rational.hpp"

namespace phcalc {

struct Breakpoint {
  Rational x;
  Rational y;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Continuous piecewise-linear function on [0,1] with rational breakpoints.
/// Kept canonical: collinear interior breakpoints are removed, so equal
/// functions have equal breakpoint lists.
class PLFunc {
 public:
  explicit PLFunc(std::vector<Breakpoint> points);

  static PLFunc constant(const Rational& c);
  static PLFunc identity();

  const std::vector<Breakpoint>& breakpoints() const { return pts_; }
  Rational eval(const Rational& t) const;
  double eval(double t) const;
  const Rational& value_at_zero() const { return pts_.front().y; }
  /// Slope of the first (maximal) affine piece.
  Rational initial_slope() const;
  Rational sup_norm() const;
  /// Right end of the maximal interval [0, d] on which f is constant; 0 if
  /// f is not constant near 0.
  Rational flat_prefix() const;

  friend bool operator==(const PLFunc& a, const PLFunc& b) { return a.pts_ == b.pts_; }

 private:
  std::vector<Breakpoint> pts_;
};

PLFunc pl_add(const PLFunc& a, const PLFunc& b);
PLFunc pl_sub(const PLFunc& a, const PLFunc& b);
PLFunc pl_scale(const Rational& s, const PLFunc& a);
PLFunc pl_join(const PLFunc& a, const PLFunc& b);
PLFunc pl_meet(const PLFunc& a, const PLFunc& b);
PLFunc pl_abs(const PLFunc& a);
bool pl_leq(const PLFunc& a, const PLFunc& b);

struct FiniteVec {
  std::vector<Rational> values;
  friend bool operator==(const FiniteVec&, const FiniteVec&) = default;
};

/// Member of X: constant on [0, delta], delta > 0. `delta` is the maximal
/// flat prefix of `f`.
struct EventuallyConstPL {
  PLFunc f;
  Rational delta;
};

/// Germ at 0 of a PL function, stored as a representative. Two germs are
/// equal when the representatives agree on some [0, d], d > 0.
struct GermClass {
  PLFunc rep;
};

/// R^2 with the lexicographic order.
struct LexVec {
  Rational first;
  Rational second;
  friend bool operator==(const LexVec&, const LexVec&) = default;
};

enum class Model { finite, pl, eventually_const, germ, lex };

using LatticeElement = std::variant<FiniteVec, PLFunc, EventuallyConstPL, GermClass, LexVec>;

Model model_of(const LatticeElement& x);
std::string model_name(Model m);
Model parse_model(std::string_view name);
bool is_archimedean(Model m);

EventuallyConstPL make_eventually_const(PLFunc f);

LatticeElement lat_add(const LatticeElement& x, const LatticeElement& y);
LatticeElement lat_sub(const LatticeElement& x, const LatticeElement& y);
LatticeElement lat_scale(const LatticeElement& x, const Rational& s);
LatticeElement lat_join(const LatticeElement& x, const LatticeElement& y);
LatticeElement lat_meet(const LatticeElement& x, const LatticeElement& y);
LatticeElement lat_neg(const LatticeElement& x);
LatticeElement lat_abs(const LatticeElement& x);
bool lat_leq(const LatticeElement& x, const LatticeElement& y);
bool lat_equal(const LatticeElement& x, const LatticeElement& y);

/// Zero of the same model and shape as x.
LatticeElement zero_like(const LatticeElement& x);

/// Order unit e >= 0 defining the ideal I_e and the norm |.|_e.
struct OrderUnitContext {
  LatticeElement unit;
};

OrderUnitContext make_order_unit(LatticeElement e);

/// inf { l >= 0 : |x| <= l e }. Throws NotInIdeal when no l works and
/// NonArchimedean for the germ and lexicographic models, where |.|_e is
/// only a seminorm.
Rational order_unit_norm(const OrderUnitContext& ctx, const LatticeElement& x);

GermClass quotient_Q(const PLFunc& f);
PLFunc quotient_R(const GermClass& z);

struct MembershipX {
  bool member = false;
  /// Maximal flat prefix when member.
  Rational delta;
  /// Initial slope, nonzero exactly when f is not in X.
  Rational initial_slope;
};

MembershipX membership_X(const PLFunc& f);

std::string to_string(const LatticeElement& x);

/// Literal syntax: finite "[1,-2,3/4]", lex "(1,0)", pl "[(0,0),(1,1)]"
/// (an optional "pl", "germ" or "ecpl" prefix is accepted).
LatticeElement parse_element(Model m, std::string_view text);

}  // namespace phcalc
