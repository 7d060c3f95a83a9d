#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phcalc/rational.hpp"

namespace phcalc {

enum class TermKind { var, scale, sum, join, meet };

/// Immutable AST of a lattice-linear expression in `arity` variables.
/// Variables are 0-based internally; the text syntax uses p1..pN.
class Term {
 public:
  static Term var(std::size_t arity, std::size_t index);
  static Term zero(std::size_t arity);
  static Term scale(Rational factor, Term t);
  static Term sum(Term a, Term b);
  static Term join(Term a, Term b);
  static Term meet(Term a, Term b);

  // Sugar; expands into the core node kinds.
  static Term neg(Term t);
  static Term abs(Term t);
  static Term sub(Term a, Term b);
  static Term positive_part(Term t);

  /// |p1| v ... v |pn|, which is constantly 1 on the unit sphere of l-infinity.
  static Term sphere_unit(std::size_t arity);

  TermKind kind() const;
  std::size_t arity() const { return arity_; }
  std::size_t index() const;
  const Rational& factor() const;
  const Term& lhs() const;
  const Term& rhs() const;

 private:
  struct Node;
  Term(std::size_t arity, std::shared_ptr<const Node> node);

  std::size_t arity_ = 0;
  std::shared_ptr<const Node> node_;
};

/// Parses the term DSL: p1..pN, `+`, `-`, scalar `*`, join `v`, meet `^`,
/// `|t|`, parentheses, and the literal 0. Precedence from loosest:
/// v, ^, + -, *, unary minus.
Term parse_term(std::string_view text, std::size_t arity);

std::string to_string(const Term& t);

std::size_t term_depth(const Term& t);

Rational eval_term(const Term& t, std::span<const Rational> point);
double eval_term(const Term& t, std::span<const double> point);

struct LinearForm {
  std::vector<Rational> coeffs;

  std::size_t arity() const { return coeffs.size(); }
  Rational eval(std::span<const Rational> point) const;
  double eval(std::span<const double> point) const;
  /// Lipschitz constant with respect to the l-infinity metric.
  Rational l1_norm() const;
  bool is_zero() const;

  static LinearForm zero(std::size_t arity);
  static LinearForm coordinate(std::size_t arity, std::size_t index);

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.coeffs == b.coeffs; }
  friend bool operator<(const LinearForm& a, const LinearForm& b) { return a.coeffs < b.coeffs; }
};

LinearForm operator+(const LinearForm& a, const LinearForm& b);
LinearForm operator-(const LinearForm& a, const LinearForm& b);
LinearForm operator*(const Rational& s, const LinearForm& f);

/// Meet of linear forms.
using Clause = std::vector<LinearForm>;

/// Join of meets of linear forms.
class MaxMinNF {
 public:
  MaxMinNF(std::size_t arity, std::vector<Clause> clauses);

  static MaxMinNF form(LinearForm f);
  static MaxMinNF coordinate(std::size_t arity, std::size_t index);
  static MaxMinNF zero(std::size_t arity);

  std::size_t arity() const { return arity_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t form_count() const;

  Rational eval(std::span<const Rational> point) const;
  double eval(std::span<const double> point) const;

  /// Largest l1 norm over all forms: a Lipschitz bound in the l-infinity metric.
  Rational lipschitz() const;

  friend bool operator==(const MaxMinNF& a, const MaxMinNF& b) {
    return a.arity_ == b.arity_ && a.clauses_ == b.clauses_;
  }

 private:
  std::size_t arity_;
  std::vector<Clause> clauses_;
};

inline Rational eval_nf(const MaxMinNF& f, std::span<const Rational> p) { return f.eval(p); }
inline double eval_nf(const MaxMinNF& f, std::span<const double> p) { return f.eval(p); }

/// Clause budget from PHCALC_CLAUSE_BUDGET, or 100000.
std::size_t default_clause_budget();

struct NormalizeOptions {
  std::size_t clause_budget = default_clause_budget();
  bool prune = true;
};

// Lattice-ordered vector operations on normal forms. Every result is pruned
// (unless disabled) and sorted into canonical order.
MaxMinNF nf_join(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt = {});
MaxMinNF nf_meet(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt = {});
MaxMinNF nf_add(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt = {});
MaxMinNF nf_scale(const Rational& s, const MaxMinNF& a, const NormalizeOptions& opt = {});
MaxMinNF nf_negate(const MaxMinNF& a, const NormalizeOptions& opt = {});
MaxMinNF nf_sub(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt = {});

/// Dedupes, removes forms that never attain a clause minimum and clauses
/// dominated by another clause. Dominance is screened on sample points and
/// confirmed by an exact linear program.
MaxMinNF simplify(const MaxMinNF& f, const NormalizeOptions& opt = {});

MaxMinNF normalize(const Term& t, const NormalizeOptions& opt = {});

/// Inverse direction of normalize, for printing and substitution.
Term to_term(const MaxMinNF& f);

/// f(t) = |t|_inf * f(t / |t|_inf), and 0 at the origin.
double extend_by_homogeneity(const std::function<double(std::span<const double>)>& on_sphere,
                             std::span<const double> t);
Rational extend_by_homogeneity(
    const std::function<Rational(std::span<const Rational>)>& on_sphere,
    std::span<const Rational> t);

/// Face grid of the unit sphere of l-infinity in R^n. Each of the 2n faces
/// {t_i = +-1} carries a grid of step 2/N, N = ceil(2/mesh); points shared by
/// several faces are listed once.
struct SphereNet {
  std::size_t arity = 0;
  Rational mesh;
  Rational step;
  /// l-infinity distance from any sphere point to its nearest net point.
  Rational covering_radius;
  std::vector<RationalPoint> points;
  std::vector<std::vector<double>> points_d;
};

constexpr std::size_t kDefaultNetPointCap = 2'000'000;

std::size_t sphere_net_size(std::size_t arity, const Rational& mesh);
SphereNet make_sphere_net(std::size_t arity, const Rational& mesh,
                          std::size_t point_cap = kDefaultNetPointCap);

struct SupNormInterval {
  Rational lo;
  Rational hi;
};

/// lo = max over the net of |f|, hi = lo + lipschitz * covering radius.
SupNormInterval sup_norm_bound(const MaxMinNF& f, const SphereNet& net);

/// Exact max of f over the sphere (one small LP per face and clause).
Rational sphere_max(const MaxMinNF& f);

/// Exact sup-norm of f on the sphere.
Rational exact_sup_norm(const MaxMinNF& f, const NormalizeOptions& opt = {});

}  // namespace phcalc
