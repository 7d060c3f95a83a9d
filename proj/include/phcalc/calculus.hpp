#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "phcalc/lattice.hpp"
#include "phcalc/ph_function.hpp"
#include "phcalc/rational.hpp"
#include "phcalc/term.hpp"

namespace phcalc {

/// Non-empty tuple (x1, ..., xn) of elements drawn from one model with a
/// common shape.
class Tuple {
 public:
  explicit Tuple(std::vector<LatticeElement> elements);

  std::size_t size() const { return elements_.size(); }
  Model model() const { return model_of(elements_.front()); }
  const LatticeElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<LatticeElement>& elements() const { return elements_; }

 private:
  std::vector<LatticeElement> elements_;
};

/// Parses "x1;x2;..." where each piece uses the literal syntax of the model.
Tuple parse_tuple(Model m, std::string_view text);

enum class CalculusMode { exact, approximate };

struct CalculusResult {
  LatticeElement value;
  CalculusMode mode = CalculusMode::exact;
  /// Bound on |value - Phi_x(g)| in the order-unit norm of e = |x1| v ... v |xn|.
  Rational error_bound{};
  std::shared_ptr<const ApproxCertificate> certificate{};
};

/// e = |x1| v ... v |xn|.
LatticeElement tuple_unit(const Tuple& x);

/// Structural evaluation of a term on a tuple. Works in every model.
LatticeElement apply_term(const Tuple& x, const Term& t);
LatticeElement apply_nf(const Tuple& x, const MaxMinNF& f);

/// Pointwise g(x1(t), ..., xn(t)). Finite vectors accept any g; function
/// models accept only lattice-exact g.
LatticeElement apply_direct(const Tuple& x, const PHFunction& g);

/// Approximate calculus on an Archimedean model, certified in the e-norm.
CalculusResult apply_calculus(const Tuple& x, const PHFunction& g, const Rational& eps,
                              const ApproxOptions& opt = {});

/// Applies an already computed approximant; lets callers reuse one
/// certificate across many tuples.
CalculusResult apply_certificate(const Tuple& x, const ApproxCertificate& cert);

/// Lift to representatives, evaluate there, project back to germs.
GermClass apply_quotient_calculus(const std::vector<GermClass>& z, const PHFunction& g);

struct CompositionReport {
  LatticeElement lhs;
  LatticeElement rhs;
  bool exact = true;
  bool equal = false;
  /// e-norm of lhs - rhs; absent on models without an order-unit norm.
  std::optional<Rational> discrepancy{};
  double budget = 0;
  bool pass = false;
};

/// Compares g(f1(x), ..., fm(x)) with (g o (f1 x ... x fm))(x).
CompositionReport verify_composition(const Tuple& x, const std::vector<PHFunction>& fs,
                                     const PHFunction& g, const Rational& eps,
                                     const ApproxOptions& opt = {});

struct ContractivityReport {
  LatticeElement unit;
  bool unit_identity = false;
  Rational norm{};
  Rational bound{};
  bool pass = false;
};

/// Checks |Phi_x(t)|_e <= sup-norm upper bound of t on the sphere.
ContractivityReport contractivity_check(const Tuple& x, const Term& t);

}  // namespace phcalc
