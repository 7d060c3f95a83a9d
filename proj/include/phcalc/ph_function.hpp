#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "phcalc/rational.hpp"
#include "phcalc/term.hpp"

namespace phcalc {

/// A positively homogeneous continuous function R^n -> R.
///
/// `lipschitz()` is a Lipschitz constant with respect to the l-infinity metric
/// on all of R^n. For positively homogeneous functions this bounds the
/// constant on the sphere as well, and it is the form that composes.
class PHFunction {
 public:
  struct Coordinate {
    std::size_t index;
  };
  struct LatticeTerm {
    MaxMinNF nf;
  };
  /// sign * (sum_i |w_i t_i|^p)^(1/p), p >= 1.
  struct PNorm {
    double p;
    std::vector<double> weights;
    int sign = 1;
  };
  struct BlackBox {
    std::function<double(std::span<const double>)> eval;
    std::string name;
  };
  struct Composite {
    std::shared_ptr<const PHFunction> outer;
    std::vector<PHFunction> inner;
  };
  using Kind = std::variant<Coordinate, LatticeTerm, PNorm, BlackBox, Composite>;

  static PHFunction coordinate(std::size_t arity, std::size_t index);
  static PHFunction lattice(MaxMinNF nf);
  static PHFunction lattice(const Term& t, const NormalizeOptions& opt = {});
  static PHFunction pnorm(double p, std::vector<double> weights, int sign = 1);
  static PHFunction euclidean(std::size_t arity);
  /// Homogeneity and the Lipschitz claim are the caller's; approximation
  /// audits them on its net.
  static PHFunction black_box(std::size_t arity,
                              std::function<double(std::span<const double>)> eval,
                              double lipschitz, std::string name = "blackbox");

  std::size_t arity() const { return arity_; }
  const Kind& kind() const { return kind_; }
  double lipschitz() const { return lipschitz_; }

  double eval(std::span<const double> point) const;

  /// Coordinates, lattice terms and compositions of those.
  bool is_exact() const;
  /// Exact normal form; only for is_exact() functions.
  MaxMinNF lattice_form(const NormalizeOptions& opt = {}) const;
  Rational eval_exact(std::span<const Rational> point) const;

  std::string describe() const;

 private:
  PHFunction(std::size_t arity, Kind kind, double lipschitz)
      : arity_(arity), kind_(std::move(kind)), lipschitz_(lipschitz) {}
  friend PHFunction compose_ph(const PHFunction&, const std::vector<PHFunction>&,
                               const NormalizeOptions&);

  std::size_t arity_;
  Kind kind_;
  double lipschitz_;
};

/// Certified approximation of a PHFunction by a max-min normal form.
///
/// epsilon = net_defect + (target_lipschitz + approximant_lipschitz) *
/// covering_radius + slack, where net_defect is the largest deviation on the
/// net. Any sphere point lies within covering_radius of a net point on the
/// same face, which bounds the deviation everywhere on the sphere.
struct ApproxCertificate {
  PHFunction target;
  MaxMinNF approximant;
  std::size_t net_arity = 0;
  Rational net_mesh{};
  Rational covering_radius{};
  std::size_t net_points = 0;
  double target_lipschitz = 0;
  double approximant_lipschitz = 0;
  double net_defect = 0;
  double slack = 0;
  double epsilon = 0;
  std::size_t interpolant_count = 0;
  std::size_t clause_count = 0;
  std::size_t level = 0;
  bool exact = false;
  /// "pairwise" (meets of two-point interpolants) or "cone" (joins of the
  /// lower cones g(s) * (l_s v 0) - M * dist(t, ray s)).
  std::string construction = "pairwise";
};

/// Float contamination absorbed by every inexact certificate.
constexpr double kFloatSlack = 1e-9;

struct ApproxOptions {
  std::size_t point_cap = 20'000;
  std::size_t max_level = 16;
  NormalizeOptions normalize;
};

/// An element h of the lattice generated by the coordinates with h(s) = a and
/// h(t) = b. Linearly independent points give the minimum-norm linear form;
/// antipodal points give a*(l v 0) + b*((-l) v 0) with l(s) = 1.
MaxMinNF pairwise_interpolant(const RationalPoint& s, const RationalPoint& t, const Rational& a,
                              const Rational& b, const NormalizeOptions& opt = {});

/// Join over net points s of the meet of interpolants through (s, g(s)),
/// with the mesh refined until the certified error is at most eps. When the
/// interpolants turn steep (typical for concave targets), falls back to
/// joining lower cones through each (s, g(s)), whose slopes stay at Lip(g).
ApproxCertificate krivine_approximate(const PHFunction& g, double eps,
                                      const ApproxOptions& opt = {});

/// Recomputes epsilon from the certificate's stored data and net parameters.
double replay_certificate(const ApproxCertificate& cert);

/// t -> (f_1(t), ..., f_m(t)).
class ProductMap {
 public:
  explicit ProductMap(std::vector<PHFunction> components);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return components_.size(); }
  const std::vector<PHFunction>& components() const { return components_; }

  std::vector<double> eval(std::span<const double> point) const;
  std::vector<Rational> eval_exact(std::span<const Rational> point) const;

 private:
  std::size_t arity_;
  std::vector<PHFunction> components_;
};

ProductMap product_map(std::vector<PHFunction> components);

/// g o (f_1 x ... x f_m). Symbolic (exact normal form) when everything is
/// exact; otherwise a composite evaluator with Lipschitz bound
/// Lip(g) * max_i Lip(f_i).
PHFunction compose_ph(const PHFunction& g, const std::vector<PHFunction>& fs,
                      const NormalizeOptions& opt = {});

/// Substitutes the normal forms `fs` for the variables of `g`.
MaxMinNF substitute(const MaxMinNF& g, const std::vector<MaxMinNF>& fs,
                    const NormalizeOptions& opt = {});

}  // namespace phcalc
