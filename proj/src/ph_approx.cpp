#include "phcalc/ph_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "phcalc/errors.hpp"

namespace phcalc {

// ---------------------------------------------------------------------------
// PHFunction

PHFunction PHFunction::coordinate(std::size_t arity, std::size_t index) {
  if (index >= arity) throw DimensionMismatch("coordinate index exceeds arity");
  return PHFunction(arity, Coordinate{index}, 1.0);
}

PHFunction PHFunction::lattice(MaxMinNF nf) {
  std::size_t n = nf.arity();
  double lip = nf.lipschitz().get_d();
  return PHFunction(n, LatticeTerm{std::move(nf)}, lip);
}

PHFunction PHFunction::lattice(const Term& t, const NormalizeOptions& opt) {
  return lattice(normalize(t, opt));
}

PHFunction PHFunction::pnorm(double p, std::vector<double> weights, int sign) {
  if (!(p >= 1) || !std::isfinite(p)) throw InvalidArgument("p-norm exponent must be finite and >= 1");
  if (weights.empty()) throw InvalidArgument("p-norm needs at least one weight");
  if (sign != 1 && sign != -1) throw InvalidArgument("p-norm sign must be +1 or -1");
  double acc = 0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidArgument("p-norm weights must be finite");
    acc += std::pow(std::fabs(w), p);
  }
  // |(w t)|_p - |(w u)|_p <= |w|_p |t - u|_inf; rounded up a hair.
  double lip = std::pow(acc, 1.0 / p) * (1 + 1e-12);
  std::size_t n = weights.size();
  return PHFunction(n, PNorm{p, std::move(weights), sign}, lip);
}

PHFunction PHFunction::euclidean(std::size_t arity) {
  return pnorm(2.0, std::vector<double>(arity, 1.0));
}

PHFunction PHFunction::black_box(std::size_t arity,
                                 std::function<double(std::span<const double>)> eval,
                                 double lipschitz, std::string name) {
  if (arity == 0) throw InvalidArgument("arity must be positive");
  if (!(lipschitz >= 0) || !std::isfinite(lipschitz))
    throw InvalidLipschitz("declared Lipschitz constant must be finite and nonnegative");
  return PHFunction(arity, BlackBox{std::move(eval), std::move(name)}, lipschitz);
}

double PHFunction::eval(std::span<const double> point) const {
  if (point.size() != arity_)
    throw DimensionMismatch("point has dimension " + std::to_string(point.size()) +
                            ", function arity is " + std::to_string(arity_));
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Coordinate>) {
          return point[k.index];
        } else if constexpr (std::is_same_v<K, LatticeTerm>) {
          return k.nf.eval(point);
        } else if constexpr (std::is_same_v<K, PNorm>) {
          double scale = 0;
          for (std::size_t i = 0; i < point.size(); ++i)
            scale = std::max(scale, std::fabs(k.weights[i] * point[i]));
          if (scale == 0) return 0.0;
          double acc = 0;
          for (std::size_t i = 0; i < point.size(); ++i)
            acc += std::pow(std::fabs(k.weights[i] * point[i]) / scale, k.p);
          return k.sign * scale * std::pow(acc, 1.0 / k.p);
        } else if constexpr (std::is_same_v<K, BlackBox>) {
          return k.eval(point);
        } else {
          std::vector<double> inner;
          inner.reserve(k.inner.size());
          for (const auto& f : k.inner) inner.push_back(f.eval(point));
          return k.outer->eval(inner);
        }
      },
      kind_);
}

bool PHFunction::is_exact() const {
  if (std::holds_alternative<Coordinate>(kind_) || std::holds_alternative<LatticeTerm>(kind_))
    return true;
  if (const auto* c = std::get_if<Composite>(&kind_)) {
    if (!c->outer->is_exact()) return false;
    return std::all_of(c->inner.begin(), c->inner.end(),
                       [](const PHFunction& f) { return f.is_exact(); });
  }
  return false;
}

MaxMinNF PHFunction::lattice_form(const NormalizeOptions& opt) const {
  if (const auto* c = std::get_if<Coordinate>(&kind_)) return MaxMinNF::coordinate(arity_, c->index);
  if (const auto* l = std::get_if<LatticeTerm>(&kind_)) return l->nf;
  if (const auto* c = std::get_if<Composite>(&kind_); c && is_exact()) {
    std::vector<MaxMinNF> inner;
    for (const auto& f : c->inner) inner.push_back(f.lattice_form(opt));
    return substitute(c->outer->lattice_form(opt), inner, opt);
  }
  throw UnsupportedKind(describe() + " has no exact lattice form");
}

Rational PHFunction::eval_exact(std::span<const Rational> point) const {
  if (point.size() != arity_) throw DimensionMismatch("point dimension differs from arity");
  if (const auto* c = std::get_if<Coordinate>(&kind_)) return point[c->index];
  if (const auto* l = std::get_if<LatticeTerm>(&kind_)) return l->nf.eval(point);
  if (const auto* c = std::get_if<Composite>(&kind_); c && is_exact()) {
    std::vector<Rational> inner;
    for (const auto& f : c->inner) inner.push_back(f.eval_exact(point));
    return c->outer->eval_exact(inner);
  }
  throw UnsupportedKind(describe() + " cannot be evaluated exactly");
}

std::string PHFunction::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Coordinate>) {
          os << "p" << (k.index + 1);
        } else if constexpr (std::is_same_v<K, LatticeTerm>) {
          os << "lattice[" << k.nf.clauses().size() << " clauses]";
        } else if constexpr (std::is_same_v<K, PNorm>) {
          os << (k.sign < 0 ? "-" : "") << "pnorm(p=" << k.p << ")";
        } else if constexpr (std::is_same_v<K, BlackBox>) {
          os << k.name;
        } else {
          os << k.outer->describe() << " o (";
          for (std::size_t i = 0; i < k.inner.size(); ++i)
            os << (i ? ", " : "") << k.inner[i].describe();
          os << ")";
        }
      },
      kind_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Interpolation

namespace {

bool on_sphere(const RationalPoint& p) { return linf_norm(p) == 1; }

Rational dot(const RationalPoint& a, const RationalPoint& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool is_antipodal(const RationalPoint& s, const RationalPoint& t) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != -t[i]) return false;
  return true;
}

}  // namespace

MaxMinNF pairwise_interpolant(const RationalPoint& s, const RationalPoint& t, const Rational& a,
                              const Rational& b, const NormalizeOptions& opt) {
  if (s.size() != t.size() || s.empty()) throw DimensionMismatch("interpolation points differ in dimension");
  if (!on_sphere(s) || !on_sphere(t)) throw InvalidArgument("interpolation points must lie on the sphere");
  if (s == t) throw InvalidPair("interpolation points coincide");
  const std::size_t n = s.size();

  if (is_antipodal(s, t)) {
    Rational ss = dot(s, s);
    LinearForm l{std::vector<Rational>(n)};
    for (std::size_t i = 0; i < n; ++i) l.coeffs[i] = s[i] / ss;
    MaxMinNF zero = MaxMinNF::zero(n);
    MaxMinNF up = nf_join(MaxMinNF::form(l), zero, opt);
    MaxMinNF down = nf_join(MaxMinNF::form(Rational(-1) * l), zero, opt);
    return nf_add(nf_scale(a, up, opt), nf_scale(b, down, opt), opt);
  }

  // Two distinct sphere points that are not antipodal are independent.
  Rational ss = dot(s, s), st = dot(s, t), tt = dot(t, t);
  Rational det = ss * tt - st * st;
  Rational alpha = (a * tt - b * st) / det;
  Rational beta = (b * ss - a * st) / det;
  LinearForm l{std::vector<Rational>(n)};
  for (std::size_t i = 0; i < n; ++i) l.coeffs[i] = alpha * s[i] + beta * t[i];
  return MaxMinNF::form(std::move(l));
}

// ---------------------------------------------------------------------------
// Approximation

namespace {

double linf_dist(std::span<const double> a, std::span<const double> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

double ddot(std::span<const double> a, std::span<const double> b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Floating stand-in for an interpolant, used only to rank candidates.
struct CandidateForm {
  bool antipodal = false;
  std::vector<double> coeffs;  // linear form, or l = s/(s.s) when antipodal
  double a = 0, b = 0;
  double l1 = 0;

  double eval(std::span<const double> p) const {
    double v = ddot(coeffs, p);
    if (!antipodal) return v;
    return a * std::max(v, 0.0) + b * std::max(-v, 0.0);
  }
};

CandidateForm candidate(std::span<const double> s, std::span<const double> t, double a, double b,
                        bool antipodal) {
  CandidateForm c;
  const std::size_t n = s.size();
  c.coeffs.resize(n);
  if (antipodal) {
    double ss = ddot(s, s);
    for (std::size_t i = 0; i < n; ++i) c.coeffs[i] = s[i] / ss;
    c.antipodal = true;
    c.a = a;
    c.b = b;
    double l1 = 0;
    for (double v : c.coeffs) l1 += std::fabs(v);
    c.l1 = (std::fabs(a) + std::fabs(b)) * l1;
    return c;
  }
  double ss = ddot(s, s), st = ddot(s, t), tt = ddot(t, t);
  double det = ss * tt - st * st;
  double alpha = (a * tt - b * st) / det;
  double beta = (b * ss - a * st) / det;
  for (std::size_t i = 0; i < n; ++i) {
    c.coeffs[i] = alpha * s[i] + beta * t[i];
    c.l1 += std::fabs(c.coeffs[i]);
  }
  return c;
}

void audit_target(const PHFunction& g, const SphereNet& net, const std::vector<double>& gd) {
  const bool trusted = std::holds_alternative<PHFunction::PNorm>(g.kind());
  const double lip = g.lipschitz();
  auto check_pair = [&](std::size_t i, std::size_t j) {
    double d = linf_dist(net.points_d[i], net.points_d[j]);
    double tol = 1e-9 * (1 + std::fabs(gd[i]) + std::fabs(gd[j]));
    if (std::fabs(gd[i] - gd[j]) > lip * d + tol)
      throw InvalidLipschitz(g.describe() + " violates its declared Lipschitz constant " +
                             std::to_string(lip) + " on the approximation net");
  };
  const std::size_t N = gd.size();
  if (N <= 3000) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) check_pair(i, j);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    for (std::size_t k = 0; k + 1 < N; ++k) check_pair(k, k + 1);
    for (std::size_t k = 0; k < 4 * N; ++k) check_pair(pick(rng), pick(rng));
  }
  if (trusted) return;
  for (std::size_t i = 0; i < N; ++i) {
    for (double lambda : {0.0, 0.5, 2.0}) {
      std::vector<double> scaled = net.points_d[i];
      for (auto& v : scaled) v *= lambda;
      double lhs = g.eval(scaled);
      double rhs = lambda * gd[i];
      if (!std::isfinite(lhs) || std::fabs(lhs - rhs) > 1e-9 * (1 + std::fabs(rhs)))
        throw InvalidArgument(g.describe() + " is not positively homogeneous on the net");
    }
  }
}

double net_defect(const MaxMinNF& approximant, const PHFunction& g, const SphereNet& net) {
  double defect = 0;
  for (const auto& p : net.points_d)
    defect = std::max(defect, std::fabs(approximant.eval(p) - g.eval(p)));
  return defect;
}

struct LevelResult {
  MaxMinNF approximant;
  std::size_t interpolants;
};

// Each f_s may exceed g by up to `allowance` on the net. Without it, points
// near -s force steep forms whose Lipschitz constants swamp the certificate.
LevelResult build_level(const SphereNet& net, const std::vector<double>& gd, double allowance,
                        const NormalizeOptions& nopt) {
  const std::size_t N = net.points.size();
  const auto& P = net.points_d;
  std::vector<Rational> gq(N);
  for (std::size_t i = 0; i < N; ++i) gq[i] = from_double(gd[i]);

  std::vector<std::vector<std::size_t>> chosen(N);
  std::vector<double> cur(N);
  for (std::size_t s = 0; s < N; ++s) {
    std::fill(cur.begin(), cur.end(), std::numeric_limits<double>::infinity());
    auto& picks = chosen[s];
    for (;;) {
      // Pick the worst net point where the current meet still exceeds g.
      std::size_t target = N;
      double worst = 0;
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < N; ++t) {
        if (t == s) continue;
        double tol = allowance + 1e-12 * (1 + std::fabs(gd[t]));
        double v = cur[t] - gd[t];
        if (!(v > tol)) continue;
        if (picks.empty()) {
          double d = linf_dist(P[s], P[t]);
          if (d < nearest) {
            nearest = d;
            target = t;
          }
        } else if (v > worst) {
          worst = v;
          target = t;
        }
      }
      if (target == N) break;

      // Cheapest interpolant (smallest slope) that fixes the target.
      std::size_t best = target;
      double best_l1 = std::numeric_limits<double>::infinity();
      CandidateForm best_form;
      for (std::size_t u = 0; u < N; ++u) {
        if (u == s) continue;
        bool anti = true;
        for (std::size_t i = 0; i < net.arity; ++i)
          if (P[u][i] != -P[s][i]) anti = false;
        CandidateForm c = candidate(P[s], P[u], gd[s], gd[u], anti);
        if (c.eval(P[target]) > gd[target] + allowance + 1e-12 * (1 + std::fabs(gd[target])))
          continue;
        if (c.l1 < best_l1) {
          best_l1 = c.l1;
          best = u;
          best_form = std::move(c);
        }
      }
      if (!std::isfinite(best_l1)) {
        bool anti = true;
        for (std::size_t i = 0; i < net.arity; ++i)
          if (P[target][i] != -P[s][i]) anti = false;
        best_form = candidate(P[s], P[target], gd[s], gd[target], anti);
      }
      picks.push_back(best);
      for (std::size_t t = 0; t < N; ++t) cur[t] = std::min(cur[t], best_form.eval(P[t]));
      // The exact interpolant hits g at its second point even when the
      // floating stand-in is off by rounding.
      cur[best] = std::min(cur[best], gd[best]);
      if (picks.size() > N) throw Error("interpolant selection failed to converge");
    }
  }

  std::vector<Clause> clauses;
  std::size_t interpolants = 0;
  for (std::size_t s = 0; s < N; ++s) {
    // Meets are accumulated unpruned and pruned once per net point; pruning
    // after every meet is quadratic in the clause length.
    NormalizeOptions raw = nopt;
    raw.prune = false;
    std::optional<MaxMinNF> fs;
    for (std::size_t u : chosen[s]) {
      MaxMinNF h = pairwise_interpolant(net.points[s], net.points[u], gq[s], gq[u], nopt);
      ++interpolants;
      fs = fs ? nf_meet(*fs, h, raw) : h;
    }
    if (fs) fs = simplify(*fs, nopt);
    if (!fs) {
      // Single-point net (n = 1 has two points, so this is only s alone).
      fs = MaxMinNF::zero(net.arity);
    }
    for (const auto& c : fs->clauses()) clauses.push_back(c);
  }
  NormalizeOptions flat = nopt;
  flat.prune = false;
  return {simplify(MaxMinNF(net.arity, std::move(clauses)), flat), interpolants};
}

// f_s(t) = g(s) * (l(t) v 0) - M * |t - (l(t) v 0) s|_inf with l(t) = s_k t_k
// for a face index k of s. With M >= Lip(g) on R^n, homogeneity gives
// f_s <= g everywhere, and f_s(s) = g(s).
MaxMinNF lower_cone(const RationalPoint& s, const Rational& gs, const Rational& M,
                    const NormalizeOptions& nopt) {
  const std::size_t n = s.size();
  std::size_t k = 0;
  while (abs(s[k]) != 1) ++k;
  const Term lambda = Term::positive_part(Term::scale(s[k], Term::var(n, k)));
  std::optional<Term> dist;
  for (std::size_t i = 0; i < n; ++i) {
    Term d = Term::abs(Term::sub(Term::var(n, i), Term::scale(s[i], lambda)));
    dist = dist ? Term::join(*dist, d) : d;
  }
  return normalize(Term::sub(Term::scale(gs, lambda), Term::scale(M, *dist)), nopt);
}

LevelResult build_cone_level(const SphereNet& net, const std::vector<double>& gd, double lip,
                             const NormalizeOptions& nopt) {
  const Rational M = from_double(lip * (1 + 1e-12));
  std::vector<Clause> clauses;
  for (std::size_t s = 0; s < net.points.size(); ++s) {
    MaxMinNF f = lower_cone(net.points[s], from_double(gd[s]), M, nopt);
    for (const auto& c : f.clauses()) clauses.push_back(c);
  }
  NormalizeOptions flat = nopt;
  flat.prune = false;
  return {simplify(MaxMinNF(net.arity, std::move(clauses)), flat), net.points.size()};
}

}  // namespace

ApproxCertificate krivine_approximate(const PHFunction& g, double eps, const ApproxOptions& opt) {
  if (!(eps > 0)) throw InvalidArgument("approximation tolerance must be positive");
  const std::size_t n = g.arity();

  if (g.is_exact()) {
    MaxMinNF nf = g.lattice_form(opt.normalize);
    ApproxCertificate cert{g, nf};
    cert.net_arity = n;
    cert.net_mesh = 2;
    cert.covering_radius = 0;
    cert.target_lipschitz = g.lipschitz();
    cert.approximant_lipschitz = nf.lipschitz().get_d();
    cert.clause_count = nf.clauses().size();
    cert.exact = true;
    return cert;
  }

  const double lip_g = g.lipschitz();
  std::size_t level = 0;
  // Levels whose covering radius alone already exceeds eps cannot succeed.
  if (n > 1)
    while (level < opt.max_level && lip_g * std::ldexp(1.0, -static_cast<int>(level)) > eps) ++level;

  bool use_cone = false;
  for (; level <= opt.max_level; ++level) {
    Rational mesh(2);
    mesh /= Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(level));
    if (sphere_net_size(n, mesh) > opt.point_cap)
      throw ResourceLimit("approximation to " + std::to_string(eps) + " needs a net finer than " +
                          std::to_string(opt.point_cap) + " points");
    SphereNet net = make_sphere_net(n, mesh, opt.point_cap);

    std::vector<double> gd(net.points.size());
    for (std::size_t i = 0; i < gd.size(); ++i) {
      gd[i] = g.eval(net.points_d[i]);
      if (!std::isfinite(gd[i])) throw InvalidArgument(g.describe() + " is not finite on the sphere");
    }
    audit_target(g, net, gd);

    LevelResult built = use_cone ? build_cone_level(net, gd, lip_g, opt.normalize)
                                 : build_level(net, gd, eps / 4, opt.normalize);
    ApproxCertificate cert{g, std::move(built.approximant)};
    if (use_cone) cert.construction = "cone";
    cert.net_arity = n;
    cert.net_mesh = mesh;
    cert.covering_radius = net.covering_radius;
    cert.net_points = net.points.size();
    cert.target_lipschitz = lip_g;
    cert.approximant_lipschitz = cert.approximant.lipschitz().get_d();
    cert.net_defect = net_defect(cert.approximant, g, net);
    cert.slack = kFloatSlack;
    cert.epsilon = cert.net_defect +
                   (cert.target_lipschitz + cert.approximant_lipschitz) *
                       net.covering_radius.get_d() +
                   cert.slack;
    cert.interpolant_count = built.interpolants;
    cert.clause_count = cert.approximant.clauses().size();
    cert.level = level;
    if (cert.epsilon <= eps) return cert;
    if (!use_cone && cert.approximant_lipschitz > 4 * lip_g + 1) {
      use_cone = true;
      --level;
    }
  }
  throw ResourceLimit("approximation did not reach " + std::to_string(eps) + " within " +
                      std::to_string(opt.max_level) + " refinements");
}

double replay_certificate(const ApproxCertificate& cert) {
  if (cert.exact) return 0.0;
  SphereNet net = make_sphere_net(cert.net_arity, cert.net_mesh,
                                  std::numeric_limits<std::size_t>::max());
  double defect = net_defect(cert.approximant, cert.target, net);
  return defect +
         (cert.target.lipschitz() + cert.approximant.lipschitz().get_d()) *
             net.covering_radius.get_d() +
         cert.slack;
}

// ---------------------------------------------------------------------------
// Products and composition

ProductMap::ProductMap(std::vector<PHFunction> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("product map needs at least one component");
  arity_ = components_.front().arity();
  for (const auto& f : components_)
    if (f.arity() != arity_) throw DimensionMismatch("product map components differ in arity");
}

std::vector<double> ProductMap::eval(std::span<const double> point) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& f : components_) out.push_back(f.eval(point));
  return out;
}

std::vector<Rational> ProductMap::eval_exact(std::span<const Rational> point) const {
  std::vector<Rational> out;
  out.reserve(components_.size());
  for (const auto& f : components_) out.push_back(f.eval_exact(point));
  return out;
}

ProductMap product_map(std::vector<PHFunction> components) {
  return ProductMap(std::move(components));
}

MaxMinNF substitute(const MaxMinNF& g, const std::vector<MaxMinNF>& fs,
                    const NormalizeOptions& opt) {
  if (fs.size() != g.arity())
    throw DimensionMismatch("substitution needs " + std::to_string(g.arity()) + " functions, got " +
                            std::to_string(fs.size()));
  const std::size_t n = fs.front().arity();
  for (const auto& f : fs)
    if (f.arity() != n) throw DimensionMismatch("substituted functions differ in arity");

  auto form_image = [&](const LinearForm& lf) {
    std::optional<MaxMinNF> acc;
    for (std::size_t k = 0; k < lf.arity(); ++k) {
      if (sgn(lf.coeffs[k]) == 0) continue;
      MaxMinNF term = nf_scale(lf.coeffs[k], fs[k], opt);
      acc = acc ? nf_add(*acc, term, opt) : term;
    }
    return acc ? *acc : MaxMinNF::zero(n);
  };
  std::optional<MaxMinNF> out;
  for (const auto& clause : g.clauses()) {
    MaxMinNF c = form_image(clause.front());
    for (std::size_t j = 1; j < clause.size(); ++j) c = nf_meet(c, form_image(clause[j]), opt);
    out = out ? nf_join(*out, c, opt) : c;
  }
  return *out;
}

PHFunction compose_ph(const PHFunction& g, const std::vector<PHFunction>& fs,
                      const NormalizeOptions& opt) {
  if (fs.size() != g.arity())
    throw DimensionMismatch("outer function has arity " + std::to_string(g.arity()) + " but " +
                            std::to_string(fs.size()) + " inner functions were given");
  ProductMap inner(fs);  // validates common arity

  if (const auto* c = std::get_if<PHFunction::Coordinate>(&g.kind())) return fs[c->index];

  const bool all_exact =
      g.is_exact() && std::all_of(fs.begin(), fs.end(), [](const PHFunction& f) { return f.is_exact(); });
  if (all_exact) {
    std::vector<MaxMinNF> forms;
    for (const auto& f : fs) forms.push_back(f.lattice_form(opt));
    return PHFunction::lattice(substitute(g.lattice_form(opt), forms, opt));
  }
  double inner_lip = 0;
  for (const auto& f : fs) inner_lip = std::max(inner_lip, f.lipschitz());
  return PHFunction(inner.arity(),
                    PHFunction::Composite{std::make_shared<const PHFunction>(g), fs},
                    g.lipschitz() * inner_lip);
}

}  // namespace phcalc
