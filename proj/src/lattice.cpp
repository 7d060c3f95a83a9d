#include "phcalc/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "phcalc/errors.hpp"

namespace phcalc {

// ---------------------------------------------------------------------------
// PLFunc

namespace {

std::vector<Breakpoint> canonical(std::vector<Breakpoint> pts) {
  std::vector<Breakpoint> out;
  out.reserve(pts.size());
  for (auto& p : pts) {
    while (out.size() >= 2) {
      const auto& a = out[out.size() - 2];
      const auto& b = out.back();
      if ((b.y - a.y) * (p.x - b.x) == (p.y - b.y) * (b.x - a.x)) {
        out.pop_back();
      } else {
        break;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Rational> merged_abscissae(const PLFunc& a, const PLFunc& b) {
  std::vector<Rational> xs;
  xs.reserve(a.breakpoints().size() + b.breakpoints().size());
  for (const auto& p : a.breakpoints()) xs.push_back(p.x);
  for (const auto& p : b.breakpoints()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::string literal(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

template <class Op>
PLFunc pl_pointwise(const PLFunc& a, const PLFunc& b, Op op) {
  std::vector<Breakpoint> pts;
  for (const auto& x : merged_abscissae(a, b)) pts.push_back({x, op(a.eval(x), b.eval(x))});
  return PLFunc(std::move(pts));
}

// Max (or min) of two PL functions, inserting the crossing points.
PLFunc pl_extremum(const PLFunc& a, const PLFunc& b, bool take_max) {
  auto xs = merged_abscissae(a, b);
  std::vector<Breakpoint> pts;
  pts.reserve(2 * xs.size());
  Rational prev_x, prev_d;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational va = a.eval(xs[i]), vb = b.eval(xs[i]);
    Rational d = va - vb;
    if (i > 0 && sgn(prev_d) * sgn(d) < 0) {
      Rational xc = prev_x + (xs[i] - prev_x) * prev_d / (prev_d - d);
      pts.push_back({xc, a.eval(xc)});
    }
    bool a_wins = take_max ? sgn(d) >= 0 : sgn(d) <= 0;
    pts.push_back({xs[i], a_wins ? va : vb});
    prev_x = xs[i];
    prev_d = d;
  }
  return PLFunc(std::move(pts));
}

}  // namespace

PLFunc::PLFunc(std::vector<Breakpoint> points) {
  if (points.size() < 2) throw InvalidArgument("PL function needs at least two breakpoints");
  if (points.front().x != 0 || points.back().x != 1)
    throw InvalidArgument("PL breakpoints must start at 0 and end at 1");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1].x < points[i].x))
      throw InvalidArgument("PL breakpoint abscissae must be strictly increasing");
  pts_ = canonical(std::move(points));
}

PLFunc PLFunc::constant(const Rational& c) { return PLFunc({{0, c}, {1, c}}); }
PLFunc PLFunc::identity() { return PLFunc({{0, 0}, {1, 1}}); }

Rational PLFunc::eval(const Rational& t) const {
  if (t < 0 || t > 1) throw InvalidArgument("PL functions live on [0,1]");
  auto it = std::lower_bound(pts_.begin(), pts_.end(), t,
                             [](const Breakpoint& p, const Rational& v) { return p.x < v; });
  if (it->x == t) return it->y;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.y + (hi.y - lo.y) * (t - lo.x) / (hi.x - lo.x);
}

double PLFunc::eval(double t) const {
  if (t < 0 || t > 1) throw InvalidArgument("PL functions live on [0,1]");
  std::size_t i = 1;
  while (i + 1 < pts_.size() && pts_[i].x.get_d() < t) ++i;
  double x0 = pts_[i - 1].x.get_d(), x1 = pts_[i].x.get_d();
  double y0 = pts_[i - 1].y.get_d(), y1 = pts_[i].y.get_d();
  return y0 + (y1 - y0) * (t - x0) / (x1 - x0);
}

Rational PLFunc::initial_slope() const {
  return (pts_[1].y - pts_[0].y) / (pts_[1].x - pts_[0].x);
}

Rational PLFunc::sup_norm() const {
  Rational m = 0;
  for (const auto& p : pts_) m = max(m, abs(p.y));
  return m;
}

Rational PLFunc::flat_prefix() const {
  return pts_[1].y == pts_[0].y ? pts_[1].x : Rational(0);
}

PLFunc pl_add(const PLFunc& a, const PLFunc& b) {
  return pl_pointwise(a, b, [](const Rational& u, const Rational& v) { return Rational(u + v); });
}

PLFunc pl_sub(const PLFunc& a, const PLFunc& b) {
  return pl_pointwise(a, b, [](const Rational& u, const Rational& v) { return Rational(u - v); });
}

PLFunc pl_scale(const Rational& s, const PLFunc& a) {
  std::vector<Breakpoint> pts = a.breakpoints();
  for (auto& p : pts) p.y *= s;
  return PLFunc(std::move(pts));
}

PLFunc pl_join(const PLFunc& a, const PLFunc& b) { return pl_extremum(a, b, true); }
PLFunc pl_meet(const PLFunc& a, const PLFunc& b) { return pl_extremum(a, b, false); }
PLFunc pl_abs(const PLFunc& a) { return pl_join(a, pl_scale(-1, a)); }

bool pl_leq(const PLFunc& a, const PLFunc& b) {
  for (const auto& x : merged_abscissae(a, b))
    if (a.eval(x) > b.eval(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Models

Model model_of(const LatticeElement& x) { return static_cast<Model>(x.index()); }

std::string model_name(Model m) {
  switch (m) {
    case Model::finite: return "finite";
    case Model::pl: return "pl";
    case Model::eventually_const: return "ecpl";
    case Model::germ: return "germ";
    case Model::lex: return "lex";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  if (name == "finite") return Model::finite;
  if (name == "pl") return Model::pl;
  if (name == "ecpl" || name == "eventually-const") return Model::eventually_const;
  if (name == "germ") return Model::germ;
  if (name == "lex") return Model::lex;
  throw ParseError("unknown model '" + std::string(name) + "'");
}

bool is_archimedean(Model m) {
  return m == Model::finite || m == Model::pl || m == Model::eventually_const;
}

EventuallyConstPL make_eventually_const(PLFunc f) {
  Rational d = f.flat_prefix();
  if (sgn(d) <= 0) throw InvalidArgument("PL function is not constant near 0");
  return {std::move(f), d};
}

namespace {

void require_same_model(const LatticeElement& x, const LatticeElement& y) {
  if (x.index() != y.index())
    throw ModelMismatch("operands come from different models: " + model_name(model_of(x)) +
                        " and " + model_name(model_of(y)));
  if (const auto* a = std::get_if<FiniteVec>(&x)) {
    const auto& b = std::get<FiniteVec>(y);
    if (a->values.size() != b.values.size())
      throw DimensionMismatch("finite vectors of length " + std::to_string(a->values.size()) +
                              " and " + std::to_string(b.values.size()));
  }
}

template <class VecOp, class PLOp, class LexOp>
LatticeElement binary_op(const LatticeElement& x, const LatticeElement& y, VecOp vec_op,
                         PLOp pl_op, LexOp lex_op) {
  require_same_model(x, y);
  switch (model_of(x)) {
    case Model::finite: {
      const auto& a = std::get<FiniteVec>(x).values;
      const auto& b = std::get<FiniteVec>(y).values;
      FiniteVec r;
      r.values.reserve(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) r.values.push_back(vec_op(a[i], b[i]));
      return r;
    }
    case Model::pl: return pl_op(std::get<PLFunc>(x), std::get<PLFunc>(y));
    case Model::eventually_const:
      return make_eventually_const(
          pl_op(std::get<EventuallyConstPL>(x).f, std::get<EventuallyConstPL>(y).f));
    case Model::germ:
      return GermClass{pl_op(std::get<GermClass>(x).rep, std::get<GermClass>(y).rep)};
    case Model::lex: return lex_op(std::get<LexVec>(x), std::get<LexVec>(y));
  }
  throw ModelMismatch("unknown model");
}

bool lex_leq(const LexVec& a, const LexVec& b) {
  return a.first < b.first || (a.first == b.first && a.second <= b.second);
}

bool germ_leq(const PLFunc& a, const PLFunc& b) {
  PLFunc d = pl_sub(b, a);
  int s0 = sgn(d.value_at_zero());
  return s0 > 0 || (s0 == 0 && sgn(d.initial_slope()) >= 0);
}

bool germ_equal(const PLFunc& a, const PLFunc& b) {
  return a.value_at_zero() == b.value_at_zero() && a.initial_slope() == b.initial_slope();
}

}  // namespace

LatticeElement lat_add(const LatticeElement& x, const LatticeElement& y) {
  return binary_op(
      x, y, [](const Rational& a, const Rational& b) { return Rational(a + b); }, pl_add,
      [](const LexVec& a, const LexVec& b) {
        return LexVec{a.first + b.first, a.second + b.second};
      });
}

LatticeElement lat_sub(const LatticeElement& x, const LatticeElement& y) {
  return lat_add(x, lat_neg(y));
}

LatticeElement lat_scale(const LatticeElement& x, const Rational& s) {
  switch (model_of(x)) {
    case Model::finite: {
      FiniteVec r = std::get<FiniteVec>(x);
      for (auto& v : r.values) v *= s;
      return r;
    }
    case Model::pl: return pl_scale(s, std::get<PLFunc>(x));
    case Model::eventually_const:
      return make_eventually_const(pl_scale(s, std::get<EventuallyConstPL>(x).f));
    case Model::germ: return GermClass{pl_scale(s, std::get<GermClass>(x).rep)};
    case Model::lex: {
      const auto& v = std::get<LexVec>(x);
      return LexVec{v.first * s, v.second * s};
    }
  }
  throw ModelMismatch("unknown model");
}

LatticeElement lat_neg(const LatticeElement& x) { return lat_scale(x, -1); }

LatticeElement lat_join(const LatticeElement& x, const LatticeElement& y) {
  return binary_op(
      x, y, [](const Rational& a, const Rational& b) { return max(a, b); }, pl_join,
      [](const LexVec& a, const LexVec& b) { return lex_leq(a, b) ? b : a; });
}

LatticeElement lat_meet(const LatticeElement& x, const LatticeElement& y) {
  return binary_op(
      x, y, [](const Rational& a, const Rational& b) { return min(a, b); }, pl_meet,
      [](const LexVec& a, const LexVec& b) { return lex_leq(a, b) ? a : b; });
}

LatticeElement lat_abs(const LatticeElement& x) { return lat_join(x, lat_neg(x)); }

bool lat_leq(const LatticeElement& x, const LatticeElement& y) {
  require_same_model(x, y);
  switch (model_of(x)) {
    case Model::finite: {
      const auto& a = std::get<FiniteVec>(x).values;
      const auto& b = std::get<FiniteVec>(y).values;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
      return true;
    }
    case Model::pl: return pl_leq(std::get<PLFunc>(x), std::get<PLFunc>(y));
    case Model::eventually_const:
      return pl_leq(std::get<EventuallyConstPL>(x).f, std::get<EventuallyConstPL>(y).f);
    case Model::germ: return germ_leq(std::get<GermClass>(x).rep, std::get<GermClass>(y).rep);
    case Model::lex: return lex_leq(std::get<LexVec>(x), std::get<LexVec>(y));
  }
  return false;
}

bool lat_equal(const LatticeElement& x, const LatticeElement& y) {
  require_same_model(x, y);
  switch (model_of(x)) {
    case Model::finite: return std::get<FiniteVec>(x) == std::get<FiniteVec>(y);
    case Model::pl: return std::get<PLFunc>(x) == std::get<PLFunc>(y);
    case Model::eventually_const:
      return std::get<EventuallyConstPL>(x).f == std::get<EventuallyConstPL>(y).f;
    case Model::germ: return germ_equal(std::get<GermClass>(x).rep, std::get<GermClass>(y).rep);
    case Model::lex: return std::get<LexVec>(x) == std::get<LexVec>(y);
  }
  return false;
}

LatticeElement zero_like(const LatticeElement& x) {
  switch (model_of(x)) {
    case Model::finite:
      return FiniteVec{std::vector<Rational>(std::get<FiniteVec>(x).values.size())};
    case Model::pl: return PLFunc::constant(0);
    case Model::eventually_const: return make_eventually_const(PLFunc::constant(0));
    case Model::germ: return GermClass{PLFunc::constant(0)};
    case Model::lex: return LexVec{0, 0};
  }
  throw ModelMismatch("unknown model");
}

// ---------------------------------------------------------------------------
// Order-unit norm

OrderUnitContext make_order_unit(LatticeElement e) {
  if (!lat_leq(zero_like(e), e)) throw InvalidArgument("order unit must be positive");
  return {std::move(e)};
}

namespace {

Rational pl_unit_norm(const PLFunc& e, const PLFunc& x) {
  // On each piece where both are affine, |x|/e is monotone where e > 0, and
  // where e vanishes at an endpoint |x| must vanish there too; the supremum is
  // therefore attained at breakpoints.
  PLFunc ax = pl_abs(x);
  Rational best = 0;
  for (const auto& t : merged_abscissae(e, ax)) {
    Rational ev = e.eval(t), xv = ax.eval(t);
    if (sgn(ev) == 0) {
      if (sgn(xv) != 0)
        throw NotInIdeal("|x| is nonzero at t = " + literal(t) + " where the unit vanishes");
      continue;
    }
    best = max(best, Rational(xv / ev));
  }
  return best;
}

}  // namespace

Rational order_unit_norm(const OrderUnitContext& ctx, const LatticeElement& x) {
  require_same_model(ctx.unit, x);
  switch (model_of(x)) {
    case Model::finite: {
      const auto& e = std::get<FiniteVec>(ctx.unit).values;
      const auto& v = std::get<FiniteVec>(x).values;
      Rational best = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (sgn(e[i]) == 0) {
          if (sgn(v[i]) != 0)
            throw NotInIdeal("coordinate " + std::to_string(i + 1) +
                             " is nonzero where the unit vanishes");
          continue;
        }
        best = max(best, Rational(abs(v[i]) / e[i]));
      }
      return best;
    }
    case Model::pl: return pl_unit_norm(std::get<PLFunc>(ctx.unit), std::get<PLFunc>(x));
    case Model::eventually_const:
      return pl_unit_norm(std::get<EventuallyConstPL>(ctx.unit).f,
                          std::get<EventuallyConstPL>(x).f);
    case Model::germ:
    case Model::lex:
      throw NonArchimedean("the " + model_name(model_of(x)) +
                           " model is not Archimedean; |.|_e is only a seminorm there");
  }
  throw ModelMismatch("unknown model");
}

// ---------------------------------------------------------------------------
// Germs and X

GermClass quotient_Q(const PLFunc& f) { return GermClass{f}; }
PLFunc quotient_R(const GermClass& z) { return z.rep; }

MembershipX membership_X(const PLFunc& f) {
  MembershipX m;
  m.initial_slope = f.initial_slope();
  m.delta = f.flat_prefix();
  m.member = sgn(m.delta) > 0;
  return m;
}

// ---------------------------------------------------------------------------
// Text forms

namespace {

std::string pl_text(const PLFunc& f) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    const auto& p = f.breakpoints()[i];
    os << (i ? "," : "") << '(' << literal(p.x) << ',' << literal(p.y) << ')';
  }
  os << ']';
  return os.str();
}

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view s) : s_(s) {}

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c)
      throw ParseError("expected '" + std::string(1, c) + "' at offset " + std::to_string(pos_) +
                       " in '" + std::string(s_) + "'");
    ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void accept_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) == w) pos_ += w.size();
  }
  Rational number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == '/' ||
                                s_[pos_] == '.'))
      ++pos_;
    return parse_rational(s_.substr(start, pos_ - start));
  }
  void finish() {
    skip();
    if (pos_ != s_.size())
      throw ParseError("trailing characters in '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

PLFunc parse_pl(LiteralParser& p) {
  p.expect('[');
  std::vector<Breakpoint> pts;
  do {
    p.expect('(');
    Rational x = p.number();
    p.expect(',');
    Rational y = p.number();
    p.expect(')');
    pts.push_back({x, y});
  } while (p.accept(','));
  p.expect(']');
  return PLFunc(std::move(pts));
}

}  // namespace

std::string to_string(const LatticeElement& x) {
  switch (model_of(x)) {
    case Model::finite: {
      const auto& v = std::get<FiniteVec>(x).values;
      std::ostringstream os;
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << literal(v[i]);
      os << ']';
      return os.str();
    }
    case Model::pl: return "pl" + pl_text(std::get<PLFunc>(x));
    case Model::eventually_const: return "ecpl" + pl_text(std::get<EventuallyConstPL>(x).f);
    case Model::germ: return "germ" + pl_text(std::get<GermClass>(x).rep);
    case Model::lex: {
      const auto& v = std::get<LexVec>(x);
      return "(" + literal(v.first) + "," + literal(v.second) + ")";
    }
  }
  return "?";
}

LatticeElement parse_element(Model m, std::string_view text) {
  LiteralParser p(text);
  switch (m) {
    case Model::finite: {
      FiniteVec v;
      p.expect('[');
      if (!p.accept(']')) {
        do v.values.push_back(p.number());
        while (p.accept(','));
        p.expect(']');
      }
      p.finish();
      if (v.values.empty()) throw ParseError("finite vector literal is empty");
      return v;
    }
    case Model::lex: {
      p.expect('(');
      Rational a = p.number();
      p.expect(',');
      Rational b = p.number();
      p.expect(')');
      p.finish();
      return LexVec{a, b};
    }
    case Model::pl:
    case Model::eventually_const:
    case Model::germ: {
      p.accept_word("pl");
      p.accept_word("ecpl");
      p.accept_word("germ");
      PLFunc f = parse_pl(p);
      p.finish();
      if (m == Model::pl) return f;
      if (m == Model::germ) return GermClass{std::move(f)};
      return make_eventually_const(std::move(f));
    }
  }
  throw ParseError("unknown model");
}

}  // namespace phcalc
