#include "phcalc/term.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <sstream>

#include "phcalc/box_lp.hpp"
#include "phcalc/errors.hpp"

namespace phcalc {

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  TermKind kind;
  std::size_t index = 0;
  Rational factor;
  std::optional<Term> lhs;
  std::optional<Term> rhs;
};

Term::Term(std::size_t arity, std::shared_ptr<const Node> node)
    : arity_(arity), node_(std::move(node)) {}

Term Term::var(std::size_t arity, std::size_t index) {
  if (arity == 0) throw InvalidArgument("term arity must be positive");
  if (index >= arity)
    throw DimensionMismatch("variable p" + std::to_string(index + 1) + " exceeds arity " +
                            std::to_string(arity));
  auto n = std::make_shared<Node>();
  n->kind = TermKind::var;
  n->index = index;
  return Term(arity, std::move(n));
}

Term Term::zero(std::size_t arity) { return scale(0, var(arity, 0)); }

Term Term::scale(Rational factor, Term t) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::scale;
  n->factor = std::move(factor);
  std::size_t arity = t.arity();
  n->lhs = std::move(t);
  return Term(arity, std::move(n));
}

#define PHCALC_BINARY_FACTORY(NAME, KIND)                                        \
  Term Term::NAME(Term a, Term b) {                                              \
    if (a.arity() != b.arity())                                                  \
      throw DimensionMismatch("subterm arities differ: " +                       \
                              std::to_string(a.arity()) + " vs " +               \
                              std::to_string(b.arity()));                        \
    auto n = std::make_shared<Node>();                                           \
    n->kind = KIND;                                                              \
    std::size_t arity = a.arity();                                               \
    n->lhs = std::move(a);                                                       \
    n->rhs = std::move(b);                                                       \
    return Term(arity, std::move(n));                                            \
  }

PHCALC_BINARY_FACTORY(sum, TermKind::sum)
PHCALC_BINARY_FACTORY(join, TermKind::join)
PHCALC_BINARY_FACTORY(meet, TermKind::meet)

#undef PHCALC_BINARY_FACTORY

Term Term::neg(Term t) { return scale(-1, std::move(t)); }
Term Term::abs(Term t) { return join(t, neg(t)); }
Term Term::sub(Term a, Term b) { return sum(std::move(a), neg(std::move(b))); }
Term Term::positive_part(Term t) {
  std::size_t n = t.arity();
  return join(std::move(t), zero(n));
}

Term Term::sphere_unit(std::size_t arity) {
  Term acc = abs(var(arity, 0));
  for (std::size_t i = 1; i < arity; ++i) acc = join(acc, abs(var(arity, i)));
  return acc;
}

TermKind Term::kind() const { return node_->kind; }
std::size_t Term::index() const { return node_->index; }
const Rational& Term::factor() const { return node_->factor; }
const Term& Term::lhs() const { return *node_->lhs; }
const Term& Term::rhs() const { return *node_->rhs; }

std::size_t term_depth(const Term& t) {
  switch (t.kind()) {
    case TermKind::var: return 1;
    case TermKind::scale: return 1 + term_depth(t.lhs());
    default: return 1 + std::max(term_depth(t.lhs()), term_depth(t.rhs()));
  }
}

namespace {

template <class Scalar>
Scalar eval_impl(const Term& t, std::span<const Scalar> p) {
  switch (t.kind()) {
    case TermKind::var: return p[t.index()];
    case TermKind::scale: {
      if constexpr (std::is_same_v<Scalar, double>)
        return t.factor().get_d() * eval_impl(t.lhs(), p);
      else
        return Scalar(t.factor() * eval_impl(t.lhs(), p));
    }
    case TermKind::sum: return Scalar(eval_impl(t.lhs(), p) + eval_impl(t.rhs(), p));
    case TermKind::join: {
      Scalar a = eval_impl(t.lhs(), p);
      Scalar b = eval_impl(t.rhs(), p);
      return a < b ? b : a;
    }
    case TermKind::meet: {
      Scalar a = eval_impl(t.lhs(), p);
      Scalar b = eval_impl(t.rhs(), p);
      return b < a ? b : a;
    }
  }
  return Scalar(0);
}

}  // namespace

Rational eval_term(const Term& t, std::span<const Rational> point) {
  if (point.size() != t.arity())
    throw DimensionMismatch("point has dimension " + std::to_string(point.size()) +
                            ", term arity is " + std::to_string(t.arity()));
  return eval_impl<Rational>(t, point);
}

double eval_term(const Term& t, std::span<const double> point) {
  if (point.size() != t.arity())
    throw DimensionMismatch("point has dimension " + std::to_string(point.size()) +
                            ", term arity is " + std::to_string(t.arity()));
  return eval_impl<double>(t, point);
}

// ---------------------------------------------------------------------------
// Term DSL

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, std::size_t arity) : text_(text), arity_(arity) {}

  Term parse() {
    Value v = parse_join();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return as_term(v);
  }

 private:
  struct Value {
    std::optional<Term> term;
    Rational scalar;
  };

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("term parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) return false;
    // `v` is an operator only when it is not glued to an identifier.
    if (c == 'v' && pos_ + 1 < text_.size() &&
        std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))
      return false;
    return true;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  Term as_term(const Value& v) const {
    if (v.term) return *v.term;
    if (sgn(v.scalar) != 0)
      throw ParseError("nonzero constant " + to_string(v.scalar) +
                       " is not positively homogeneous");
    return Term::zero(arity_);
  }

  Value parse_join() {
    Value acc = parse_meet();
    while (accept('v')) acc = {Term::join(as_term(acc), as_term(parse_meet())), 0};
    return acc;
  }

  Value parse_meet() {
    Value acc = parse_add();
    while (accept('^')) acc = {Term::meet(as_term(acc), as_term(parse_add())), 0};
    return acc;
  }

  Value parse_add() {
    Value acc = parse_mul();
    for (;;) {
      if (accept('+')) {
        acc = add(acc, parse_mul(), false);
      } else if (accept('-')) {
        acc = add(acc, parse_mul(), true);
      } else {
        return acc;
      }
    }
  }

  Value add(const Value& a, const Value& b, bool subtract) {
    if (!a.term && !b.term) return {std::nullopt, subtract ? Rational(a.scalar - b.scalar)
                                                          : Rational(a.scalar + b.scalar)};
    Term ta = as_term(a);
    Term tb = as_term(b);
    return {subtract ? Term::sub(ta, tb) : Term::sum(ta, tb), 0};
  }

  Value parse_mul() {
    Value acc = parse_unary();
    while (accept('*')) {
      Value rhs = parse_unary();
      if (acc.term && rhs.term) fail("product of two terms is not lattice-linear");
      if (!acc.term && !rhs.term) {
        acc = {std::nullopt, acc.scalar * rhs.scalar};
      } else if (acc.term) {
        acc = {Term::scale(rhs.scalar, *acc.term), 0};
      } else {
        acc = {Term::scale(acc.scalar, *rhs.term), 0};
      }
    }
    return acc;
  }

  Value parse_unary() {
    if (accept('-')) {
      Value v = parse_unary();
      if (!v.term) return {std::nullopt, -v.scalar};
      return {Term::neg(*v.term), 0};
    }
    if (accept('+')) return parse_unary();
    return parse_atom();
  }

  Value parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = parse_join();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (c == '|') {
      ++pos_;
      Value v = parse_join();
      if (!accept('|')) fail("expected closing '|'");
      if (!v.term) return {std::nullopt, abs(v.scalar)};
      return {Term::abs(*v.term), 0};
    }
    if (c == 'p') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index after 'p'");
      std::size_t idx = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (idx == 0 || idx > arity_)
        fail("variable p" + std::to_string(idx) + " outside 1.." + std::to_string(arity_));
      return {Term::var(arity_, idx - 1), 0};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
              text_[pos_] == '/'))
        ++pos_;
      return {std::nullopt, parse_rational(text_.substr(start, pos_ - start))};
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t arity_;
  std::size_t pos_ = 0;
};

std::string rational_literal(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::var: os << 'p' << (t.index() + 1); return;
    case TermKind::scale:
      os << '(' << rational_literal(t.factor()) << '*';
      print_term(os, t.lhs());
      os << ')';
      return;
    case TermKind::sum:
    case TermKind::join:
    case TermKind::meet: {
      const char* op = t.kind() == TermKind::sum ? " + " : t.kind() == TermKind::join ? " v " : " ^ ";
      os << '(';
      print_term(os, t.lhs());
      os << op;
      print_term(os, t.rhs());
      os << ')';
      return;
    }
  }
}

}  // namespace

Term parse_term(std::string_view text, std::size_t arity) {
  if (arity == 0) throw InvalidArgument("term arity must be positive");
  return TermParser(text, arity).parse();
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

// ---------------------------------------------------------------------------
// LinearForm

Rational LinearForm::eval(std::span<const Rational> point) const {
  if (point.size() != coeffs.size()) throw DimensionMismatch("linear form / point dimension");
  Rational acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (sgn(coeffs[i]) != 0) acc += coeffs[i] * point[i];
  return acc;
}

double LinearForm::eval(std::span<const double> point) const {
  if (point.size() != coeffs.size()) throw DimensionMismatch("linear form / point dimension");
  double acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i].get_d() * point[i];
  return acc;
}

Rational LinearForm::l1_norm() const {
  Rational acc = 0;
  for (const auto& c : coeffs) acc += phcalc::abs(c);
  return acc;
}

bool LinearForm::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return sgn(c) == 0; });
}

LinearForm LinearForm::zero(std::size_t arity) { return {std::vector<Rational>(arity)}; }

LinearForm LinearForm::coordinate(std::size_t arity, std::size_t index) {
  if (index >= arity) throw DimensionMismatch("coordinate index exceeds arity");
  LinearForm f = zero(arity);
  f.coeffs[index] = 1;
  return f;
}

LinearForm operator+(const LinearForm& a, const LinearForm& b) {
  if (a.arity() != b.arity()) throw DimensionMismatch("linear form arities differ");
  LinearForm r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

LinearForm operator-(const LinearForm& a, const LinearForm& b) {
  if (a.arity() != b.arity()) throw DimensionMismatch("linear form arities differ");
  LinearForm r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
  return r;
}

LinearForm operator*(const Rational& s, const LinearForm& f) {
  LinearForm r = f;
  for (auto& c : r.coeffs) c *= s;
  return r;
}

// ---------------------------------------------------------------------------
// MaxMinNF

MaxMinNF::MaxMinNF(std::size_t arity, std::vector<Clause> clauses)
    : arity_(arity), clauses_(std::move(clauses)) {
  if (arity_ == 0) throw InvalidArgument("normal form arity must be positive");
  if (clauses_.empty()) throw InvalidArgument("normal form needs at least one clause");
  for (const auto& c : clauses_) {
    if (c.empty()) throw InvalidArgument("normal form clause must be non-empty");
    for (const auto& f : c)
      if (f.arity() != arity_) throw DimensionMismatch("linear form arity differs from normal form");
  }
}

MaxMinNF MaxMinNF::form(LinearForm f) {
  std::size_t n = f.arity();
  return MaxMinNF(n, {{std::move(f)}});
}

MaxMinNF MaxMinNF::coordinate(std::size_t arity, std::size_t index) {
  return form(LinearForm::coordinate(arity, index));
}

MaxMinNF MaxMinNF::zero(std::size_t arity) { return form(LinearForm::zero(arity)); }

std::size_t MaxMinNF::form_count() const {
  std::size_t n = 0;
  for (const auto& c : clauses_) n += c.size();
  return n;
}

Rational MaxMinNF::eval(std::span<const Rational> point) const {
  if (point.size() != arity_)
    throw DimensionMismatch("point has dimension " + std::to_string(point.size()) +
                            ", normal form arity is " + std::to_string(arity_));
  std::optional<Rational> best;
  for (const auto& clause : clauses_) {
    Rational lo = clause.front().eval(point);
    for (std::size_t j = 1; j < clause.size(); ++j) {
      Rational v = clause[j].eval(point);
      if (v < lo) lo = v;
    }
    if (!best || *best < lo) best = lo;
  }
  return *best;
}

double MaxMinNF::eval(std::span<const double> point) const {
  if (point.size() != arity_)
    throw DimensionMismatch("point has dimension " + std::to_string(point.size()) +
                            ", normal form arity is " + std::to_string(arity_));
  double best = -HUGE_VAL;
  for (const auto& clause : clauses_) {
    double lo = HUGE_VAL;
    for (const auto& f : clause) lo = std::min(lo, f.eval(point));
    best = std::max(best, lo);
  }
  return best;
}

Rational MaxMinNF::lipschitz() const {
  Rational l = 0;
  for (const auto& c : clauses_)
    for (const auto& f : c) l = max(l, f.l1_norm());
  return l;
}

std::size_t default_clause_budget() {
  static const std::size_t budget = [] {
    if (const char* env = std::getenv("PHCALC_CLAUSE_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{100000};
  }();
  return budget;
}

namespace {

void check_budget(std::size_t a, std::size_t b, const NormalizeOptions& opt, const char* what) {
  if (a != 0 && b > opt.clause_budget / a)
    throw ResourceLimit(std::string(what) + " would create " + std::to_string(a) + "x" +
                        std::to_string(b) + " clauses, over the budget of " +
                        std::to_string(opt.clause_budget));
}

// Points on which dominance is screened before the exact check.
const std::vector<std::vector<double>>& screening_points(std::size_t arity) {
  static std::mutex mu;
  static std::vector<std::vector<std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() <= arity) cache.resize(arity + 1);
  auto& pts = cache[arity];
  if (pts.empty()) {
    Rational mesh = arity <= 3 ? Rational(1, 2) : Rational(1);
    pts = make_sphere_net(arity, mesh).points_d;
  }
  return pts;
}

constexpr double kScreenTol = 1e-9;

// True iff min over `others` never exceeds `f` (so f is never the unique
// minimum and can be dropped from a meet containing `others`).
bool meet_below(const std::vector<const LinearForm*>& others, const LinearForm& f) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(others.size());
  for (const auto* g : others) rows.push_back((*g - f).coeffs);
  std::vector<Rational> offsets(rows.size());
  return sgn(max_min_affine_over_box(rows, offsets)) <= 0;
}

Clause prune_clause(Clause forms, const std::vector<std::vector<double>>& samples) {
  std::sort(forms.begin(), forms.end());
  forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
  if (forms.size() <= 1) return forms;

  const std::size_t k = forms.size();
  std::vector<std::vector<double>> vals(k, std::vector<double>(samples.size()));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t p = 0; p < samples.size(); ++p) vals[j][p] = forms[j].eval(samples[p]);

  std::vector<bool> removed(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<const LinearForm*> others;
    std::vector<std::size_t> other_idx;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == j || removed[i]) continue;
      others.push_back(&forms[i]);
      other_idx.push_back(i);
    }
    if (others.empty()) continue;
    bool screened_out = false;
    for (std::size_t p = 0; p < samples.size() && !screened_out; ++p) {
      double lo = HUGE_VAL;
      for (std::size_t i : other_idx) lo = std::min(lo, vals[i][p]);
      if (lo > vals[j][p] + kScreenTol * (1 + std::fabs(vals[j][p]))) screened_out = true;
    }
    if (!screened_out && meet_below(others, forms[j])) removed[j] = true;
  }
  Clause out;
  for (std::size_t j = 0; j < k; ++j)
    if (!removed[j]) out.push_back(std::move(forms[j]));
  return out;
}

// min(dominant) >= min(dominated) everywhere.
bool clause_dominates(const Clause& dominant, const Clause& dominated) {
  bool subset = std::all_of(dominant.begin(), dominant.end(), [&](const LinearForm& g) {
    return std::binary_search(dominated.begin(), dominated.end(), g);
  });
  if (subset) return true;
  std::vector<const LinearForm*> lower;
  for (const auto& c : dominated) lower.push_back(&c);
  for (const auto& g : dominant)
    if (!meet_below(lower, g)) return false;
  return true;
}

}  // namespace

MaxMinNF simplify(const MaxMinNF& f, const NormalizeOptions& opt) {
  const auto& samples = screening_points(f.arity());
  std::vector<Clause> clauses;
  clauses.reserve(f.clauses().size());
  for (const auto& c : f.clauses()) {
    if (opt.prune) {
      clauses.push_back(prune_clause(c, samples));
    } else {
      Clause s = c;
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      clauses.push_back(std::move(s));
    }
  }
  // Clauses are listed in decreasing lexicographic order, forms inside a
  // clause in increasing order.
  std::sort(clauses.begin(), clauses.end(), std::greater<>());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  if (!opt.prune || clauses.size() <= 1) return MaxMinNF(f.arity(), std::move(clauses));

  const std::size_t k = clauses.size();
  std::vector<std::vector<double>> vals(k, std::vector<double>(samples.size()));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t p = 0; p < samples.size(); ++p) {
      double lo = HUGE_VAL;
      for (const auto& form : clauses[c]) lo = std::min(lo, form.eval(samples[p]));
      vals[c][p] = lo;
    }
  }
  std::vector<bool> removed(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i || removed[j]) continue;
      bool candidate = true;
      for (std::size_t p = 0; p < samples.size(); ++p) {
        if (vals[j][p] < vals[i][p] - kScreenTol * (1 + std::fabs(vals[i][p]))) {
          candidate = false;
          break;
        }
      }
      if (candidate && clause_dominates(clauses[j], clauses[i])) {
        removed[i] = true;
        break;
      }
    }
  }
  std::vector<Clause> kept;
  for (std::size_t i = 0; i < k; ++i)
    if (!removed[i]) kept.push_back(std::move(clauses[i]));
  return MaxMinNF(f.arity(), std::move(kept));
}

MaxMinNF nf_join(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt) {
  if (a.arity() != b.arity()) throw DimensionMismatch("normal form arities differ");
  if (a.clauses().size() + b.clauses().size() > opt.clause_budget)
    throw ResourceLimit("join exceeds the clause budget");
  std::vector<Clause> cs = a.clauses();
  cs.insert(cs.end(), b.clauses().begin(), b.clauses().end());
  return simplify(MaxMinNF(a.arity(), std::move(cs)), opt);
}

MaxMinNF nf_meet(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt) {
  if (a.arity() != b.arity()) throw DimensionMismatch("normal form arities differ");
  check_budget(a.clauses().size(), b.clauses().size(), opt, "meet");
  std::vector<Clause> cs;
  cs.reserve(a.clauses().size() * b.clauses().size());
  for (const auto& ca : a.clauses()) {
    for (const auto& cb : b.clauses()) {
      Clause c = ca;
      c.insert(c.end(), cb.begin(), cb.end());
      cs.push_back(std::move(c));
    }
  }
  return simplify(MaxMinNF(a.arity(), std::move(cs)), opt);
}

MaxMinNF nf_add(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt) {
  if (a.arity() != b.arity()) throw DimensionMismatch("normal form arities differ");
  check_budget(a.clauses().size(), b.clauses().size(), opt, "sum");
  std::vector<Clause> cs;
  cs.reserve(a.clauses().size() * b.clauses().size());
  for (const auto& ca : a.clauses()) {
    for (const auto& cb : b.clauses()) {
      check_budget(ca.size(), cb.size(), opt, "sum of clauses");
      Clause c;
      c.reserve(ca.size() * cb.size());
      for (const auto& fa : ca)
        for (const auto& fb : cb) c.push_back(fa + fb);
      cs.push_back(std::move(c));
    }
  }
  return simplify(MaxMinNF(a.arity(), std::move(cs)), opt);
}

MaxMinNF nf_negate(const MaxMinNF& a, const NormalizeOptions& opt) {
  // -(v_i ^_j f_ij) = ^_i v_j (-f_ij), rebuilt one meet at a time.
  std::optional<MaxMinNF> acc;
  for (const auto& clause : a.clauses()) {
    std::vector<Clause> cs;
    for (const auto& f : clause) cs.push_back({Rational(-1) * f});
    MaxMinNF part = simplify(MaxMinNF(a.arity(), std::move(cs)), opt);
    acc = acc ? nf_meet(*acc, part, opt) : part;
  }
  return *acc;
}

MaxMinNF nf_scale(const Rational& s, const MaxMinNF& a, const NormalizeOptions& opt) {
  if (sgn(s) == 0) return MaxMinNF::zero(a.arity());
  if (sgn(s) < 0) return nf_scale(-s, nf_negate(a, opt), opt);
  std::vector<Clause> cs = a.clauses();
  for (auto& c : cs)
    for (auto& f : c) f = s * f;
  // Positive scaling preserves the order and every dominance relation.
  return MaxMinNF(a.arity(), std::move(cs));
}

MaxMinNF nf_sub(const MaxMinNF& a, const MaxMinNF& b, const NormalizeOptions& opt) {
  return nf_add(a, nf_negate(b, opt), opt);
}

MaxMinNF normalize(const Term& t, const NormalizeOptions& opt) {
  switch (t.kind()) {
    case TermKind::var: return MaxMinNF::coordinate(t.arity(), t.index());
    case TermKind::scale: return nf_scale(t.factor(), normalize(t.lhs(), opt), opt);
    case TermKind::sum: return nf_add(normalize(t.lhs(), opt), normalize(t.rhs(), opt), opt);
    case TermKind::join: return nf_join(normalize(t.lhs(), opt), normalize(t.rhs(), opt), opt);
    case TermKind::meet: return nf_meet(normalize(t.lhs(), opt), normalize(t.rhs(), opt), opt);
  }
  throw InvalidArgument("unknown term kind");
}

Term to_term(const MaxMinNF& f) {
  auto form_term = [&](const LinearForm& lf) {
    std::optional<Term> acc;
    for (std::size_t i = 0; i < lf.arity(); ++i) {
      if (sgn(lf.coeffs[i]) == 0) continue;
      Term v = Term::var(f.arity(), i);
      Term piece = lf.coeffs[i] == 1 ? v : Term::scale(lf.coeffs[i], v);
      acc = acc ? Term::sum(*acc, piece) : piece;
    }
    return acc ? *acc : Term::zero(f.arity());
  };
  std::optional<Term> out;
  for (const auto& clause : f.clauses()) {
    Term c = form_term(clause.front());
    for (std::size_t j = 1; j < clause.size(); ++j) c = Term::meet(c, form_term(clause[j]));
    out = out ? Term::join(*out, c) : c;
  }
  return *out;
}

// ---------------------------------------------------------------------------
// Homogeneous extension

double extend_by_homogeneity(const std::function<double(std::span<const double>)>& on_sphere,
                             std::span<const double> t) {
  double norm = 0;
  for (double v : t) norm = std::max(norm, std::fabs(v));
  if (norm == 0) return 0;
  std::vector<double> s(t.begin(), t.end());
  for (auto& v : s) v /= norm;
  return norm * on_sphere(s);
}

Rational extend_by_homogeneity(
    const std::function<Rational(std::span<const Rational>)>& on_sphere,
    std::span<const Rational> t) {
  Rational norm = 0;
  for (const auto& v : t) norm = max(norm, abs(v));
  if (sgn(norm) == 0) return 0;
  std::vector<Rational> s(t.begin(), t.end());
  for (auto& v : s) v /= norm;
  return norm * on_sphere(s);
}

// ---------------------------------------------------------------------------
// Sphere nets

namespace {

std::size_t grid_divisions(const Rational& mesh) {
  if (sgn(mesh) <= 0) throw InvalidArgument("sphere net mesh must be positive");
  Rational q = Rational(2) / mesh;
  Rational f = floor(q);
  if (f != q) f += 1;
  if (f > Rational(1'000'000'000)) throw ResourceLimit("sphere net mesh too fine");
  return static_cast<std::size_t>(f.get_num().get_ui());
}

}  // namespace

std::size_t sphere_net_size(std::size_t arity, const Rational& mesh) {
  if (arity == 0) throw InvalidArgument("sphere net arity must be positive");
  const std::size_t N = grid_divisions(mesh);
  long double total = 0;
  for (std::size_t i = 0; i < arity; ++i)
    total += 2.0L * std::pow(static_cast<long double>(N - 1), static_cast<long double>(i)) *
             std::pow(static_cast<long double>(N + 1), static_cast<long double>(arity - 1 - i));
  if (total > 1e18L) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(total + 0.5L);
}

SphereNet make_sphere_net(std::size_t arity, const Rational& mesh, std::size_t point_cap) {
  const std::size_t count = sphere_net_size(arity, mesh);
  if (count > point_cap)
    throw ResourceLimit("sphere net needs " + std::to_string(count) + " points, cap is " +
                        std::to_string(point_cap));
  const std::size_t N = grid_divisions(mesh);

  SphereNet net;
  net.arity = arity;
  net.mesh = mesh;
  net.step = Rational(2, static_cast<unsigned long>(N));
  net.step.canonicalize();
  net.covering_radius = arity == 1 ? Rational(0) : Rational(net.step / 2);
  net.points.reserve(count);

  std::vector<Rational> grid(N + 1);
  for (std::size_t k = 0; k <= N; ++k) grid[k] = Rational(-1) + net.step * static_cast<unsigned long>(k);

  for (std::size_t face = 0; face < arity; ++face) {
    for (int sign : {1, -1}) {
      std::vector<std::size_t> idx(arity, 0);
      for (;;) {
        bool owned_elsewhere = false;
        for (std::size_t j = 0; j < face; ++j)
          if (idx[j] == 0 || idx[j] == N) owned_elsewhere = true;
        if (!owned_elsewhere) {
          RationalPoint p(arity);
          for (std::size_t j = 0; j < arity; ++j) p[j] = j == face ? Rational(sign) : grid[idx[j]];
          net.points.push_back(std::move(p));
        }
        // odometer over the free coordinates
        std::size_t j = 0;
        for (; j < arity; ++j) {
          if (j == face) continue;
          if (++idx[j] <= N) break;
          idx[j] = 0;
        }
        if (j == arity) break;
      }
    }
  }
  net.points_d.reserve(net.points.size());
  for (const auto& p : net.points) net.points_d.push_back(to_doubles(p));
  return net;
}

SupNormInterval sup_norm_bound(const MaxMinNF& f, const SphereNet& net) {
  if (f.arity() != net.arity) throw DimensionMismatch("normal form and net arities differ");
  Rational lo = 0;
  for (const auto& p : net.points) lo = max(lo, abs(f.eval(p)));
  return {lo, lo + f.lipschitz() * net.covering_radius};
}

Rational sphere_max(const MaxMinNF& f) {
  const std::size_t n = f.arity();
  std::optional<Rational> best;
  for (std::size_t face = 0; face < n; ++face) {
    for (int sign : {1, -1}) {
      for (const auto& clause : f.clauses()) {
        std::vector<std::vector<Rational>> rows;
        std::vector<Rational> offsets;
        for (const auto& form : clause) {
          std::vector<Rational> r;
          r.reserve(n - 1);
          for (std::size_t k = 0; k < n; ++k)
            if (k != face) r.push_back(form.coeffs[k]);
          rows.push_back(std::move(r));
          offsets.push_back(form.coeffs[face] * sign);
        }
        Rational v = max_min_affine_over_box(rows, offsets);
        if (!best || *best < v) best = v;
      }
    }
  }
  return *best;
}

Rational exact_sup_norm(const MaxMinNF& f, const NormalizeOptions& opt) {
  Rational hi = sphere_max(f);
  Rational neg = sphere_max(nf_negate(f, opt));
  return max(abs(hi), abs(neg));
}

}  // namespace phcalc
