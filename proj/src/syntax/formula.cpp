#include "cdl/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace cdl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

using FPtr = std::shared_ptr<const FormulaNode>;
using TPtr = std::shared_ptr<const TermNode>;

std::strong_ordering compare_f(const FormulaNode* a, const FormulaNode* b);

std::strong_ordering compare_t(const TermNode* a, const TermNode* b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a->kind <=> b->kind; c != 0) return c;
  if (a->kind == TermKind::cert) return compare_f(a->formula.get(), b->formula.get());
  if (auto c = compare_t(a->left.get(), b->left.get()); c != 0) return c;
  return compare_t(a->right.get(), b->right.get());
}

std::strong_ordering compare_f(const FormulaNode* a, const FormulaNode* b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a->kind <=> b->kind; c != 0) return c;
  switch (a->kind) {
    case FormulaKind::bottom:
      return std::strong_ordering::equal;
    case FormulaKind::letter:
      return a->name <=> b->name;
    case FormulaKind::supports:
      if (auto c = compare_t(a->term.get(), b->term.get()); c != 0) return c;
      [[fallthrough]];
    case FormulaKind::implies:
    case FormulaKind::belief:
      if (auto c = compare_f(a->a.get(), b->a.get()); c != 0) return c;
      return compare_f(a->b.get(), b->b.get());
  }
  return std::strong_ordering::equal;
}

bool equal_t(const TermNode* a, const TermNode* b);

bool equal_f(const FormulaNode* a, const FormulaNode* b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
  switch (a->kind) {
    case FormulaKind::bottom:
      return true;
    case FormulaKind::letter:
      return a->name == b->name;
    case FormulaKind::supports:
      if (!equal_t(a->term.get(), b->term.get())) return false;
      [[fallthrough]];
    case FormulaKind::implies:
    case FormulaKind::belief:
      return equal_f(a->a.get(), b->a.get()) && equal_f(a->b.get(), b->b.get());
  }
  return false;
}

bool equal_t(const TermNode* a, const TermNode* b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
  if (a->kind == TermKind::cert) return equal_f(a->formula.get(), b->formula.get());
  return equal_t(a->left.get(), b->left.get()) && equal_t(a->right.get(), b->right.get());
}

FPtr make_node(FormulaKind kind, std::string name, FPtr a, FPtr b, TPtr term) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  n->term = std::move(term);
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(kind));
  if (kind == FormulaKind::letter) h = mix(h, std::hash<std::string>{}(n->name));
  if (n->term) {
    h = mix(h, n->term->hash);
    n->size += n->term->size;
  }
  if (n->a) {
    h = mix(h, n->a->hash);
    n->size += n->a->size;
    n->modal_depth = std::max(n->modal_depth, n->a->modal_depth);
  }
  if (n->b) {
    h = mix(h, n->b->hash);
    n->size += n->b->size;
    n->modal_depth = std::max(n->modal_depth, n->b->modal_depth);
  }
  if (kind == FormulaKind::belief || kind == FormulaKind::supports) n->modal_depth += 1;
  n->hash = h;
  return n;
}

}  // namespace

// --- Formula ---------------------------------------------------------------

Formula Formula::bottom() {
  static const FPtr node = make_node(FormulaKind::bottom, {}, nullptr, nullptr, nullptr);
  return Formula(node);
}

Formula Formula::letter(std::string name) {
  return Formula(make_node(FormulaKind::letter, std::move(name), nullptr, nullptr, nullptr));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return Formula(make_node(FormulaKind::implies, {}, std::move(lhs.node_), std::move(rhs.node_), nullptr));
}

Formula Formula::belief(Formula cond, Formula body) {
  return Formula(make_node(FormulaKind::belief, {}, std::move(cond.node_), std::move(body.node_), nullptr));
}

Formula Formula::supports(Term term, Formula cond, Formula body) {
  return Formula(
      make_node(FormulaKind::supports, {}, std::move(cond.node_), std::move(body.node_), std::move(term.node_)));
}

FormulaKind Formula::kind() const { return node_->kind; }

const std::string& Formula::name() const {
  assert(is_letter());
  return node_->name;
}

Formula Formula::lhs() const {
  assert(is_implies());
  return Formula(node_->a);
}

Formula Formula::rhs() const {
  assert(is_implies());
  return Formula(node_->b);
}

Formula Formula::cond() const {
  assert(is_modal());
  return Formula(node_->a);
}

Formula Formula::body() const {
  assert(is_modal());
  return Formula(node_->b);
}

Term Formula::term() const {
  assert(is_supports());
  return Term(node_->term);
}

std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }
int Formula::modal_depth() const { return node_->modal_depth; }

bool operator==(const Formula& a, const Formula& b) { return equal_f(a.node_.get(), b.node_.get()); }

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  return compare_f(a.node_.get(), b.node_.get());
}

// --- Term ------------------------------------------------------------------

namespace {

TPtr make_term(TermKind kind, FPtr formula, TPtr left, TPtr right) {
  auto n = std::make_shared<TermNode>();
  n->kind = kind;
  n->formula = std::move(formula);
  n->left = std::move(left);
  n->right = std::move(right);
  std::size_t h = mix(0x7e57, static_cast<std::size_t>(kind));
  if (n->formula) {
    h = mix(h, n->formula->hash);
    n->size += n->formula->size;
  }
  if (n->left) {
    h = mix(h, n->left->hash);
    h = mix(h, n->right->hash);
    n->size += n->left->size + n->right->size;
    n->depth = 1 + std::max(n->left->depth, n->right->depth);
  }
  n->hash = h;
  return n;
}

}  // namespace

Term Term::cert(Formula of) { return Term(make_term(TermKind::cert, std::move(of.node_), nullptr, nullptr)); }

Term Term::app(Term fun, Term arg) {
  return Term(make_term(TermKind::app, nullptr, std::move(fun.node_), std::move(arg.node_)));
}

Term Term::sum(Term left, Term right) {
  return Term(make_term(TermKind::sum, nullptr, std::move(left.node_), std::move(right.node_)));
}

TermKind Term::kind() const { return node_->kind; }

Formula Term::certified() const {
  assert(is_cert());
  return Formula(node_->formula);
}

Term Term::left() const {
  assert(!is_cert());
  return Term(node_->left);
}

Term Term::right() const {
  assert(!is_cert());
  return Term(node_->right);
}

std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
int Term::depth() const { return node_->depth; }

bool operator==(const Term& a, const Term& b) { return equal_t(a.node_.get(), b.node_.get()); }

std::strong_ordering operator<=>(const Term& a, const Term& b) { return compare_t(a.node_.get(), b.node_.get()); }

// --- Abbreviations ---------------------------------------------------------

Formula top() {
  static const Formula t = Formula::implies(Formula::bottom(), Formula::bottom());
  return t;
}

Formula neg(const Formula& f) { return Formula::implies(f, Formula::bottom()); }

Formula conj(const Formula& a, const Formula& b) { return neg(Formula::implies(a, neg(b))); }

Formula disj(const Formula& a, const Formula& b) { return Formula::implies(neg(a), b); }

Formula iff(const Formula& a, const Formula& b) { return conj(Formula::implies(a, b), Formula::implies(b, a)); }

Formula believe(const Formula& body) { return Formula::belief(top(), body); }

Formula know(const Formula& body) { return Formula::belief(neg(body), Formula::bottom()); }

Formula dotted(const Formula& cond, const Formula& body) { return Formula::supports(Term::cert(body), cond, body); }

Formula letter(std::string name) { return Formula::letter(std::move(name)); }

bool is_dotted(const Formula& f) {
  if (!f.is_supports()) return false;
  Term t = f.term();
  return t.is_cert() && t.certified() == f.body();
}

bool is_top(const Formula& f) { return f.is_implies() && f.lhs().is_bottom() && f.rhs().is_bottom(); }

bool is_negation(const Formula& f, Formula* negated) {
  if (!f.is_implies() || !f.rhs().is_bottom()) return false;
  if (negated != nullptr) *negated = f.lhs();
  return true;
}

// --- Language membership ---------------------------------------------------

namespace {

template <typename Pred>
bool any_node(const Formula& f, Pred pred);

template <typename Pred>
bool any_node_t(const Term& t, Pred pred) {
  if (t.is_cert()) return any_node(t.certified(), pred);
  return any_node_t(t.left(), pred) || any_node_t(t.right(), pred);
}

template <typename Pred>
bool any_node(const Formula& f, Pred pred) {
  if (pred(f)) return true;
  switch (f.kind()) {
    case FormulaKind::bottom:
    case FormulaKind::letter:
      return false;
    case FormulaKind::implies:
      return any_node(f.lhs(), pred) || any_node(f.rhs(), pred);
    case FormulaKind::belief:
      return any_node(f.cond(), pred) || any_node(f.body(), pred);
    case FormulaKind::supports:
      return any_node_t(f.term(), pred) || any_node(f.cond(), pred) || any_node(f.body(), pred);
  }
  return false;
}

}  // namespace

bool is_cdl(const Formula& f) {
  return !any_node(f, [](const Formula& g) { return g.is_supports(); });
}

bool is_jcdl(const Formula& f) {
  return !any_node(f, [](const Formula& g) { return g.is_belief(); });
}

bool is_propositional(const Formula& f) {
  return !any_node(f, [](const Formula& g) { return g.is_modal(); });
}

bool in_language(const Formula& f, Language lang) { return lang == Language::cdl ? is_cdl(f) : is_jcdl(f); }

std::string_view language_name(Language lang) { return lang == Language::cdl ? "CDL" : "JCDL"; }

void collect_letters(const Formula& f, std::set<std::string>& out) {
  any_node(f, [&out](const Formula& g) {
    if (g.is_letter()) out.insert(g.name());
    return false;
  });
}

std::set<std::string> letters_of(const Formula& f) {
  std::set<std::string> out;
  collect_letters(f, out);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  any_node(f, [&](const Formula& g) {
    if (seen.insert(g).second) out.push_back(g);
    return false;
  });
  return out;
}

}  // namespace cdl
