#pragma once

// Abstract syntax, parsing and printing for conditional doxastic logic (CDL)
// and its justified variant (JCDL).
//
// There are four formula primitives shared by both languages (bottom, letters,
// implication) plus one modal constructor per language: conditional belief
// B[cond] body for CDL and term support {t}:[cond] body for JCDL. Everything
// else (true, ~, &, |, <->, unconditioned B, K, Bd) is sugar that the parser
// and the builder helpers below expand into primitives.

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cdl {

enum class FormulaKind { bottom, letter, implies, belief, supports };
enum class TermKind { cert, app, sum };
enum class Language { cdl, jcdl };

struct FormulaNode;
struct TermNode;
class Term;

/// Immutable, structurally compared formula tree. Copies share nodes.
class Formula {
 public:
  static Formula bottom();
  static Formula letter(std::string name);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula belief(Formula cond, Formula body);
  static Formula supports(Term term, Formula cond, Formula body);

  FormulaKind kind() const;
  bool is_bottom() const { return kind() == FormulaKind::bottom; }
  bool is_letter() const { return kind() == FormulaKind::letter; }
  bool is_implies() const { return kind() == FormulaKind::implies; }
  bool is_belief() const { return kind() == FormulaKind::belief; }
  bool is_supports() const { return kind() == FormulaKind::supports; }
  /// belief or supports
  bool is_modal() const { return is_belief() || is_supports(); }

  /// Letter name. Precondition: is_letter().
  const std::string& name() const;
  /// Implication operands. Precondition: is_implies().
  Formula lhs() const;
  Formula rhs() const;
  /// Condition and body of B[cond] body or {t}:[cond] body.
  Formula cond() const;
  Formula body() const;
  /// Supporting term. Precondition: is_supports().
  Term term() const;

  std::size_t hash() const;
  /// Number of nodes, counting certificate payloads.
  std::size_t size() const;
  /// Maximal nesting of modal constructors.
  int modal_depth() const;
  const FormulaNode* node() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  friend class Term;
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

/// Immutable justification term: certificates c(phi), application t.s, sum t+s.
class Term {
 public:
  static Term cert(Formula of);
  static Term app(Term fun, Term arg);
  static Term sum(Term left, Term right);

  TermKind kind() const;
  bool is_cert() const { return kind() == TermKind::cert; }
  bool is_app() const { return kind() == TermKind::app; }
  bool is_sum() const { return kind() == TermKind::sum; }

  /// Certified formula. Precondition: is_cert().
  Formula certified() const;
  /// Operands of app (function, argument) or sum (left, right).
  Term left() const;
  Term right() const;

  std::size_t hash() const;
  std::size_t size() const;
  /// Depth of the term tree; certificates have depth 1.
  int depth() const;
  const TermNode* node() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  friend class Formula;
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

struct FormulaNode {
  FormulaKind kind;
  std::string name;
  std::shared_ptr<const FormulaNode> a;  // lhs or cond
  std::shared_ptr<const FormulaNode> b;  // rhs or body
  std::shared_ptr<const TermNode> term;
  std::size_t hash = 0;
  std::size_t size = 1;
  int modal_depth = 0;
};

struct TermNode {
  TermKind kind;
  std::shared_ptr<const FormulaNode> formula;  // certified formula
  std::shared_ptr<const TermNode> left;
  std::shared_ptr<const TermNode> right;
  std::size_t hash = 0;
  std::size_t size = 1;
  int depth = 1;
};

// ---------------------------------------------------------------------------
// Abbreviations. Each returns the primitive expansion.

Formula top();                                // false -> false
Formula neg(const Formula& f);                // f -> false
Formula conj(const Formula& a, const Formula& b);  // ~(a -> ~b)
Formula disj(const Formula& a, const Formula& b);  // ~a -> b
Formula iff(const Formula& a, const Formula& b);   // (a -> b) & (b -> a)
Formula believe(const Formula& body);         // B[true] body
Formula know(const Formula& body);            // B[~body] false
Formula dotted(const Formula& cond, const Formula& body);  // {c(body)}:[cond] body
Formula letter(std::string name);

/// True when f is the certified-belief pattern {c(g)}:[cond] g.
bool is_dotted(const Formula& f);
bool is_top(const Formula& f);
/// f == g -> false, with the matched g returned through `negated`.
bool is_negation(const Formula& f, Formula* negated = nullptr);

// ---------------------------------------------------------------------------
// Language membership.

/// No term-support subformulas (belief allowed).
bool is_cdl(const Formula& f);
/// No conditional-belief subformulas, including inside certificates.
bool is_jcdl(const Formula& f);
/// Neither belief nor support subformulas.
bool is_propositional(const Formula& f);
bool in_language(const Formula& f, Language lang);
std::string_view language_name(Language lang);

std::set<std::string> letters_of(const Formula& f);
void collect_letters(const Formula& f, std::set<std::string>& out);
/// All subformulas (including f itself and certificate payloads), deduplicated.
std::vector<Formula> subformulas(const Formula& f);

// ---------------------------------------------------------------------------
// Concrete syntax.

/// Parses and fully expands a formula. Throws ParseError.
Formula parse_formula(std::string_view text, Language lang);
/// Parses a justification term (JCDL only). Throws ParseError.
Term parse_term(std::string_view text);

enum class RenderStyle { primitive, sugared };

/// Primitive style round-trips through parse_formula. Sugared style folds
/// dotted belief into Bd, a -> false into ~a (a != false), and drops the
/// condition when it is true.
std::string render(const Formula& f, RenderStyle style = RenderStyle::primitive);
std::string render(const Term& t, RenderStyle style = RenderStyle::primitive);

// ---------------------------------------------------------------------------
// Surface syntax: the parse tree before abbreviation expansion.

enum class SurfaceKind {
  bottom, top, letter, neg, conj, disj, implies, iff,
  belief,    // B[cond] body, cond absent for plain B
  know,      // K body
  dotted,    // Bd[cond] body
  supports,  // {t}:[cond] body
};

struct SurfaceTerm;

struct SurfaceFormula {
  SurfaceKind kind = SurfaceKind::bottom;
  std::string name;
  /// Operands. For modal kinds: {body} or {cond, body} when a condition is given.
  std::vector<SurfaceFormula> args;
  std::vector<SurfaceTerm> term;  // exactly one element for supports
};

struct SurfaceTerm {
  TermKind kind = TermKind::cert;
  std::vector<SurfaceFormula> certified;  // one element for cert
  std::vector<SurfaceTerm> operands;      // two elements for app and sum
};

/// Parses without expanding. Throws ParseError.
SurfaceFormula parse_surface(std::string_view text, Language lang);

/// Rewrites every abbreviation into the primitives: true => false -> false,
/// ~a => a -> false, a & b => ~(a -> ~b), a | b => ~a -> b,
/// a <-> b => (a -> b) & (b -> a), B a => B[true] a, K a => B[~a] false,
/// Bd[c] a => {c(a)}:[c] a, and an absent condition => true.
Formula expand_abbreviations(const SurfaceFormula& f);
Term expand_abbreviations(const SurfaceTerm& t);

/// Embeds a primitive formula into the surface syntax (no sugar introduced).
SurfaceFormula to_surface(const Formula& f);

// ---------------------------------------------------------------------------

/// (term, supported formula) pair.
using SupportPair = std::pair<Term, Formula>;

/// Pairs (t, phi) with {t}:[psi] phi occurring in f, closed under: (c(phi), phi)
/// for every body phi; (t, phi) and (s, phi) for a sum (t+s, phi); and for an
/// application (t.s, phi2), the decompositions (t, phi1 -> phi2) and (s, phi1)
/// for every phi1 such that phi1 -> phi2 occurs as a subformula of f.
std::set<SupportPair> signature_closure(const Formula& f);
std::set<SupportPair> signature_closure(const std::vector<Formula>& fs);

}  // namespace cdl

template <>
struct std::hash<cdl::Formula> {
  std::size_t operator()(const cdl::Formula& f) const noexcept { return f.hash(); }
};
template <>
struct std::hash<cdl::Term> {
  std::size_t operator()(const cdl::Term& t) const noexcept { return t.hash(); }
};
