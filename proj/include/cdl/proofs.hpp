#pragma once

// Hilbert-style derivations for CDL0, CDL and JCDL: axiom schemas, the line
// checker, necessitation bookkeeping and macro derivations of derived
// theorems.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdl/syntax.hpp"

namespace cdl::proofs {

enum class Theory { cdl0, cdl, jcdl };

std::string_view theory_name(Theory t);
/// Accepts "CDL0", "CDL", "JCDL". Throws DerivationError otherwise.
Theory parse_theory(std::string_view name);
Language language_of(Theory t);

enum class Schema {
  CL, K, Succ, IEa, IEb, PI, NI, WCon, KM, RM, Inc, Comm,
  eCert, eK, eSum, eSucc, eKM, eRM, eInc, eComm, ePI, eNI, eWCon, eA,
};

std::string_view schema_name(Schema s);
std::optional<Schema> schema_from_name(std::string_view name);
/// The axiom schemas of a theory, CL first.
const std::vector<Schema>& schemas_of(Theory t);
bool schema_in_theory(Schema s, Theory t);
/// Metavariable names of a schema: formula variables such as "psi", "phi1"
/// and, for JCDL schemas, term variables "t" and "s".
std::vector<std::string> formula_metavars(Schema s);
std::vector<std::string> term_metavars(Schema s);

struct Substitution {
  std::map<std::string, Formula> formulas;
  std::map<std::string, Term> terms;
};

/// Classical tautology test after replacing every maximal modal subformula
/// by an atom (structurally equal subformulas share an atom).
bool is_tautology(const Formula& f);

/// Substitution under which f is a literal instance of the schema. CL
/// matches exactly the tautologies and yields an empty substitution.
std::optional<Substitution> match_schema(const Formula& f, Schema s);
/// The schema instance for a substitution. Throws DerivationError when a
/// metavariable is unbound. Not available for CL.
Formula instantiate(Schema s, const Substitution& sub);

/// Some schema of the theory matches f.
std::optional<Schema> find_axiom(const Formula& f, Theory t);

// ---------------------------------------------------------------------------

enum class Rule { axiom, hyp, mp, mn, le, emn };

/// Line and hypothesis references are 1-based, as in the file format.
struct Justification {
  Rule rule = Rule::axiom;
  Schema schema = Schema::CL;  // for Rule::axiom
  std::size_t a = 0;           // hyp index, or first premise line
  std::size_t b = 0;           // second premise line (mp: a = implication, b = antecedent)

  static Justification axiom(Schema s) { return {Rule::axiom, s, 0, 0}; }
  static Justification hyp(std::size_t k) { return {Rule::hyp, Schema::CL, k, 0}; }
  static Justification mp(std::size_t imp, std::size_t ant) { return {Rule::mp, Schema::CL, imp, ant}; }
  static Justification mn(std::size_t i) { return {Rule::mn, Schema::CL, i, 0}; }
  static Justification le(std::size_t i) { return {Rule::le, Schema::CL, i, 0}; }
  static Justification emn(std::size_t i) { return {Rule::emn, Schema::CL, i, 0}; }
};

struct Line {
  Formula formula;
  Justification why;
};

struct Derivation {
  Theory theory = Theory::cdl;
  std::vector<Formula> hypotheses;
  std::vector<Line> lines;

  /// Formula of 1-based line i.
  const Formula& at(std::size_t i) const { return lines.at(i - 1).formula; }
  /// Last line. Precondition: nonempty.
  const Formula& conclusion() const { return lines.back().formula; }
};

struct CheckReport {
  bool ok = true;
  std::size_t first_bad_line = 0;  // 1-based; 0 when ok
  std::string reason;
};

CheckReport check_derivation(const Derivation& d);

/// Parses the derivation file format. Throws DerivationError or ParseError.
Derivation parse_derivation(std::string_view text);
Derivation load_derivation_file(const std::string& path);
std::string render_derivation(const Derivation& d, RenderStyle style = RenderStyle::sugared);

// ---------------------------------------------------------------------------
// Necessitations (JCDL).

/// Strips zero or more dotted-belief prefixes and returns the remaining
/// bodies, outermost first (the formula itself is element 0).
std::vector<Formula> necessitation_chain(const Formula& f);
/// f is a JCDL axiom under zero or more dotted-belief prefixes.
bool is_possibly_necessitated_axiom(const Formula& f);
/// Built from certificates of possibly necessitated axioms by application only.
bool is_logical_term(const Term& t);
/// Per line: neither a possibly necessitated axiom nor obtainable by MP from
/// earlier lines, and produced by eMN.
std::vector<bool> troublesome_lines(const Derivation& d);
/// Throws DerivationError when d does not check or is not a JCDL derivation.
std::size_t count_troublesome(const Derivation& d);

// ---------------------------------------------------------------------------
// Proof construction.

/// Appends lines to a derivation, reusing an existing line whenever the
/// same formula has already been derived.
class ProofBuilder {
 public:
  explicit ProofBuilder(Theory theory);

  Theory theory() const { return d_.theory; }
  const Derivation& derivation() const { return d_; }
  Derivation take() { return std::move(d_); }

  /// Line of f if present.
  std::optional<std::size_t> find(const Formula& f) const;
  const Formula& at(std::size_t line) const { return d_.at(line); }

  std::size_t add(const Formula& f, Justification why);
  std::size_t hypothesis(const Formula& f);
  std::size_t axiom(Schema s, const Substitution& sub);
  /// A CL line. Throws DerivationError when f is not a tautology.
  std::size_t tautology(const Formula& f);
  std::size_t mp(std::size_t imp, std::size_t ant);
  /// B[cond] (line) for CDL/CDL0, dotted belief for JCDL.
  std::size_t necessitate(std::size_t line, const Formula& cond);
  /// From a line psi <-> psi2, the CDL0 rule conclusion B[psi] chi <-> B[psi2] chi.
  std::size_t le(std::size_t line, const Formula& chi);

  /// Classical reasoning: derives `goal` from the premise lines through one
  /// CL line p1 -> (p2 -> ... -> goal) and MPs.
  std::size_t classical(const Formula& goal, const std::vector<std::size_t>& premises);

  /// Modal reasoning as a theorem: B[c]a1 -> (B[c]a2 -> ... -> B[c]goal)
  /// where a1 -> ... -> goal is a tautology. CDL/CDL0 only.
  std::size_t modal_theorem(const Formula& cond, const std::vector<Formula>& antecedents, const Formula& goal);
  /// Modal reasoning from lines B[c]a_i to B[c]goal.
  std::size_t modal(const Formula& cond, const std::vector<std::size_t>& premises, const Formula& goal);

 private:
  Derivation d_;
  std::unordered_map<Formula, std::size_t> index_;
};

/// Arguments for derive_macro: formulas and terms keyed by metavariable name.
using MacroArgs = Substitution;

/// Names accepted by derive_macro with the theory each derivation is in.
std::vector<std::string> macro_names();
/// Formula metavariables a macro expects, in order.
std::vector<std::string> macro_params(std::string_view name);

/// Full derivation of a derived theorem or rule. Rules (LE, RW, SC and their
/// e-versions) take their premise as a hypothesis. Macros named after CDL
/// axioms with a "0" suffix (KM0, RM0, Inc0, Comm0) derive those axioms in
/// CDL0. Throws DerivationError for unknown names or missing arguments.
Derivation derive_macro(std::string_view name, const MacroArgs& args);

/// The scheme instance the macro ends with.
Formula macro_goal(std::string_view name, const MacroArgs& args);

/// Replaces a hypothesis whose formula is a tautology by a CL line.
Derivation discharge_tautological_hypotheses(const Derivation& d);

/// Simultaneous substitution of formulas for letters in every line.
Derivation substitute_letters(const Derivation& d, const std::map<std::string, Formula>& sub);
Formula substitute_letters(const Formula& f, const std::map<std::string, Formula>& sub);

}  // namespace cdl::proofs
