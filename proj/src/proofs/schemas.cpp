#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

#include "cdl/error.hpp"
#include "cdl/proofs.hpp"

namespace cdl::proofs {

namespace {

// Schemas are stored as formulas in which metavariables are letters with a
// '?' prefix (formulas) or certificates of '#'-prefixed letters (terms).
// Neither can come out of the parser, so they never clash with user letters.

Formula mv(const char* name) { return Formula::letter(std::string("?") + name); }
Term tv(const char* name) { return Term::cert(Formula::letter(std::string("#") + name)); }

Formula imp(const Formula& a, const Formula& b) { return Formula::implies(a, b); }
Formula bel(const Formula& c, const Formula& b) { return Formula::belief(c, b); }
Formula sup(const Term& t, const Formula& c, const Formula& b) { return Formula::supports(t, c, b); }

struct SchemaInfo {
  Schema schema;
  std::string_view name;
  Formula pattern;
};

const std::vector<SchemaInfo>& table() {
  static const std::vector<SchemaInfo> t = [] {
    const Formula psi = mv("psi"), phi = mv("phi"), chi = mv("chi"), phi1 = mv("phi1"), phi2 = mv("phi2");
    const Formula bot = Formula::bottom();
    const Term tt = tv("t"), ss = tv("s");
    const Formula psi_phi = conj(psi, phi);
    const Formula phi_psi = conj(phi, psi);
    std::vector<SchemaInfo> v;
    v.push_back({Schema::CL, "CL", bot});
    v.push_back({Schema::K, "K", imp(bel(psi, imp(phi1, phi2)), imp(bel(psi, phi1), bel(psi, phi2)))});
    v.push_back({Schema::Succ, "Succ", bel(psi, psi)});
    v.push_back({Schema::IEa, "IEa", imp(bel(psi, phi), iff(bel(psi_phi, chi), bel(psi, chi)))});
    v.push_back({Schema::IEb, "IEb", imp(neg(bel(psi, neg(phi))), iff(bel(psi_phi, chi), bel(psi, imp(phi, chi))))});
    v.push_back({Schema::PI, "PI", imp(bel(psi, chi), bel(phi, bel(psi, chi)))});
    v.push_back({Schema::NI, "NI", imp(neg(bel(psi, chi)), bel(phi, neg(bel(psi, chi))))});
    v.push_back({Schema::WCon, "WCon", imp(bel(psi, bot), neg(psi))});
    v.push_back({Schema::KM, "KM", imp(bel(psi, bot), bel(psi_phi, bot))});
    v.push_back({Schema::RM, "RM", imp(neg(bel(psi, neg(phi))), imp(bel(psi, chi), bel(psi_phi, chi)))});
    v.push_back({Schema::Inc, "Inc", imp(bel(psi_phi, chi), bel(psi, imp(phi, chi)))});
    v.push_back({Schema::Comm, "Comm", imp(bel(psi_phi, chi), bel(phi_psi, chi))});
    v.push_back({Schema::eCert, "eCert", imp(sup(tt, psi, phi), dotted(psi, phi))});
    v.push_back({Schema::eK, "eK",
                 imp(sup(tt, psi, imp(phi1, phi2)), imp(sup(ss, psi, phi1), sup(Term::app(tt, ss), psi, phi2)))});
    v.push_back({Schema::eSum, "eSum", imp(disj(sup(tt, psi, phi), sup(ss, psi, phi)), sup(Term::sum(tt, ss), psi, phi))});
    v.push_back({Schema::eSucc, "eSucc", dotted(psi, psi)});
    v.push_back({Schema::eKM, "eKM", imp(sup(tt, psi, bot), sup(tt, psi_phi, bot))});
    v.push_back({Schema::eRM, "eRM", imp(neg(dotted(psi, neg(phi))), imp(sup(tt, psi, chi), sup(tt, psi_phi, chi)))});
    v.push_back({Schema::eInc, "eInc", imp(sup(tt, psi_phi, chi), dotted(psi, imp(phi, chi)))});
    v.push_back({Schema::eComm, "eComm", imp(sup(tt, psi_phi, chi), sup(tt, phi_psi, chi))});
    v.push_back({Schema::ePI, "ePI", imp(sup(tt, psi, chi), dotted(phi, sup(tt, psi, chi)))});
    v.push_back({Schema::eNI, "eNI", imp(neg(sup(tt, psi, chi)), dotted(phi, neg(sup(tt, psi, chi))))});
    v.push_back({Schema::eWCon, "eWCon", imp(sup(tt, psi, bot), neg(psi))});
    v.push_back({Schema::eA, "eA", imp(sup(tt, psi, phi), imp(dotted(chi, phi), sup(tt, chi, phi)))});
    return v;
  }();
  return t;
}

const SchemaInfo& info(Schema s) { return table().at(static_cast<std::size_t>(s)); }

bool is_formula_var(const Formula& f) { return f.is_letter() && !f.name().empty() && f.name()[0] == '?'; }

bool is_term_var(const Term& t) {
  if (!t.is_cert()) return false;
  Formula c = t.certified();
  return c.is_letter() && !c.name().empty() && c.name()[0] == '#';
}

bool match_term(const Term& pat, const Term& t, Substitution& sub);

bool match(const Formula& pat, const Formula& f, Substitution& sub) {
  if (is_formula_var(pat)) {
    std::string name = pat.name().substr(1);
    auto [it, inserted] = sub.formulas.emplace(name, f);
    return inserted || it->second == f;
  }
  if (pat.kind() != f.kind()) return false;
  switch (pat.kind()) {
    case FormulaKind::bottom:
      return true;
    case FormulaKind::letter:
      return pat.name() == f.name();
    case FormulaKind::implies:
      return match(pat.lhs(), f.lhs(), sub) && match(pat.rhs(), f.rhs(), sub);
    case FormulaKind::supports:
      if (!match_term(pat.term(), f.term(), sub)) return false;
      [[fallthrough]];
    case FormulaKind::belief:
      return match(pat.cond(), f.cond(), sub) && match(pat.body(), f.body(), sub);
  }
  return false;
}

bool match_term(const Term& pat, const Term& t, Substitution& sub) {
  if (is_term_var(pat)) {
    std::string name = pat.certified().name().substr(1);
    auto [it, inserted] = sub.terms.emplace(name, t);
    return inserted || it->second == t;
  }
  if (pat.kind() != t.kind()) return false;
  if (pat.is_cert()) return match(pat.certified(), t.certified(), sub);
  return match_term(pat.left(), t.left(), sub) && match_term(pat.right(), t.right(), sub);
}

Term subst_term(const Term& pat, const Substitution& sub);

Formula subst(const Formula& pat, const Substitution& sub) {
  if (is_formula_var(pat)) {
    auto it = sub.formulas.find(pat.name().substr(1));
    if (it == sub.formulas.end()) throw DerivationError("unbound metavariable '" + pat.name().substr(1) + "'");
    return it->second;
  }
  switch (pat.kind()) {
    case FormulaKind::bottom:
    case FormulaKind::letter:
      return pat;
    case FormulaKind::implies:
      return Formula::implies(subst(pat.lhs(), sub), subst(pat.rhs(), sub));
    case FormulaKind::belief:
      return Formula::belief(subst(pat.cond(), sub), subst(pat.body(), sub));
    case FormulaKind::supports:
      return Formula::supports(subst_term(pat.term(), sub), subst(pat.cond(), sub), subst(pat.body(), sub));
  }
  return pat;
}

Term subst_term(const Term& pat, const Substitution& sub) {
  if (is_term_var(pat)) {
    std::string name = pat.certified().name().substr(1);
    auto it = sub.terms.find(name);
    if (it == sub.terms.end()) throw DerivationError("unbound term metavariable '" + name + "'");
    return it->second;
  }
  switch (pat.kind()) {
    case TermKind::cert:
      return Term::cert(subst(pat.certified(), sub));
    case TermKind::app:
      return Term::app(subst_term(pat.left(), sub), subst_term(pat.right(), sub));
    case TermKind::sum:
      return Term::sum(subst_term(pat.left(), sub), subst_term(pat.right(), sub));
  }
  return pat;
}

void collect_vars(const Formula& f, std::vector<std::string>& fv, std::vector<std::string>& tv);

void collect_term_vars(const Term& t, std::vector<std::string>& fv, std::vector<std::string>& tvs) {
  if (is_term_var(t)) {
    std::string n = t.certified().name().substr(1);
    if (std::find(tvs.begin(), tvs.end(), n) == tvs.end()) tvs.push_back(n);
    return;
  }
  if (t.is_cert()) {
    collect_vars(t.certified(), fv, tvs);
  } else {
    collect_term_vars(t.left(), fv, tvs);
    collect_term_vars(t.right(), fv, tvs);
  }
}

void collect_vars(const Formula& f, std::vector<std::string>& fv, std::vector<std::string>& tvs) {
  if (is_formula_var(f)) {
    std::string n = f.name().substr(1);
    if (std::find(fv.begin(), fv.end(), n) == fv.end()) fv.push_back(n);
    return;
  }
  switch (f.kind()) {
    case FormulaKind::bottom:
    case FormulaKind::letter:
      return;
    case FormulaKind::implies:
      collect_vars(f.lhs(), fv, tvs);
      collect_vars(f.rhs(), fv, tvs);
      return;
    case FormulaKind::supports:
      collect_term_vars(f.term(), fv, tvs);
      [[fallthrough]];
    case FormulaKind::belief:
      collect_vars(f.cond(), fv, tvs);
      collect_vars(f.body(), fv, tvs);
      return;
  }
}

// --- Tautology oracle -------------------------------------------------------

class TruthTable {
 public:
  explicit TruthTable(const Formula& f) { collect(f); }

  bool tautology(const Formula& f) {
    const std::size_t n = atoms_.size();
    if (n > 26) throw DerivationError("too many propositional atoms for the tautology check");
    words_ = n <= 6 ? 1 : (std::size_t{1} << (n - 6));
    mask_ = n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::size_t{1} << n)) - 1);
    std::vector<std::uint64_t> v = eval(f);
    for (std::size_t i = 0; i < words_; ++i) {
      if ((v[i] & mask_) != mask_) return false;
    }
    return true;
  }

 private:
  void collect(const Formula& f) {
    if (f.is_bottom()) return;
    if (f.is_implies()) {
      collect(f.lhs());
      collect(f.rhs());
      return;
    }
    atoms_.emplace(f, atoms_.size());
  }

  std::vector<std::uint64_t> column(std::size_t atom) const {
    static constexpr std::array<std::uint64_t, 6> kPatterns = {
        0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
        0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
    };
    std::vector<std::uint64_t> v(words_);
    for (std::size_t w = 0; w < words_; ++w) {
      if (atom < 6) {
        v[w] = kPatterns[atom];
      } else {
        v[w] = ((w >> (atom - 6)) & 1u) ? ~std::uint64_t{0} : 0;
      }
    }
    return v;
  }

  std::vector<std::uint64_t> eval(const Formula& f) const {
    if (f.is_bottom()) return std::vector<std::uint64_t>(words_, 0);
    if (f.is_implies()) {
      std::vector<std::uint64_t> a = eval(f.lhs());
      std::vector<std::uint64_t> b = eval(f.rhs());
      for (std::size_t i = 0; i < words_; ++i) a[i] = ~a[i] | b[i];
      return a;
    }
    return column(atoms_.at(f));
  }

  std::unordered_map<Formula, std::size_t> atoms_;
  std::size_t words_ = 1;
  std::uint64_t mask_ = 0;
};

}  // namespace

std::string_view theory_name(Theory t) {
  switch (t) {
    case Theory::cdl0: return "CDL0";
    case Theory::cdl: return "CDL";
    case Theory::jcdl: return "JCDL";
  }
  return "?";
}

Theory parse_theory(std::string_view name) {
  if (name == "CDL0") return Theory::cdl0;
  if (name == "CDL") return Theory::cdl;
  if (name == "JCDL") return Theory::jcdl;
  throw DerivationError("unknown theory '" + std::string(name) + "'");
}

Language language_of(Theory t) { return t == Theory::jcdl ? Language::jcdl : Language::cdl; }

std::string_view schema_name(Schema s) { return info(s).name; }

std::optional<Schema> schema_from_name(std::string_view name) {
  for (const SchemaInfo& i : table()) {
    if (i.name == name) return i.schema;
  }
  return std::nullopt;
}

const std::vector<Schema>& schemas_of(Theory t) {
  using S = Schema;
  static const std::vector<Schema> cdl0 = {S::CL, S::K, S::Succ, S::IEa, S::IEb, S::PI, S::NI, S::WCon};
  static const std::vector<Schema> cdl = {S::CL, S::K, S::Succ, S::KM, S::RM, S::Inc, S::Comm, S::PI, S::NI, S::WCon};
  static const std::vector<Schema> jcdl = {S::CL,  S::eCert, S::eK,   S::eSum, S::eSucc, S::eKM,  S::eRM,
                                           S::eInc, S::eComm, S::ePI, S::eNI, S::eWCon, S::eA};
  switch (t) {
    case Theory::cdl0: return cdl0;
    case Theory::cdl: return cdl;
    case Theory::jcdl: return jcdl;
  }
  return cdl;
}

bool schema_in_theory(Schema s, Theory t) {
  const auto& v = schemas_of(t);
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> formula_metavars(Schema s) {
  std::vector<std::string> fv, tvs;
  if (s != Schema::CL) collect_vars(info(s).pattern, fv, tvs);
  return fv;
}

std::vector<std::string> term_metavars(Schema s) {
  std::vector<std::string> fv, tvs;
  if (s != Schema::CL) collect_vars(info(s).pattern, fv, tvs);
  return tvs;
}

bool is_tautology(const Formula& f) { return TruthTable(f).tautology(f); }

std::optional<Substitution> match_schema(const Formula& f, Schema s) {
  if (s == Schema::CL) {
    if (is_tautology(f)) return Substitution{};
    return std::nullopt;
  }
  Substitution sub;
  if (match(info(s).pattern, f, sub)) return sub;
  return std::nullopt;
}

Formula instantiate(Schema s, const Substitution& sub) {
  if (s == Schema::CL) throw DerivationError("CL has no single instance to build");
  return subst(info(s).pattern, sub);
}

std::optional<Schema> find_axiom(const Formula& f, Theory t) {
  // Structural schemas first; the truth-table check is the expensive one.
  for (Schema s : schemas_of(t)) {
    if (s != Schema::CL && match_schema(f, s)) return s;
  }
  if (in_language(f, language_of(t)) && is_tautology(f)) return Schema::CL;
  return std::nullopt;
}

}  // namespace cdl::proofs
