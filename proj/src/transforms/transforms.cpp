#include "cdl/transforms.hpp"

#include <map>
#include <unordered_map>

#include "cdl/error.hpp"

namespace cdl::transforms {

using proofs::CheckReport;
using proofs::Justification;
using proofs::Line;
using proofs::ProofBuilder;
using proofs::Rule;
using proofs::Schema;
using proofs::Substitution;
using proofs::Theory;

namespace {

void require_checks(const Derivation& d, const char* what) {
  CheckReport r = proofs::check_derivation(d);
  if (!r.ok)
    throw DerivationError(std::string(what) + ": input fails at line " + std::to_string(r.first_bad_line) + ": " +
                          r.reason);
}

void require_theory(const Derivation& d, Theory t, const char* what) {
  if (d.theory != t)
    throw DerivationError(std::string(what) + " needs a " + std::string(proofs::theory_name(t)) + " derivation");
}

// Internal consistency: a transform must produce a checking derivation.
void ensure_output(const Derivation& d, const char* what) {
  CheckReport r = proofs::check_derivation(d);
  if (!r.ok)
    throw Error(std::string(what) + " produced an invalid derivation at line " + std::to_string(r.first_bad_line) +
                ": " + r.reason);
}

Schema plain_counterpart(Schema s) {
  switch (s) {
    case Schema::eK: return Schema::K;
    case Schema::eSucc: return Schema::Succ;
    case Schema::eKM: return Schema::KM;
    case Schema::eRM: return Schema::RM;
    case Schema::eInc: return Schema::Inc;
    case Schema::eComm: return Schema::Comm;
    case Schema::ePI: return Schema::PI;
    case Schema::eNI: return Schema::NI;
    case Schema::eWCon: return Schema::WCon;
    default: return Schema::CL;  // CL, eCert, eSum, eA
  }
}

Schema explicit_counterpart(Schema s) {
  switch (s) {
    case Schema::Succ: return Schema::eSucc;
    case Schema::KM: return Schema::eKM;
    case Schema::RM: return Schema::eRM;
    case Schema::Inc: return Schema::eInc;
    case Schema::Comm: return Schema::eComm;
    case Schema::PI: return Schema::ePI;
    case Schema::NI: return Schema::eNI;
    case Schema::WCon: return Schema::eWCon;
    default: throw DerivationError("no explicit counterpart for " + std::string(proofs::schema_name(s)));
  }
}

// Collects lines with justifications resolved by formula, keeping the first
// occurrence of each formula.
class Assembler {
 public:
  Assembler() { out_.theory = Theory::jcdl; }

  std::optional<std::size_t> find(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t line_of(const Formula& f) const {
    auto k = find(f);
    if (!k) throw Error("missing premise while assembling a derivation: " + render(f, RenderStyle::sugared));
    return *k;
  }

  std::size_t add(const Formula& f, Justification why) {
    if (auto k = find(f)) return *k;
    out_.lines.push_back({f, why});
    index_.emplace(f, out_.lines.size());
    return out_.lines.size();
  }

  std::size_t mp(const Formula& imp, const Formula& ant) {
    if (!imp.is_implies() || imp.lhs() != ant) throw Error("mp premises do not fit");
    return add(imp.rhs(), Justification::mp(line_of(imp), line_of(ant)));
  }

  std::size_t axiom(const Formula& f, Schema s) { return add(f, Justification::axiom(s)); }

  // Appends the first `count` lines of d, re-pointing references by formula.
  void append(const Derivation& d, std::size_t count) {
    for (std::size_t k = 1; k <= count; ++k) {
      const Line& line = d.lines[k - 1];
      if (find(line.formula)) continue;
      Justification j = line.why;
      switch (j.rule) {
        case Rule::mp:
          j.a = line_of(d.at(j.a));
          j.b = line_of(d.at(j.b));
          break;
        case Rule::mn:
        case Rule::le:
        case Rule::emn:
          j.a = line_of(d.at(j.a));
          break;
        case Rule::hyp:
          throw DerivationError("hypotheses are not supported here");
        case Rule::axiom:
          break;
      }
      add(line.formula, j);
    }
  }
  void append(const Derivation& d) { append(d, d.lines.size()); }

  const Derivation& derivation() const { return out_; }
  Derivation take() { return std::move(out_); }

 private:
  Derivation out_;
  std::unordered_map<Formula, std::size_t> index_;
};

// Earlier lines (before 0-based `k`) theta_n -> f and theta_n, as 0-based
// indices (implication, antecedent).
std::optional<std::pair<std::size_t, std::size_t>> mp_witness(const Derivation& d, std::size_t k, const Formula& f) {
  std::unordered_map<Formula, std::size_t> seen;
  for (std::size_t i = 0; i < k; ++i) seen.emplace(d.lines[i].formula, i);
  for (std::size_t i = 0; i < k; ++i) {
    const Formula& g = d.lines[i].formula;
    if (!g.is_implies() || g.rhs() != f) continue;
    auto ant = seen.find(g.lhs());
    if (ant != seen.end()) return std::make_pair(i, ant->second);
  }
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> premises_of(const Derivation& d, std::size_t k) {
  const Line& line = d.lines[k];
  if (line.why.rule == Rule::mp) return {line.why.a - 1, line.why.b - 1};
  if (auto w = mp_witness(d, k, line.formula)) return *w;
  throw Error("line " + std::to_string(k + 1) + " is not an MP consequence of earlier lines");
}

// eK, MP, MP, eCert, MP: from Bd[delta](a -> b) and Bd[delta] a to Bd[delta] b.
void necessitated_mp(Assembler& as, const Formula& delta, const Formula& a, const Formula& b) {
  const Term t = Term::cert(Formula::implies(a, b));
  const Term s = Term::cert(a);
  const Term ts = Term::app(t, s);
  Substitution ek;
  ek.formulas = {{"psi", delta}, {"phi1", a}, {"phi2", b}};
  ek.terms = {{"t", t}, {"s", s}};
  const Formula ek_line = proofs::instantiate(Schema::eK, ek);
  as.axiom(ek_line, Schema::eK);
  as.mp(ek_line, dotted(delta, Formula::implies(a, b)));
  as.mp(ek_line.rhs(), dotted(delta, a));
  Substitution ec;
  ec.formulas = {{"psi", delta}, {"phi", b}};
  ec.terms = {{"t", ts}};
  const Formula ec_line = proofs::instantiate(Schema::eCert, ec);
  as.axiom(ec_line, Schema::eCert);
  as.mp(ec_line, Formula::supports(ts, delta, b));
}

// Cleans necessitations over a fixed base derivation whose lines contain no
// troublesome necessitation.
class Cleaner {
 public:
  explicit Cleaner(const Derivation& base) : base_(base) {}

  // Derivation without troublesome necessitations of Bd[delta] (line k),
  // containing lines 0..k of the base.
  const Derivation& clean(std::size_t k, const Formula& delta) {
    const Formula theta = base_.lines[k].formula;
    const Formula target = dotted(delta, theta);
    auto key = std::make_pair(k, target);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Derivation direct;
    direct.theory = Theory::jcdl;
    direct.lines.assign(base_.lines.begin(), base_.lines.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    direct.lines.push_back({target, Justification::emn(k + 1)});
    if (!proofs::troublesome_lines(direct).back()) return memo_.emplace(key, std::move(direct)).first->second;

    auto [i, j] = premises_of(base_, k);
    const Formula antecedent = base_.lines[j].formula;
    Assembler as;
    as.append(clean(j, delta));
    as.append(clean(i, delta));
    as.append(base_, k + 1);
    necessitated_mp(as, delta, antecedent, theta);
    return memo_.emplace(key, as.take()).first->second;
  }

 private:
  const Derivation& base_;
  std::map<std::pair<std::size_t, Formula>, Derivation> memo_;
};

// Repeats the first occurrence of `last` at the end when dedup moved it.
void end_with(Derivation& d, const Formula& last) {
  if (d.conclusion() == last) return;
  for (const Line& line : d.lines) {
    if (line.formula == last) {
      d.lines.push_back(line);
      return;
    }
  }
  throw Error("derivation lost its final line");
}

}  // namespace

Formula forget_formula(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::bottom:
    case FormulaKind::letter:
      return f;
    case FormulaKind::implies:
      return Formula::implies(forget_formula(f.lhs()), forget_formula(f.rhs()));
    case FormulaKind::belief:
    case FormulaKind::supports:
      return Formula::belief(forget_formula(f.cond()), forget_formula(f.body()));
  }
  return f;
}

Formula realize_formula(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::bottom:
    case FormulaKind::letter:
      return f;
    case FormulaKind::implies:
      return Formula::implies(realize_formula(f.lhs()), realize_formula(f.rhs()));
    case FormulaKind::belief:
      return dotted(realize_formula(f.cond()), realize_formula(f.body()));
    case FormulaKind::supports:
      return Formula::supports(f.term(), realize_formula(f.cond()), realize_formula(f.body()));
  }
  return f;
}

TranslationReport project(const Derivation& d) {
  require_theory(d, Theory::jcdl, "projection");
  require_checks(d, "projection");
  TranslationReport r;
  r.input = d;
  r.output.theory = Theory::cdl;
  for (const Formula& h : d.hypotheses) r.output.hypotheses.push_back(forget_formula(h));
  for (std::size_t k = 0; k < d.lines.size(); ++k) {
    const Line& line = d.lines[k];
    Justification j = line.why;
    if (j.rule == Rule::axiom) j.schema = plain_counterpart(j.schema);
    if (j.rule == Rule::emn) j.rule = Rule::mn;
    r.output.lines.push_back({forget_formula(line.formula), j});
    r.line_map.push_back(k + 1);
  }
  ensure_output(r.output, "projection");
  return r;
}

TranslationReport realize(const Derivation& d) {
  require_theory(d, Theory::cdl, "realization");
  require_checks(d, "realization");
  TranslationReport r;
  r.input = d;
  ProofBuilder pb(Theory::jcdl);
  for (const Formula& h : d.hypotheses) pb.hypothesis(realize_formula(h));
  for (const Line& line : d.lines) {
    const Formula f = realize_formula(line.formula);
    const Justification& j = line.why;
    std::size_t out = 0;
    switch (j.rule) {
      case Rule::hyp:
        out = pb.hypothesis(f);
        break;
      case Rule::mp:
        out = pb.mp(r.line_map[j.a - 1], r.line_map[j.b - 1]);
        break;
      case Rule::mn:
        out = pb.necessitate(r.line_map[j.a - 1], realize_formula(line.formula.cond()));
        break;
      case Rule::le:
      case Rule::emn:
        throw DerivationError("unexpected rule in a CDL derivation");
      case Rule::axiom:
        if (j.schema == Schema::CL) {
          out = pb.tautology(f);
        } else if (j.schema == Schema::K) {
          // Bd(a -> b) -> (Bd a -> Bd b) from eK with certificates, then eCert.
          auto sub = proofs::match_schema(line.formula, Schema::K);
          const Formula delta = realize_formula(sub->formulas.at("psi"));
          const Formula a = realize_formula(sub->formulas.at("phi1"));
          const Formula b = realize_formula(sub->formulas.at("phi2"));
          const Term t = Term::cert(Formula::implies(a, b));
          const Term s = Term::cert(a);
          Substitution ek;
          ek.formulas = {{"psi", delta}, {"phi1", a}, {"phi2", b}};
          ek.terms = {{"t", t}, {"s", s}};
          Substitution ec;
          ec.formulas = {{"psi", delta}, {"phi", b}};
          ec.terms = {{"t", Term::app(t, s)}};
          std::size_t ek_line = pb.axiom(Schema::eK, ek);
          std::size_t ec_line = pb.axiom(Schema::eCert, ec);
          out = pb.classical(f, {ek_line, ec_line});
        } else {
          Schema e = explicit_counterpart(j.schema);
          if (!proofs::match_schema(f, e))
            throw Error("realized " + std::string(proofs::schema_name(j.schema)) + " instance does not match " +
                        std::string(proofs::schema_name(e)));
          out = pb.add(f, Justification::axiom(e));
        }
        break;
    }
    r.line_map.push_back(out);
  }
  r.output = pb.take();
  if (!d.lines.empty()) {
    end_with(r.output, realize_formula(d.conclusion()));
    r.line_map.back() = r.output.lines.size();
  }
  ensure_output(r.output, "realization");
  return r;
}

Derivation forget_derivation(const Derivation& d) { return project(d).output; }
Derivation realize_derivation(const Derivation& d) { return realize(d).output; }

Derivation eliminate_troublesome(const Derivation& d) {
  require_theory(d, Theory::jcdl, "elimination");
  require_checks(d, "elimination");
  if (!d.hypotheses.empty()) throw DerivationError("elimination needs a derivation without hypotheses");

  Derivation cur = d;
  for (;;) {
    std::vector<bool> bad = proofs::troublesome_lines(cur);
    std::size_t p = 0;
    while (p < bad.size() && !bad[p]) ++p;
    if (p == bad.size()) break;

    const Line& line = cur.lines[p];
    Cleaner cleaner(cur);
    Assembler as;
    as.append(cleaner.clean(line.why.a - 1, line.formula.cond()));
    as.append(cur);
    cur = as.take();
  }
  end_with(cur, d.conclusion());
  ensure_output(cur, "elimination");
  return cur;
}

namespace {

class Internalizer {
 public:
  Internalizer(const Derivation& d, const Formula& cond) : d_(d), cond_(cond) {
    for (std::size_t k = 0; k < d.lines.size(); ++k) first_.emplace(d.lines[k].formula, k);
  }

  // Term t with a derivation of {t}:[cond] f added to the assembler.
  Term term_for(const Formula& f) {
    if (auto it = terms_.find(f); it != terms_.end()) return it->second;
    Term t = Term::cert(f);
    if (proofs::is_possibly_necessitated_axiom(f)) {
      necessitated_axiom(f);
    } else {
      std::size_t k = first_.at(f);
      auto [i, j] = premises_of(d_, k);
      const Formula imp = d_.lines[i].formula;
      const Formula ant = d_.lines[j].formula;
      Term ti = term_for(imp);
      Term tj = term_for(ant);
      t = Term::app(ti, tj);
      Substitution ek;
      ek.formulas = {{"psi", cond_}, {"phi1", ant}, {"phi2", f}};
      ek.terms = {{"t", ti}, {"s", tj}};
      const Formula ek_line = proofs::instantiate(Schema::eK, ek);
      as_.axiom(ek_line, Schema::eK);
      as_.mp(ek_line, Formula::supports(ti, cond_, imp));
      as_.mp(ek_line.rhs(), Formula::supports(tj, cond_, ant));
    }
    terms_.emplace(f, t);
    return t;
  }

  Assembler& assembler() { return as_; }

 private:
  // Axiom line, its necessitation chain up to f, then Bd[cond] f.
  void necessitated_axiom(const Formula& f) {
    std::vector<Formula> chain = proofs::necessitation_chain(f);
    std::size_t base = 0;
    std::optional<Schema> s;
    while (!(s = proofs::find_axiom(chain[base], Theory::jcdl))) ++base;
    std::size_t line = as_.axiom(chain[base], *s);
    for (std::size_t k = base; k-- > 0;) line = as_.add(chain[k], Justification::emn(line));
    as_.add(dotted(cond_, f), Justification::emn(as_.line_of(f)));
  }

  const Derivation& d_;
  Formula cond_;
  std::unordered_map<Formula, std::size_t> first_;
  std::unordered_map<Formula, Term> terms_;
  Assembler as_;
};

}  // namespace

Internalized internalize(const Derivation& d, const Formula& cond) {
  require_theory(d, Theory::jcdl, "internalization");
  require_checks(d, "internalization");
  if (!d.hypotheses.empty()) throw DerivationError("internalization needs a derivation without hypotheses");
  if (!is_jcdl(cond)) throw LanguageError("internalization condition must be a JCDL formula");

  Derivation clean = eliminate_troublesome(d);
  Internalizer in(clean, cond);
  Term t = in.term_for(clean.conclusion());
  Derivation out = in.assembler().take();
  end_with(out, Formula::supports(t, cond, d.conclusion()));
  ensure_output(out, "internalization");
  return {t, std::move(out)};
}

}  // namespace cdl::transforms
