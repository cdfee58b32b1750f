#include <algorithm>

#include "cdl/error.hpp"
#include "cdl/proofs.hpp"
#include "cdl/transforms.hpp"

namespace cdl::proofs {

namespace {

Formula B(const Formula& c, const Formula& f) { return Formula::belief(c, f); }
Formula imp(const Formula& a, const Formula& b) { return Formula::implies(a, b); }

Substitution subst(std::initializer_list<std::pair<const char*, Formula>> binds) {
  Substitution s;
  for (const auto& [name, f] : binds) s.formulas.emplace(name, f);
  return s;
}

struct MacroSpec {
  const char* name;
  Theory theory;
  std::vector<std::string> params;
  bool rule;  // premise taken as a hypothesis
};

const std::vector<MacroSpec>& specs() {
  static const std::vector<MacroSpec> v = {
      {"Cut", Theory::cdl, {"psi", "phi", "chi"}, false},
      {"CM", Theory::cdl, {"psi", "phi", "chi"}, false},
      {"Taut", Theory::cdl, {"phi"}, false},
      {"And", Theory::cdl, {"psi", "phi1", "phi2"}, false},
      {"Or", Theory::cdl, {"psi1", "psi2", "phi"}, false},
      {"PR", Theory::cdl, {"phi", "psi", "chi"}, false},
      {"NR", Theory::cdl, {"phi", "psi", "chi"}, false},
      {"LE", Theory::cdl, {"psi", "psi2", "chi"}, true},
      {"RW", Theory::cdl, {"psi", "chi", "chi2"}, true},
      {"SC", Theory::cdl, {"psi", "chi"}, true},
      {"IEa", Theory::cdl, {"psi", "phi", "chi"}, false},
      {"IEb", Theory::cdl, {"psi", "phi", "chi"}, false},
      {"KM0", Theory::cdl0, {"psi", "phi"}, false},
      {"RM0", Theory::cdl0, {"psi", "phi", "chi"}, false},
      {"Inc0", Theory::cdl0, {"psi", "phi", "chi"}, false},
      {"Comm0", Theory::cdl0, {"psi", "phi", "chi"}, false},
  };
  return v;
}

const char* const kRealized[] = {"Cut", "CM", "Taut", "And", "Or", "PR", "NR", "LE", "RW", "SC"};

const MacroSpec* find_spec(std::string_view name) {
  for (const MacroSpec& s : specs())
    if (name == s.name) return &s;
  return nullptr;
}

bool is_realized_name(std::string_view name) {
  if (name.size() < 2 || name[0] != 'e') return false;
  return std::find(std::begin(kRealized), std::end(kRealized), name.substr(1)) != std::end(kRealized);
}

const MacroSpec& spec_or_throw(std::string_view name) {
  std::string_view base = is_realized_name(name) ? name.substr(1) : name;
  const MacroSpec* s = find_spec(base);
  if (!s) throw DerivationError("unknown macro '" + std::string(name) + "'");
  return *s;
}

// Derivations of the derived theorems, each returning the line of its goal.
class Tactics {
 public:
  explicit Tactics(ProofBuilder& pb) : pb_(pb) {}

  std::size_t ax(Schema s, std::initializer_list<std::pair<const char*, Formula>> binds) {
    return pb_.axiom(s, subst(binds));
  }

  std::size_t succ(const Formula& psi) { return ax(Schema::Succ, {{"psi", psi}}); }

  // B[psi]phi -> (B[psi & phi]chi -> B[psi]chi)
  std::size_t cut(const Formula& psi, const Formula& phi, const Formula& chi) {
    std::size_t inc = ax(Schema::Inc, {{"psi", psi}, {"phi", phi}, {"chi", chi}});
    std::size_t k = ax(Schema::K, {{"psi", psi}, {"phi1", phi}, {"phi2", chi}});
    return pb_.classical(imp(B(psi, phi), imp(B(conj(psi, phi), chi), B(psi, chi))), {inc, k});
  }

  // B[psi]phi -> (B[psi]chi -> B[psi & phi]chi)
  std::size_t cm(const Formula& psi, const Formula& phi, const Formula& chi) {
    const Formula pp = conj(psi, phi);
    std::size_t rm = ax(Schema::RM, {{"psi", psi}, {"phi", phi}, {"chi", chi}});
    std::size_t clash = pb_.modal_theorem(psi, {phi, neg(phi)}, Formula::bottom());
    std::size_t km = ax(Schema::KM, {{"psi", psi}, {"phi", phi}});
    std::size_t explode = pb_.modal_theorem(pp, {Formula::bottom()}, chi);
    return pb_.classical(imp(B(psi, phi), imp(B(psi, chi), B(pp, chi))), {rm, clash, km, explode});
  }

  std::size_t taut(const Formula& phi) { return pb_.tautology(iff(believe(phi), B(top(), phi))); }

  std::size_t and_(const Formula& psi, const Formula& phi1, const Formula& phi2) {
    return pb_.modal_theorem(psi, {phi1, phi2}, conj(phi1, phi2));
  }

  std::size_t or_(const Formula& psi1, const Formula& psi2, const Formula& phi) {
    const Formula d = disj(psi1, psi2);
    std::vector<std::size_t> parts;
    for (const Formula& psi : {psi1, psi2}) {
      std::size_t to_d = pb_.modal(psi, {succ(psi)}, d);
      std::size_t cm_line = cm(psi, d, phi);
      std::size_t comm = ax(Schema::Comm, {{"psi", psi}, {"phi", d}, {"chi", phi}});
      std::size_t inc = ax(Schema::Inc, {{"psi", d}, {"phi", psi}, {"chi", phi}});
      parts.push_back(pb_.classical(imp(B(psi, phi), B(d, imp(psi, phi))), {to_d, cm_line, comm, inc}));
    }
    std::size_t mr = pb_.modal_theorem(d, {imp(psi1, phi), imp(psi2, phi), d}, phi);
    parts.push_back(mr);
    parts.push_back(succ(d));
    return pb_.classical(imp(B(psi1, phi), imp(B(psi2, phi), B(d, phi))), parts);
  }

  // B[phi] Y <-> (B[phi] false | Y) with Y = B[psi]chi, or Y = ~B[psi]chi
  // when `negative`.
  std::size_t reduction(const Formula& phi, const Formula& psi, const Formula& chi, bool negative) {
    const Formula bpc = B(psi, chi);
    const Formula y = negative ? neg(bpc) : bpc;
    const Formula by = B(phi, y);
    const Formula bny = B(phi, neg(y));
    const Formula bf = B(phi, Formula::bottom());

    std::size_t l1 = pb_.modal_theorem(phi, {neg(y), y}, Formula::bottom());
    std::size_t l2 = pb_.classical(imp(conj(by, neg(bf)), neg(bny)), {l1});
    std::size_t l3;
    if (!negative) {
      l3 = ax(Schema::NI, {{"psi", psi}, {"chi", chi}, {"phi", phi}});
    } else {
      // ~~B[psi]chi -> B[phi] ~~B[psi]chi from PI.
      std::size_t pi = ax(Schema::PI, {{"psi", psi}, {"chi", chi}, {"phi", phi}});
      std::size_t dn = pb_.modal_theorem(phi, {bpc}, neg(y));
      l3 = pb_.classical(imp(neg(y), bny), {pi, dn});
    }
    std::size_t l4 = pb_.classical(imp(neg(bny), y), {l3});
    std::size_t l5 = pb_.classical(imp(conj(by, neg(bf)), y), {l2, l4});
    std::size_t l6 = pb_.classical(imp(by, disj(bf, y)), {l5});
    std::size_t l7 = ax(negative ? Schema::NI : Schema::PI, {{"psi", psi}, {"chi", chi}, {"phi", phi}});
    std::size_t l8 = pb_.modal_theorem(phi, {Formula::bottom()}, y);
    std::size_t l9 = pb_.classical(imp(disj(bf, y), by), {l7, l8});
    return pb_.classical(iff(by, disj(bf, y)), {l6, l9});
  }

  // B[psi]psi2 from the hypothesis line psi <-> psi2.
  std::size_t shift(std::size_t h, const Formula& psi, const Formula& psi2) {
    std::size_t cond = pb_.classical(imp(psi, psi2), {h});
    return pb_.modal(psi, {pb_.necessitate(cond, psi), succ(psi)}, psi2);
  }

  std::size_t le(const Formula& psi, const Formula& psi2, const Formula& chi) {
    std::size_t h = pb_.hypothesis(iff(psi, psi2));
    std::size_t h_back = pb_.classical(iff(psi2, psi), {h});
    std::size_t b12 = shift(h, psi, psi2);
    std::size_t b21 = shift(h_back, psi2, psi);
    auto direction = [&](const Formula& a, const Formula& b, std::size_t bab, std::size_t bba) {
      std::size_t cm_line = cm(a, b, chi);
      std::size_t comm = ax(Schema::Comm, {{"psi", a}, {"phi", b}, {"chi", chi}});
      std::size_t cut_line = cut(b, a, chi);
      return pb_.classical(imp(B(a, chi), B(b, chi)), {bab, bba, cm_line, comm, cut_line});
    };
    std::size_t fwd = direction(psi, psi2, b12, b21);
    std::size_t bwd = direction(psi2, psi, b21, b12);
    return pb_.classical(iff(B(psi, chi), B(psi2, chi)), {fwd, bwd});
  }

  std::size_t rw(const Formula& psi, const Formula& chi, const Formula& chi2) {
    std::size_t h = pb_.hypothesis(imp(chi, chi2));
    std::size_t n = pb_.necessitate(h, psi);
    std::size_t k = ax(Schema::K, {{"psi", psi}, {"phi1", chi}, {"phi2", chi2}});
    return pb_.mp(k, n);
  }

  std::size_t sc(const Formula& psi, const Formula& chi) {
    std::size_t h = pb_.hypothesis(imp(psi, chi));
    std::size_t n = pb_.necessitate(h, psi);
    std::size_t k = ax(Schema::K, {{"psi", psi}, {"phi1", psi}, {"phi2", chi}});
    return pb_.mp(pb_.mp(k, n), succ(psi));
  }

  std::size_t iea(const Formula& psi, const Formula& phi, const Formula& chi) {
    std::size_t cm_line = cm(psi, phi, chi);
    std::size_t cut_line = cut(psi, phi, chi);
    return pb_.classical(imp(B(psi, phi), iff(B(conj(psi, phi), chi), B(psi, chi))), {cm_line, cut_line});
  }

  std::size_t ieb(const Formula& psi, const Formula& phi, const Formula& chi) {
    const Formula pp = conj(psi, phi);
    std::size_t inc = ax(Schema::Inc, {{"psi", psi}, {"phi", phi}, {"chi", chi}});
    std::size_t rm = ax(Schema::RM, {{"psi", psi}, {"phi", phi}, {"chi", imp(phi, chi)}});
    std::size_t bphi = pb_.modal(pp, {succ(pp)}, phi);
    std::size_t k = ax(Schema::K, {{"psi", pp}, {"phi1", phi}, {"phi2", chi}});
    Formula goal = imp(neg(B(psi, neg(phi))), iff(B(pp, chi), B(psi, imp(phi, chi))));
    return pb_.classical(goal, {inc, rm, bphi, k});
  }

  // CDL0 derivations of the CDL-only axioms.

  std::size_t km0(const Formula& psi, const Formula& phi) {
    std::size_t mr = pb_.modal_theorem(psi, {Formula::bottom()}, phi);
    std::size_t ie = ax(Schema::IEa, {{"psi", psi}, {"phi", phi}, {"chi", Formula::bottom()}});
    return pb_.classical(imp(B(psi, Formula::bottom()), B(conj(psi, phi), Formula::bottom())), {mr, ie});
  }

  std::size_t rm0(const Formula& psi, const Formula& phi, const Formula& chi) {
    std::size_t mr = pb_.modal_theorem(psi, {chi}, imp(phi, chi));
    std::size_t ie = ax(Schema::IEb, {{"psi", psi}, {"phi", phi}, {"chi", chi}});
    Formula goal = imp(neg(B(psi, neg(phi))), imp(B(psi, chi), B(conj(psi, phi), chi)));
    return pb_.classical(goal, {mr, ie});
  }

  std::size_t inc0(const Formula& psi, const Formula& phi, const Formula& chi) {
    std::size_t ie = ax(Schema::IEb, {{"psi", psi}, {"phi", phi}, {"chi", chi}});
    std::size_t mr = pb_.modal_theorem(psi, {neg(phi)}, imp(phi, chi));
    return pb_.classical(imp(B(conj(psi, phi), chi), B(psi, imp(phi, chi))), {ie, mr});
  }

  std::size_t comm0(const Formula& psi, const Formula& phi, const Formula& chi) {
    std::size_t swap = pb_.tautology(iff(conj(psi, phi), conj(phi, psi)));
    std::size_t le = pb_.le(swap, chi);
    return pb_.classical(imp(B(conj(psi, phi), chi), B(conj(phi, psi), chi)), {le});
  }

 private:
  ProofBuilder& pb_;
};

std::vector<Formula> args_for(const MacroSpec& spec, const MacroArgs& args, std::string_view name) {
  std::vector<Formula> out;
  for (const std::string& p : spec.params) {
    auto it = args.formulas.find(p);
    if (it == args.formulas.end())
      throw DerivationError("macro " + std::string(name) + " needs argument '" + p + "'");
    out.push_back(it->second);
  }
  return out;
}

Derivation derive_plain(const MacroSpec& spec, const std::vector<Formula>& a) {
  for (const Formula& f : a) {
    if (!is_cdl(f))
      throw DerivationError("macro " + std::string(spec.name) + " takes CDL formulas");
  }
  ProofBuilder pb(spec.theory);
  Tactics t(pb);
  const std::string name = spec.name;
  std::size_t goal = 0;
  if (name == "Cut") goal = t.cut(a[0], a[1], a[2]);
  else if (name == "CM") goal = t.cm(a[0], a[1], a[2]);
  else if (name == "Taut") goal = t.taut(a[0]);
  else if (name == "And") goal = t.and_(a[0], a[1], a[2]);
  else if (name == "Or") goal = t.or_(a[0], a[1], a[2]);
  else if (name == "PR") goal = t.reduction(a[0], a[1], a[2], false);
  else if (name == "NR") goal = t.reduction(a[0], a[1], a[2], true);
  else if (name == "LE") goal = t.le(a[0], a[1], a[2]);
  else if (name == "RW") goal = t.rw(a[0], a[1], a[2]);
  else if (name == "SC") goal = t.sc(a[0], a[1]);
  else if (name == "IEa") goal = t.iea(a[0], a[1], a[2]);
  else if (name == "IEb") goal = t.ieb(a[0], a[1], a[2]);
  else if (name == "KM0") goal = t.km0(a[0], a[1]);
  else if (name == "RM0") goal = t.rm0(a[0], a[1], a[2]);
  else if (name == "Inc0") goal = t.inc0(a[0], a[1], a[2]);
  else if (name == "Comm0") goal = t.comm0(a[0], a[1], a[2]);

  Derivation d = pb.take();
  // Sub-derivations are shared through line reuse, so the goal may have
  // been derived before other lines; repeat it at the end (its premises
  // are all earlier).
  if (goal != d.lines.size()) d.lines.push_back(d.lines[goal - 1]);
  return d;
}

std::string placeholder(const std::string& param) { return "%" + param; }

}  // namespace

std::vector<std::string> macro_names() {
  std::vector<std::string> out;
  for (const MacroSpec& s : specs()) out.emplace_back(s.name);
  for (const char* r : kRealized) out.push_back(std::string("e") + r);
  return out;
}

std::vector<std::string> macro_params(std::string_view name) { return spec_or_throw(name).params; }

Derivation derive_macro(std::string_view name, const MacroArgs& args) {
  const MacroSpec& spec = spec_or_throw(name);
  std::vector<Formula> a = args_for(spec, args, name);
  if (!is_realized_name(name)) return derive_plain(spec, a);

  // Derive the CDL scheme over placeholder letters, realize it, then plug in
  // the JCDL arguments.
  std::vector<Formula> holes;
  std::map<std::string, Formula> fill;
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    if (!is_jcdl(a[i])) throw DerivationError("macro " + std::string(name) + " takes JCDL formulas");
    holes.push_back(letter(placeholder(spec.params[i])));
    fill.emplace(placeholder(spec.params[i]), a[i]);
  }
  Derivation realized = transforms::realize_derivation(derive_plain(spec, holes));
  return substitute_letters(realized, fill);
}

Formula macro_goal(std::string_view name, const MacroArgs& args) {
  const MacroSpec& spec = spec_or_throw(name);
  std::vector<Formula> a = args_for(spec, args, name);
  const bool realized = is_realized_name(name);
  std::map<std::string, Formula> fill;
  if (realized) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      fill.emplace(placeholder(spec.params[i]), a[i]);
      a[i] = letter(placeholder(spec.params[i]));
    }
  }
  const std::string base = spec.name;
  const Formula bot = Formula::bottom();
  Formula g = bot;
  if (base == "Cut") g = imp(B(a[0], a[1]), imp(B(conj(a[0], a[1]), a[2]), B(a[0], a[2])));
  else if (base == "CM") g = imp(B(a[0], a[1]), imp(B(a[0], a[2]), B(conj(a[0], a[1]), a[2])));
  else if (base == "Taut") g = iff(believe(a[0]), B(top(), a[0]));
  else if (base == "And") g = imp(B(a[0], a[1]), imp(B(a[0], a[2]), B(a[0], conj(a[1], a[2]))));
  else if (base == "Or") g = imp(B(a[0], a[2]), imp(B(a[1], a[2]), B(disj(a[0], a[1]), a[2])));
  else if (base == "PR") g = iff(B(a[0], B(a[1], a[2])), disj(B(a[0], bot), B(a[1], a[2])));
  else if (base == "NR") g = iff(B(a[0], neg(B(a[1], a[2]))), disj(B(a[0], bot), neg(B(a[1], a[2]))));
  else if (base == "LE") g = iff(B(a[0], a[2]), B(a[1], a[2]));
  else if (base == "RW") g = imp(B(a[0], a[1]), B(a[0], a[2]));
  else if (base == "SC") g = B(a[0], a[1]);
  else if (base == "IEa") g = imp(B(a[0], a[1]), iff(B(conj(a[0], a[1]), a[2]), B(a[0], a[2])));
  else if (base == "IEb")
    g = imp(neg(B(a[0], neg(a[1]))), iff(B(conj(a[0], a[1]), a[2]), B(a[0], imp(a[1], a[2]))));
  else if (base == "KM0") g = imp(B(a[0], bot), B(conj(a[0], a[1]), bot));
  else if (base == "RM0") g = imp(neg(B(a[0], neg(a[1]))), imp(B(a[0], a[2]), B(conj(a[0], a[1]), a[2])));
  else if (base == "Inc0") g = imp(B(conj(a[0], a[1]), a[2]), B(a[0], imp(a[1], a[2])));
  else if (base == "Comm0") g = imp(B(conj(a[0], a[1]), a[2]), B(conj(a[1], a[0]), a[2]));
  if (!realized) return g;
  return substitute_letters(transforms::realize_formula(g), fill);
}

// ---------------------------------------------------------------------------

Derivation discharge_tautological_hypotheses(const Derivation& d) {
  std::vector<std::size_t> renumber(d.hypotheses.size(), 0);
  Derivation out;
  out.theory = d.theory;
  for (std::size_t h = 0; h < d.hypotheses.size(); ++h) {
    const Formula& f = d.hypotheses[h];
    if (in_language(f, language_of(d.theory)) && is_tautology(f)) continue;
    out.hypotheses.push_back(f);
    renumber[h] = out.hypotheses.size();
  }
  for (const Line& line : d.lines) {
    Line copy = line;
    if (line.why.rule == Rule::hyp && line.why.a >= 1 && line.why.a <= renumber.size()) {
      std::size_t k = renumber[line.why.a - 1];
      copy.why = k == 0 ? Justification::axiom(Schema::CL) : Justification::hyp(k);
    }
    out.lines.push_back(copy);
  }
  return out;
}

namespace {

Term substitute_term(const Term& t, const std::map<std::string, Formula>& sub);

Formula substitute_formula(const Formula& f, const std::map<std::string, Formula>& sub) {
  switch (f.kind()) {
    case FormulaKind::bottom:
      return f;
    case FormulaKind::letter: {
      auto it = sub.find(f.name());
      return it == sub.end() ? f : it->second;
    }
    case FormulaKind::implies:
      return Formula::implies(substitute_formula(f.lhs(), sub), substitute_formula(f.rhs(), sub));
    case FormulaKind::belief:
      return Formula::belief(substitute_formula(f.cond(), sub), substitute_formula(f.body(), sub));
    case FormulaKind::supports:
      return Formula::supports(substitute_term(f.term(), sub), substitute_formula(f.cond(), sub),
                               substitute_formula(f.body(), sub));
  }
  return f;
}

Term substitute_term(const Term& t, const std::map<std::string, Formula>& sub) {
  switch (t.kind()) {
    case TermKind::cert:
      return Term::cert(substitute_formula(t.certified(), sub));
    case TermKind::app:
      return Term::app(substitute_term(t.left(), sub), substitute_term(t.right(), sub));
    case TermKind::sum:
      return Term::sum(substitute_term(t.left(), sub), substitute_term(t.right(), sub));
  }
  return t;
}

}  // namespace

Formula substitute_letters(const Formula& f, const std::map<std::string, Formula>& sub) {
  return substitute_formula(f, sub);
}

Derivation substitute_letters(const Derivation& d, const std::map<std::string, Formula>& sub) {
  Derivation out;
  out.theory = d.theory;
  for (const Formula& h : d.hypotheses) out.hypotheses.push_back(substitute_formula(h, sub));
  for (const Line& line : d.lines) out.lines.push_back({substitute_formula(line.formula, sub), line.why});
  return out;
}

}  // namespace cdl::proofs
