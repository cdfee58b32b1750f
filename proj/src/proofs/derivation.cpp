#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cdl/error.hpp"
#include "cdl/proofs.hpp"

namespace cdl::proofs {

namespace {

// a <-> b is ((a -> b) -> ((b -> a) -> false)) -> false.
std::optional<std::pair<Formula, Formula>> split_iff(const Formula& f) {
  Formula inner = Formula::bottom();
  if (!is_negation(f, &inner) || !inner.is_implies()) return std::nullopt;
  Formula forward = inner.lhs();
  if (!forward.is_implies()) return std::nullopt;
  std::pair<Formula, Formula> parts{forward.lhs(), forward.rhs()};
  if (iff(parts.first, parts.second) != f) return std::nullopt;
  return parts;
}

std::string line_ref(std::size_t i) { return "line " + std::to_string(i); }

// Reason the line fails, or empty when it checks.
std::string check_line(const Derivation& d, std::size_t k) {
  const Line& line = d.lines[k - 1];
  const Formula& f = line.formula;
  const Justification& j = line.why;
  const Theory th = d.theory;
  auto earlier = [&](std::size_t i) { return i >= 1 && i < k; };

  if (!in_language(f, language_of(th)))
    return "formula is not in the language of " + std::string(theory_name(th));

  switch (j.rule) {
    case Rule::hyp:
      if (j.a < 1 || j.a > d.hypotheses.size()) return "no hypothesis " + std::to_string(j.a);
      if (d.hypotheses[j.a - 1] != f) return "formula differs from hypothesis " + std::to_string(j.a);
      return {};
    case Rule::axiom:
      if (!schema_in_theory(j.schema, th))
        return "schema " + std::string(schema_name(j.schema)) + " is not an axiom of " + std::string(theory_name(th));
      if (!match_schema(f, j.schema)) return "schema mismatch for " + std::string(schema_name(j.schema));
      return {};
    case Rule::mp:
      if (!earlier(j.a) || !earlier(j.b)) return "mp must cite earlier lines";
      if (d.at(j.a) != Formula::implies(d.at(j.b), f))
        return line_ref(j.a) + " is not " + line_ref(j.b) + " -> this line";
      return {};
    case Rule::mn:
      if (th == Theory::jcdl) return "mn is not a rule of JCDL";
      if (!earlier(j.a)) return "mn must cite an earlier line";
      if (!f.is_belief() || f.body() != d.at(j.a)) return "not B[psi] of " + line_ref(j.a);
      return {};
    case Rule::le: {
      if (th != Theory::cdl0) return "le is only a rule of CDL0";
      if (!earlier(j.a)) return "le must cite an earlier line";
      auto premise = split_iff(d.at(j.a));
      if (!premise) return line_ref(j.a) + " is not a biconditional";
      auto concl = split_iff(f);
      if (!concl || !concl->first.is_belief() || !concl->second.is_belief())
        return "le conclusion must be B[psi] chi <-> B[psi2] chi";
      if (concl->first.cond() != premise->first || concl->second.cond() != premise->second ||
          concl->first.body() != concl->second.body())
        return "le conclusion does not match " + line_ref(j.a);
      return {};
    }
    case Rule::emn:
      if (th != Theory::jcdl) return "emn is only a rule of JCDL";
      if (!earlier(j.a)) return "emn must cite an earlier line";
      if (!is_dotted(f) || f.body() != d.at(j.a)) return "not Bd[psi] of " + line_ref(j.a);
      return {};
  }
  return "unknown rule";
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw DerivationError("line " + std::to_string(line) + ": " + msg);
}

std::size_t parse_index(int line, const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    fail(line, "expected a line number but found '" + tok + "'");
  return std::stoul(tok);
}

}  // namespace

CheckReport check_derivation(const Derivation& d) {
  CheckReport r;
  for (std::size_t h = 0; h < d.hypotheses.size(); ++h) {
    if (!in_language(d.hypotheses[h], language_of(d.theory))) {
      r.ok = false;
      r.reason = "hypothesis " + std::to_string(h + 1) + " is not in the language of " +
                 std::string(theory_name(d.theory));
      return r;
    }
  }
  if (d.lines.empty()) {
    r.ok = false;
    r.reason = "derivation has no lines";
    return r;
  }
  for (std::size_t k = 1; k <= d.lines.size(); ++k) {
    std::string why = check_line(d, k);
    if (!why.empty()) {
      r.ok = false;
      r.first_bad_line = k;
      r.reason = why;
      return r;
    }
  }
  return r;
}

Derivation parse_derivation(std::string_view text) {
  Derivation d;
  bool have_theory = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.rfind("theory", 0) == 0) {
      if (have_theory) fail(line_no, "duplicate theory line");
      d.theory = parse_theory(trim(std::string_view(line).substr(6)));
      have_theory = true;
      continue;
    }
    if (!have_theory) fail(line_no, "derivation must start with 'theory CDL|CDL0|JCDL'");
    const Language lang = language_of(d.theory);
    if (line.rfind("hyp:", 0) == 0) {
      if (!d.lines.empty()) fail(line_no, "hypotheses must precede the numbered lines");
      d.hypotheses.push_back(parse_formula(trim(std::string_view(line).substr(4)), lang));
      continue;
    }
    auto colon = line.find(':');
    auto semi = line.rfind(';');
    if (colon == std::string::npos || semi == std::string::npos || semi < colon)
      fail(line_no, "expected '<n>: <formula> ; <justification>'");
    std::size_t n = parse_index(line_no, trim(std::string_view(line).substr(0, colon)));
    if (n != d.lines.size() + 1) fail(line_no, "expected line number " + std::to_string(d.lines.size() + 1));
    Formula f = parse_formula(trim(std::string_view(line).substr(colon + 1, semi - colon - 1)), lang);

    std::istringstream just(line.substr(semi + 1));
    std::vector<std::string> toks;
    for (std::string tok; just >> tok;) toks.push_back(tok);
    if (toks.empty()) fail(line_no, "missing justification");
    const std::string& rule = toks[0];
    auto want = [&](std::size_t count) {
      if (toks.size() != count + 1) fail(line_no, "'" + rule + "' takes " + std::to_string(count) + " argument(s)");
    };
    Justification j;
    if (rule == "axiom") {
      want(1);
      auto s = schema_from_name(toks[1]);
      if (!s) fail(line_no, "unknown axiom schema '" + toks[1] + "'");
      j = Justification::axiom(*s);
    } else if (rule == "hyp") {
      want(1);
      j = Justification::hyp(parse_index(line_no, toks[1]));
    } else if (rule == "mp") {
      want(2);
      j = Justification::mp(parse_index(line_no, toks[1]), parse_index(line_no, toks[2]));
    } else if (rule == "mn") {
      want(1);
      j = Justification::mn(parse_index(line_no, toks[1]));
    } else if (rule == "le") {
      want(1);
      j = Justification::le(parse_index(line_no, toks[1]));
    } else if (rule == "emn") {
      want(1);
      j = Justification::emn(parse_index(line_no, toks[1]));
    } else {
      fail(line_no, "unknown rule '" + rule + "'");
    }
    d.lines.push_back({f, j});
  }
  if (!have_theory) throw DerivationError("missing theory line");
  return d;
}

Derivation load_derivation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DerivationError("cannot open derivation file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_derivation(buf.str());
}

std::string render_derivation(const Derivation& d, RenderStyle style) {
  std::ostringstream out;
  out << "theory " << theory_name(d.theory) << "\n";
  for (const Formula& h : d.hypotheses) out << "hyp: " << render(h, style) << "\n";
  for (std::size_t k = 1; k <= d.lines.size(); ++k) {
    const Line& line = d.lines[k - 1];
    out << k << ": " << render(line.formula, style) << " ; ";
    const Justification& j = line.why;
    switch (j.rule) {
      case Rule::axiom: out << "axiom " << schema_name(j.schema); break;
      case Rule::hyp: out << "hyp " << j.a; break;
      case Rule::mp: out << "mp " << j.a << ' ' << j.b; break;
      case Rule::mn: out << "mn " << j.a; break;
      case Rule::le: out << "le " << j.a; break;
      case Rule::emn: out << "emn " << j.a; break;
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<Formula> necessitation_chain(const Formula& f) {
  std::vector<Formula> out{f};
  while (is_dotted(out.back())) out.push_back(out.back().body());
  return out;
}

bool is_possibly_necessitated_axiom(const Formula& f) {
  if (!is_jcdl(f)) return false;
  for (const Formula& g : necessitation_chain(f)) {
    if (find_axiom(g, Theory::jcdl)) return true;
  }
  return false;
}

bool is_logical_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::cert:
      return is_possibly_necessitated_axiom(t.certified());
    case TermKind::app:
      return is_logical_term(t.left()) && is_logical_term(t.right());
    case TermKind::sum:
      return false;
  }
  return false;
}

std::vector<bool> troublesome_lines(const Derivation& d) {
  std::vector<bool> out(d.lines.size(), false);
  std::unordered_map<Formula, std::size_t> first;
  for (std::size_t k = 0; k < d.lines.size(); ++k) {
    const Formula& f = d.lines[k].formula;
    if (d.lines[k].why.rule == Rule::emn && !is_possibly_necessitated_axiom(f)) {
      bool by_mp = false;
      for (std::size_t i = 0; i < k && !by_mp; ++i) {
        const Formula& g = d.lines[i].formula;
        by_mp = g.is_implies() && g.rhs() == f && first.count(g.lhs()) != 0;
      }
      out[k] = !by_mp;
    }
    first.emplace(f, k);
  }
  return out;
}

std::size_t count_troublesome(const Derivation& d) {
  if (d.theory != Theory::jcdl) throw DerivationError("troublesome necessitations are only defined for JCDL");
  CheckReport r = check_derivation(d);
  if (!r.ok) throw DerivationError("derivation does not check at line " + std::to_string(r.first_bad_line) + ": " + r.reason);
  std::size_t n = 0;
  for (bool b : troublesome_lines(d)) n += b ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------

ProofBuilder::ProofBuilder(Theory theory) { d_.theory = theory; }

std::optional<std::size_t> ProofBuilder::find(const Formula& f) const {
  auto it = index_.find(f);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ProofBuilder::add(const Formula& f, Justification why) {
  if (auto existing = find(f)) return *existing;
  d_.lines.push_back({f, why});
  index_.emplace(f, d_.lines.size());
  return d_.lines.size();
}

std::size_t ProofBuilder::hypothesis(const Formula& f) {
  auto it = std::find(d_.hypotheses.begin(), d_.hypotheses.end(), f);
  std::size_t k = static_cast<std::size_t>(it - d_.hypotheses.begin()) + 1;
  if (it == d_.hypotheses.end()) d_.hypotheses.push_back(f);
  return add(f, Justification::hyp(k));
}

std::size_t ProofBuilder::axiom(Schema s, const Substitution& sub) {
  return add(instantiate(s, sub), Justification::axiom(s));
}

std::size_t ProofBuilder::tautology(const Formula& f) {
  if (!is_tautology(f)) throw DerivationError("not a tautology: " + render(f, RenderStyle::sugared));
  return add(f, Justification::axiom(Schema::CL));
}

std::size_t ProofBuilder::mp(std::size_t imp, std::size_t ant) {
  const Formula& i = at(imp);
  if (!i.is_implies() || i.lhs() != at(ant)) throw DerivationError("mp premises do not fit");
  return add(i.rhs(), Justification::mp(imp, ant));
}

std::size_t ProofBuilder::necessitate(std::size_t line, const Formula& cond) {
  if (theory() == Theory::jcdl) return add(dotted(cond, at(line)), Justification::emn(line));
  return add(Formula::belief(cond, at(line)), Justification::mn(line));
}

std::size_t ProofBuilder::le(std::size_t line, const Formula& chi) {
  auto parts = split_iff(at(line));
  if (!parts) throw DerivationError("le premise is not a biconditional");
  Formula f = iff(Formula::belief(parts->first, chi), Formula::belief(parts->second, chi));
  return add(f, Justification::le(line));
}

std::size_t ProofBuilder::classical(const Formula& goal, const std::vector<std::size_t>& premises) {
  Formula chain = goal;
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) chain = Formula::implies(at(*it), chain);
  std::size_t cur = tautology(chain);
  for (std::size_t p : premises) cur = mp(cur, p);
  return cur;
}

std::size_t ProofBuilder::modal_theorem(const Formula& cond, const std::vector<Formula>& antecedents,
                                        const Formula& goal) {
  if (theory() == Theory::jcdl) throw DerivationError("modal reasoning macros need B operators");
  // rest[i] = a_i -> a_{i+1} -> ... -> goal
  std::vector<Formula> rest(antecedents.size() + 1, goal);
  for (std::size_t i = antecedents.size(); i-- > 0;) rest[i] = Formula::implies(antecedents[i], rest[i + 1]);
  std::size_t nec = necessitate(tautology(rest[0]), cond);
  if (antecedents.empty()) return nec;

  auto k_instance = [&](std::size_t i) {
    Substitution sub;
    sub.formulas.emplace("psi", cond);
    sub.formulas.emplace("phi1", antecedents[i]);
    sub.formulas.emplace("phi2", rest[i + 1]);
    return axiom(Schema::K, sub);
  };
  std::vector<std::size_t> steps{mp(k_instance(0), nec)};
  for (std::size_t i = 1; i < antecedents.size(); ++i) steps.push_back(k_instance(i));
  if (steps.size() == 1) return steps[0];

  Formula target = Formula::belief(cond, goal);
  for (std::size_t i = antecedents.size(); i-- > 0;)
    target = Formula::implies(Formula::belief(cond, antecedents[i]), target);
  return classical(target, steps);
}

std::size_t ProofBuilder::modal(const Formula& cond, const std::vector<std::size_t>& premises, const Formula& goal) {
  std::vector<Formula> ants;
  for (std::size_t p : premises) {
    const Formula& f = at(p);
    if (!f.is_belief() || f.cond() != cond) throw DerivationError("modal premise is not B[cond] of something");
    ants.push_back(f.body());
  }
  std::size_t cur = modal_theorem(cond, ants, goal);
  for (std::size_t p : premises) cur = mp(cur, p);
  return cur;
}

}  // namespace cdl::proofs
