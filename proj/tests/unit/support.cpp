#include "support.hpp"

#include <algorithm>
#include <set>

#include "cdl/error.hpp"

#ifndef CDL_TEST_DATA
#define CDL_TEST_DATA "tests/data"
#endif

namespace cdl::testing {

using namespace cdl::proofs;

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Formula atom(Rng& rng, const std::vector<std::string>& letters) {
  if (coin(rng, 0.15)) return Formula::bottom();
  return letter(letters[pick(rng, letters.size())]);
}

}  // namespace

Formula random_formula(Rng& rng, const std::vector<std::string>& letters, int depth, Language lang, int term_depth) {
  if (depth <= 0 || coin(rng, 0.25)) return atom(rng, letters);
  switch (pick(rng, 3)) {
    case 0:
    case 1:
      return Formula::implies(random_formula(rng, letters, depth - 1, lang, term_depth),
                              random_formula(rng, letters, depth - 1, lang, term_depth));
    default: {
      Formula cond = random_formula(rng, letters, depth - 1, lang, term_depth);
      Formula body = random_formula(rng, letters, depth - 1, lang, term_depth);
      if (lang == Language::cdl) return Formula::belief(cond, body);
      return Formula::supports(random_term(rng, letters, term_depth), cond, body);
    }
  }
}

Formula random_propositional(Rng& rng, const std::vector<std::string>& letters, int depth) {
  if (depth <= 0 || coin(rng, 0.3)) return atom(rng, letters);
  return Formula::implies(random_propositional(rng, letters, depth - 1), random_propositional(rng, letters, depth - 1));
}

Term random_term(Rng& rng, const std::vector<std::string>& letters, int depth) {
  if (depth <= 0 || coin(rng, 0.4)) return Term::cert(random_formula(rng, letters, 1, Language::jcdl, 0));
  Term a = random_term(rng, letters, depth - 1);
  Term b = random_term(rng, letters, depth - 1);
  return coin(rng, 0.5) ? Term::app(a, b) : Term::sum(a, b);
}

Substitution random_substitution(Rng& rng, Schema s, const std::vector<std::string>& letters, int formula_depth,
                                 int term_depth) {
  const Language lang = schema_in_theory(s, Theory::jcdl) ? Language::jcdl : Language::cdl;
  Substitution sub;
  for (const std::string& v : formula_metavars(s))
    sub.formulas.emplace(v, random_formula(rng, letters, formula_depth, lang, term_depth));
  for (const std::string& v : term_metavars(s)) sub.terms.emplace(v, random_term(rng, letters, term_depth));
  return sub;
}

Derivation random_cdl_derivation(Rng& rng, const std::vector<std::string>& letters, int steps) {
  ProofBuilder b(Theory::cdl);
  std::vector<Schema> axioms;
  for (Schema s : schemas_of(Theory::cdl))
    if (s != Schema::CL) axioms.push_back(s);

  auto some_line = [&] { return 1 + pick(rng, b.derivation().lines.size()); };
  for (int i = 0; i < steps; ++i) {
    const bool empty = b.derivation().lines.empty();
    std::size_t kind = empty ? 0 : pick(rng, 5);
    switch (kind) {
      case 0: {
        Schema s = axioms[pick(rng, axioms.size())];
        b.axiom(s, random_substitution(rng, s, letters, 1, 0));
        break;
      }
      case 1: {
        Formula a = random_formula(rng, letters, 1, Language::cdl);
        Formula c = random_formula(rng, letters, 1, Language::cdl);
        b.tautology(Formula::implies(a, Formula::implies(c, a)));
        break;
      }
      case 2: {
        std::size_t line = some_line();
        if (b.at(line).size() > 40) break;
        b.necessitate(line, random_formula(rng, letters, 1, Language::cdl));
        break;
      }
      case 3: {
        std::size_t x = some_line();
        std::size_t y = some_line();
        if (b.at(x).size() + b.at(y).size() > 50) break;
        b.classical(conj(b.at(x), b.at(y)), {x, y});
        break;
      }
      default: {
        std::size_t x = some_line();
        if (b.at(x).size() > 40) break;
        b.classical(disj(random_formula(rng, letters, 1, Language::cdl), b.at(x)), {x});
        break;
      }
    }
  }
  return b.take();
}

Derivation random_troublesome_derivation(Rng& rng, const std::vector<std::string>& letters, int troublesome) {
  std::vector<Schema> axioms;
  for (Schema s : schemas_of(Theory::jcdl))
    if (s != Schema::CL) axioms.push_back(s);

  for (;;) {
    ProofBuilder b(Theory::jcdl);
    Schema s = axioms[pick(rng, axioms.size())];
    std::size_t cur = b.axiom(s, random_substitution(rng, s, letters, 1, 1));
    // A harmless necessitation of the axiom itself.
    if (coin(rng, 0.5)) b.necessitate(cur, random_propositional(rng, letters, 1));
    for (int i = 0; i < troublesome; ++i) {
      // Turn the current line into a classical consequence, then necessitate it.
      Formula x = b.at(cur);
      Formula r = letter(letters[pick(rng, letters.size())]);
      std::size_t derived = b.classical(Formula::implies(neg(x), r), {cur});
      cur = b.necessitate(derived, random_propositional(rng, letters, 1));
      if (coin(rng, 0.3)) {
        Schema extra = axioms[pick(rng, axioms.size())];
        b.axiom(extra, random_substitution(rng, extra, letters, 1, 1));
      }
    }
    Derivation d = b.take();
    if (check_derivation(d).ok && count_troublesome(d) == static_cast<std::size_t>(troublesome)) return d;
  }
}

PlausibilityModel random_model(Rng& rng, std::size_t worlds, const std::vector<std::string>& letters,
                               bool connected) {
  std::vector<std::string> names;
  std::vector<int> component(worlds, 0);
  std::vector<int> rank(worlds, 0);
  for (std::size_t i = 0; i < worlds; ++i) {
    names.push_back("w" + std::to_string(i + 1));
    if (!connected) component[i] = static_cast<int>(pick(rng, 2));
    rank[i] = static_cast<int>(pick(rng, worlds));
  }
  std::map<std::string, WorldSet> val;
  for (const std::string& l : letters) {
    WorldSet s;
    for (World w = 0; w < worlds; ++w)
      if (coin(rng, 0.5)) s.insert(w);
    val.emplace(l, s);
  }
  return PlausibilityModel::from_ranks(names, component, rank, std::move(val));
}

FittingModel random_fitting_model(Rng& rng, std::size_t worlds, const std::vector<std::string>& letters,
                                  const Formula& target) {
  PlausibilityModel base = random_model(rng, worlds, letters, coin(rng, 0.5));
  if (coin(rng, 0.2)) return FittingModel(base, {}, AdmDefault::full);
  std::vector<AdmFact> facts;
  for (const Formula& g : subformulas(target)) {
    if (!g.is_supports() || !coin(rng, 0.5)) continue;
    WorldSet at;
    at.insert(pick(rng, worlds));
    facts.push_back({g.term(), g.body(), at});
  }
  return FittingModel(base, std::move(facts), AdmDefault::empty);
}

std::string data_path(const std::string& name) { return std::string(CDL_TEST_DATA) + "/" + name; }

}  // namespace cdl::testing
