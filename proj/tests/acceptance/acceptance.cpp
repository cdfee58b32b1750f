// End-to-end acceptance runner: one PASS/FAIL line per criterion, exit 1 if
// any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cdl/agm.hpp"
#include "cdl/error.hpp"
#include "cdl/models.hpp"
#include "cdl/proofs.hpp"
#include "cdl/search.hpp"
#include "cdl/semantics.hpp"
#include "cdl/transforms.hpp"
#include "support.hpp"

using namespace cdl;
using namespace cdl::proofs;
using cdl::testing::Rng;

namespace {

const std::vector<std::string> kPQ{"p", "q"};

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string failure;

  void fail(const std::string& why) {
    if (pass) failure = why;
    pass = false;
  }
};

// Criterion-3 bounds: 3 worlds, 2 letters, both admissibility defaults.
search::SearchBounds sweep_bounds(const Formula& f) {
  search::SearchBounds b;
  b.max_worlds = 3;
  b.letters = kPQ;
  for (const std::string& l : letters_of(f))
    if (std::find(b.letters.begin(), b.letters.end(), l) == b.letters.end()) b.letters.push_back(l);
  return b;
}

std::optional<search::Countermodel> countermodel(const Formula& f) {
  return search::find_countermodel(f, sweep_bounds(f)).countermodel;
}

std::string show(const Formula& f) { return render(f, RenderStyle::sugared); }

// ---------------------------------------------------------------------------
// 1. Order theory, from the definitions.

struct OrderOracle {
  bool well_founded = true;
  bool smooth = true;
  bool total = true;
  bool locally_total = true;
};

OrderOracle order_oracle(const PlausibilityModel& m) {
  const std::size_t n = m.size();
  auto le = [&](World x, World y) { return m.down(y).contains(x); };
  auto lt = [&](World x, World y) { return le(x, y) && !le(y, x); };

  // Components by repeated relaxation over <= and >=.
  std::vector<std::size_t> comp(n);
  for (World i = 0; i < n; ++i) comp[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (World x = 0; x < n; ++x)
      for (World y = 0; y < n; ++y)
        if ((le(x, y) || le(y, x)) && comp[x] != comp[y]) {
          std::size_t lo = std::min(comp[x], comp[y]);
          comp[x] = comp[y] = lo;
          changed = true;
        }
  }

  OrderOracle o;
  for (World x = 0; x < n; ++x) {
    for (World y = 0; y < n; ++y) {
      const bool comparable = le(x, y) || le(y, x);
      if (!comparable) o.total = false;
      if (!comparable && comp[x] == comp[y]) o.locally_total = false;
    }
  }
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    std::vector<World> s;
    for (World x = 0; x < n; ++x)
      if ((bits >> x) & 1u) s.push_back(x);
    std::vector<World> mins;
    for (World x : s) {
      bool minimal = true;
      for (World y : s) minimal = minimal && !lt(y, x);
      if (minimal) mins.push_back(x);
    }
    if (mins.empty()) o.well_founded = false;
    for (World x : s) {
      bool covered = false;
      for (World y : mins) covered = covered || le(y, x);
      if (!covered) o.smooth = false;
    }
  }
  return o;
}

Outcome criterion_order_theory() {
  Outcome out;
  std::size_t models = 0;
  const std::vector<std::vector<std::string>> letter_sets{{}, {"p"}, {"p", "q"}};
  auto check = [&](const PlausibilityModel& m) {
    ++models;
    ModelClass c = classify_model(m);
    OrderOracle o = order_oracle(m);
    if (!o.well_founded) out.fail("finite model without minima");
    if (c.well_founded != o.well_founded || c.smooth != o.smooth || c.total != o.total ||
        c.locally_total != o.locally_total)
      out.fail("classification differs from the definitions on\n" + render_model(m));
    if (o.well_founded != o.smooth) out.fail("well-founded and smooth differ");
    if (c.well_ordered != (o.smooth && o.total)) out.fail("well_ordered differs from smooth and total");
    if (c.locally_well_ordered != (o.smooth && o.locally_total))
      out.fail("locally_well_ordered differs from smooth and locally total");
  };
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i + 1));
    for (const auto& down : search::all_preorders(n)) {
      std::vector<std::pair<World, World>> pairs;
      for (World y = 0; y < n; ++y)
        for (World x : down[y]) pairs.emplace_back(x, y);
      for (const auto& letters : letter_sets) {
        const std::size_t bits = n * letters.size();
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
          std::map<std::string, WorldSet> val;
          for (std::size_t i = 0; i < letters.size(); ++i)
            val.emplace(letters[i], WorldSet((code >> (i * n)) & ((std::uint64_t{1} << n) - 1)));
          check(PlausibilityModel::from_relation(names, pairs, std::move(val)));
        }
      }
    }
  }
  // The enumerator's rank shapes must land in the requested classes.
  for (auto shape : {search::Shape::well_ordered, search::Shape::locally_well_ordered}) {
    search::SearchBounds b;
    b.max_worlds = 4;
    b.letters = kPQ;
    b.shape = shape;
    search::enumerate_models(b, [&](const PlausibilityModel& m) {
      check(m);
      ModelClass c = classify_model(m);
      if (shape == search::Shape::well_ordered ? !c.well_ordered : !c.locally_well_ordered)
        out.fail("enumerated model outside its class");
      return true;
    });
  }
  out.detail = std::to_string(models) + " models";
  return out;
}

// ---------------------------------------------------------------------------
// 2. General truth clause against the minimal-world clause.

std::vector<Formula> corpus(Rng& rng, Language lang, std::size_t size, int depth, int term_depth) {
  std::set<Formula> seen;
  std::vector<Formula> out;
  while (out.size() < size) {
    Formula f = testing::random_formula(rng, kPQ, depth, lang, term_depth);
    if (f.modal_depth() > 2 || f.modal_depth() == 0 || !seen.insert(f).second) continue;
    out.push_back(f);
  }
  return out;
}

Outcome criterion_truth_oracle() {
  Outcome out;
  Rng rng(2002);
  std::vector<Formula> cdl_corpus = corpus(rng, Language::cdl, 200, 4, 0);
  // Fitting-model counts grow with the number of support pairs, so the JCDL
  // corpus is one level shallower.
  std::vector<Formula> jcdl_corpus = corpus(rng, Language::jcdl, 100, 3, 1);

  std::size_t models = 0;
  std::size_t checks = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i + 1));
    for (const auto& down : search::all_preorders(n)) {
      std::vector<std::pair<World, World>> pairs;
      for (World y = 0; y < n; ++y)
        for (World x : down[y]) pairs.emplace_back(x, y);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code) {
        const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
        auto m = PlausibilityModel::from_relation(names, pairs,
                                                  {{"p", WorldSet(code & mask)}, {"q", WorldSet((code >> n) & mask)}});
        ++models;
        for (const Formula& f : cdl_corpus) {
          for (World w = 0; w < n; ++w) {
            ++checks;
            if (satisfies(m, w, f) != satisfies_min(m, w, f)) out.fail(show(f) + " on\n" + render_model(m));
          }
        }
      }
    }
  }
  std::size_t fitting = 0;
  for (const Formula& f : jcdl_corpus) {
    // Well-ordered bases up to 3 worlds, and disconnected bases up to 2.
    for (auto [worlds, shape] : {std::pair{3, search::Shape::well_ordered}, std::pair{2, search::Shape::locally_well_ordered}}) {
      search::SearchBounds b;
      b.max_worlds = static_cast<std::size_t>(worlds);
      b.letters = kPQ;
      b.shape = shape;
      fitting += search::enumerate_fitting_models(b, f, [&](const FittingModel& m) {
        for (World w = 0; w < m.base().size(); ++w) {
          ++checks;
          if (satisfies(m, w, f) != satisfies_min(m, w, f)) {
            out.fail(show(f) + " on\n" + render_model(m));
            return false;
          }
        }
        return true;
      });
    }
  }
  out.detail = std::to_string(models) + " plausibility models, " + std::to_string(fitting) + " fitting models, " +
               std::to_string(checks) + " checks";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Soundness sweep.

// Classical tautology shapes for CL instances.
Formula classical_instance(Rng& rng, Language lang) {
  Formula a = testing::random_formula(rng, kPQ, 2, lang, 2);
  Formula b = testing::random_formula(rng, kPQ, 2, lang, 2);
  Formula c = testing::random_formula(rng, kPQ, 2, lang, 2);
  switch (rng() % 5) {
    case 0:
      return Formula::implies(a, Formula::implies(b, a));
    case 1:
      return Formula::implies(Formula::implies(a, Formula::implies(b, c)),
                              Formula::implies(Formula::implies(a, b), Formula::implies(a, c)));
    case 2:
      return Formula::implies(Formula::implies(neg(a), neg(b)), Formula::implies(b, a));
    case 3:
      return disj(a, neg(a));
    default:
      return iff(conj(a, b), conj(b, a));
  }
}

Outcome criterion_soundness() {
  Outcome out;
  Rng rng(3003);
  std::set<Schema> all;
  for (Theory t : {Theory::cdl0, Theory::cdl, Theory::jcdl})
    for (Schema s : schemas_of(t)) all.insert(s);
  std::size_t instances = 0;
  for (Schema s : all) {
    std::vector<Language> langs{Language::cdl};
    if (s == Schema::CL) langs.push_back(Language::jcdl);
    for (Language lang : langs) {
      for (int i = 0; i < 50; ++i) {
        Formula inst = s == Schema::CL ? classical_instance(rng, lang)
                                       : instantiate(s, testing::random_substitution(rng, s, kPQ, 2, 2));
        ++instances;
        if (s == Schema::CL && !is_tautology(inst)) out.fail("CL generator produced a non-tautology");
        if (auto c = countermodel(inst)) out.fail(std::string(schema_name(s)) + " instance " + show(inst));
      }
    }
  }
  // Negative control: eK with the application reversed is not valid.
  int falsified = 0;
  for (int i = 0; i < 50; ++i) {
    Formula inst = instantiate(Schema::eK, testing::random_substitution(rng, Schema::eK, kPQ, 2, 2));
    const Formula goal = inst.rhs().rhs();
    const Term swapped = Term::app(goal.term().right(), goal.term().left());
    Formula control =
        Formula::implies(inst.lhs(), Formula::implies(inst.rhs().lhs(), Formula::supports(swapped, goal.cond(), goal.body())));
    if (countermodel(control)) ++falsified;
  }
  if (falsified < 40) out.fail("only " + std::to_string(falsified) + " of 50 reversed eK instances falsified");
  out.detail = std::to_string(all.size()) + " schemas, " + std::to_string(instances) + " instances; " +
               std::to_string(falsified) + "/50 reversed eK controls falsified";
  return out;
}

// ---------------------------------------------------------------------------
// 4. Macro derivations.

MacroArgs macro_args(Rng& rng, const std::string& name) {
  const std::string base = name[0] == 'e' ? name.substr(1) : name;
  const Language lang = name[0] == 'e' ? Language::jcdl : Language::cdl;
  MacroArgs a;
  for (const std::string& v : macro_params(name)) a.formulas.emplace(v, testing::random_formula(rng, kPQ, 1, lang, 1));
  // Rules get a tautological premise so that the conclusion is valid.
  auto& f = a.formulas;
  Formula extra = testing::random_formula(rng, kPQ, 1, lang, 1);
  if (base == "LE") f.at("psi2") = neg(neg(f.at("psi")));
  if (base == "RW") f.at("chi2") = disj(f.at("chi"), extra);
  if (base == "SC") f.at("chi") = disj(f.at("psi"), extra);
  return a;
}

Outcome criterion_macros() {
  Outcome out;
  Rng rng(4004);
  const std::vector<std::string> required{"Cut", "CM", "Taut", "And", "Or", "PR", "NR", "LE", "RW", "SC", "IEa", "IEb"};
  std::vector<std::string> names = macro_names();
  for (const std::string& r : required) {
    if (std::find(names.begin(), names.end(), r) == names.end()) out.fail("missing macro " + r);
    if (r != "IEa" && r != "IEb" && std::find(names.begin(), names.end(), "e" + r) == names.end())
      out.fail("missing macro e" + r);
  }
  std::size_t lines = 0;
  std::size_t runs = 0;
  for (const std::string& name : names) {
    for (int i = 0; i < 3; ++i) {
      MacroArgs a = macro_args(rng, name);
      Derivation d = derive_macro(name, a);
      ++runs;
      lines += d.lines.size();
      CheckReport r = check_derivation(d);
      if (!r.ok) out.fail(name + " line " + std::to_string(r.first_bad_line) + ": " + r.reason);
      if (d.conclusion() != macro_goal(name, a)) out.fail(name + " ends on the wrong formula");
      Derivation closed = discharge_tautological_hypotheses(d);
      if (!closed.hypotheses.empty() || !check_derivation(closed).ok) out.fail(name + " premise not discharged");
      if (countermodel(d.conclusion())) out.fail(name + " conclusion falsified: " + show(d.conclusion()));
    }
  }
  out.detail = std::to_string(names.size()) + " macros, " + std::to_string(runs) + " derivations, " +
               std::to_string(lines) + " lines";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Translations.

Outcome criterion_translation() {
  Outcome out;
  Rng rng(5005);
  std::size_t lines = 0;
  for (int i = 0; i < 100; ++i) {
    Derivation d = testing::random_cdl_derivation(rng, kPQ, 12);
    lines += d.lines.size();
    if (!check_derivation(d).ok) {
      out.fail("generator produced a rejected derivation");
      continue;
    }
    Derivation j = transforms::realize_derivation(d);
    if (j.theory != Theory::jcdl || !check_derivation(j).ok) out.fail("realized derivation rejected");
    Derivation back = transforms::forget_derivation(j);
    if (back.theory != Theory::cdl || !check_derivation(back).ok) out.fail("projected derivation rejected");
    if (back.conclusion() != d.conclusion()) out.fail("round trip changed the conclusion " + show(d.conclusion()));
  }
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_formula(rng, kPQ, 4, Language::cdl);
    if (transforms::forget_formula(transforms::realize_formula(f)) != f) out.fail("formula round trip: " + show(f));
  }
  out.detail = "100 derivations (" + std::to_string(lines) + " lines), 1000 formulas";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Elimination and internalization.

Outcome criterion_elimination() {
  Outcome out;
  Rng rng(6006);
  std::size_t troubles = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 1 + i % 3;
    Derivation d = testing::random_troublesome_derivation(rng, kPQ, k);
    troubles += count_troublesome(d);
    Derivation e = transforms::eliminate_troublesome(d);
    if (!check_derivation(e).ok) out.fail("eliminated derivation rejected");
    if (count_troublesome(e) != 0) out.fail("troublesome line survived elimination");
    if (e.conclusion() != d.conclusion()) out.fail("elimination changed the conclusion");
    std::set<Formula> have;
    for (const Line& l : e.lines) have.insert(l.formula);
    for (const Line& l : d.lines)
      if (!have.count(l.formula)) out.fail("input line missing after elimination: " + show(l.formula));

    Formula cond = testing::random_formula(rng, kPQ, 1, Language::jcdl);
    transforms::Internalized in = transforms::internalize(d, cond);
    if (!is_logical_term(in.term)) out.fail("internalized term is not logical");
    if (!check_derivation(in.derivation).ok) out.fail("internalized derivation rejected");
    if (in.derivation.conclusion() != Formula::supports(in.term, cond, d.conclusion()))
      out.fail("internalized derivation ends on the wrong formula");
  }
  out.detail = "100 derivations, " + std::to_string(troubles) + " troublesome lines";
  return out;
}

// ---------------------------------------------------------------------------
// 7. AGM postulates.

Outcome criterion_agm() {
  Outcome out;
  for (agm::Strategy s : {agm::Strategy::two_layer, agm::Strategy::hamming}) {
    for (const agm::PostulateResult& r : agm::check_postulates(agm::grove_revision(s), kPQ))
      if (!r.pass) out.fail(std::string(agm::strategy_name(s)) + " fails " + r.name + ": " + r.witness);
  }
  std::string witness;
  for (const agm::PostulateResult& r : agm::check_postulates(agm::expansion_revision(), kPQ))
    if (r.name == "Consistency" && !r.pass) witness = r.witness;
  if (witness.empty()) out.fail("broken operator passed Consistency");
  out.detail = "16 x 16 x 16 instances per strategy; broken operator fails Consistency at " + witness;
  return out;
}

// ---------------------------------------------------------------------------
// 8. Knowledge is S5.

Outcome criterion_s5() {
  Outcome out;
  Rng rng(8008);
  auto K = [](const Formula& f) { return know(f); };
  const std::vector<std::pair<std::string, std::function<Formula(const Formula&, const Formula&)>>> schemes{
      {"K", [&](const Formula& a, const Formula& b) {
         return Formula::implies(K(Formula::implies(a, b)), Formula::implies(K(a), K(b)));
       }},
      {"T", [&](const Formula& a, const Formula&) { return Formula::implies(K(a), a); }},
      {"4", [&](const Formula& a, const Formula&) { return Formula::implies(K(a), K(K(a))); }},
      {"5", [&](const Formula& a, const Formula&) { return Formula::implies(neg(K(a)), K(neg(K(a)))); }},
  };
  for (const auto& [name, make] : schemes) {
    for (int i = 0; i < 50; ++i) {
      Formula f = make(testing::random_formula(rng, kPQ, 2, Language::cdl), testing::random_formula(rng, kPQ, 2, Language::cdl));
      if (countermodel(f)) out.fail("scheme " + name + " falsified: " + show(f));
    }
  }
  out.detail = "4 schemes x 50 instances";
  return out;
}

// ---------------------------------------------------------------------------
// 9. Restriction of locally well-ordered countermodels.

Outcome criterion_restriction() {
  Outcome out;
  Rng rng(9009);
  int found = 0;
  int disconnected = 0;
  int attempts = 0;
  while (found < 50 && attempts < 5000) {
    ++attempts;
    Formula f = testing::random_formula(rng, kPQ, 3, Language::cdl);
    search::SearchBounds b;
    b.max_worlds = 3;
    b.letters = kPQ;
    b.shape = search::Shape::locally_well_ordered;
    b.exploit_restriction = false;
    auto r = search::find_countermodel(f, b);
    if (!r.countermodel) continue;
    ++found;
    const auto& m = std::get<PlausibilityModel>(r.countermodel->model);
    if (!classify_model(m).connected) ++disconnected;
    if (!classify_model(m).locally_well_ordered) out.fail("search returned a model outside the class");
    search::Countermodel c = search::restrict_countermodel(*r.countermodel);
    const auto& rm = std::get<PlausibilityModel>(c.model);
    if (!classify_model(rm).well_ordered) out.fail("restriction is not well-ordered");
    if (satisfies(rm, c.world, f)) out.fail("restriction satisfies " + show(f));

    // Smallest countermodels are connected, so look for a disconnected one directly.
    std::optional<search::Countermodel> split;
    search::enumerate_models(b, [&](const PlausibilityModel& cand) {
      if (classify_model(cand).connected) return true;
      for (World w = 0; w < cand.size(); ++w) {
        if (satisfies(cand, w, f)) continue;
        split = search::Countermodel{cand, w};
        return false;
      }
      return true;
    });
    if (!split) continue;
    ++disconnected;
    search::Countermodel sc = search::restrict_countermodel(*split);
    const auto& sm = std::get<PlausibilityModel>(sc.model);
    if (!classify_model(sm).well_ordered) out.fail("restriction of a disconnected model is not well-ordered");
    if (sm.size() >= std::get<PlausibilityModel>(split->model).size()) out.fail("restriction did not shrink the model");
    if (satisfies(sm, sc.world, f)) out.fail("restriction of a disconnected model satisfies " + show(f));
  }
  if (disconnected < 40) out.fail("only " + std::to_string(disconnected) + " disconnected countermodels");
  if (found < 50) out.fail("only " + std::to_string(found) + " countermodels found");
  out.detail = std::to_string(found) + " countermodels (" + std::to_string(disconnected) + " disconnected)";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "order theory", 60, criterion_order_theory},
      {2, "truth clauses agree", 300, criterion_truth_oracle},
      {3, "axiom soundness sweep", 300, criterion_soundness},
      {4, "derived theorems", 120, criterion_macros},
      {5, "translations", 120, criterion_translation},
      {6, "elimination and internalization", 120, criterion_elimination},
      {7, "AGM postulates", 180, criterion_agm},
      {8, "knowledge is S5", 120, criterion_s5},
      {9, "restriction to components", 60, criterion_restriction},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) o.fail("over the time budget");
    all = all && o.pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.1fs of %.0fs", secs, c.budget_seconds);
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << o.detail << " [" << timing
              << "]";
    if (!o.pass) std::cout << "\n     " << o.failure;
    std::cout << std::endl;
  }
  return all ? 0 : 1;
}
