#include "cdl/agm.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "cdl/error.hpp"
#include "cdl/semantics.hpp"

namespace cdl::agm {

namespace {

void check_letters(const std::vector<std::string>& letters) {
  if (letters.size() > kMaxLetters)
    throw Error("at most " + std::to_string(kMaxLetters) + " letters are supported, got " +
                std::to_string(letters.size()));
}

WorldSet all_valuations(std::size_t n) { return WorldSet::first(std::size_t{1} << n); }

WorldSet eval(const Formula& f, const std::vector<std::string>& letters) {
  const std::size_t n = letters.size();
  const WorldSet all = all_valuations(n);
  switch (f.kind()) {
    case FormulaKind::bottom:
      return WorldSet();
    case FormulaKind::letter: {
      auto it = std::find(letters.begin(), letters.end(), f.name());
      if (it == letters.end()) throw LanguageError("letter '" + f.name() + "' is not in the signature");
      const std::size_t i = static_cast<std::size_t>(it - letters.begin());
      WorldSet out;
      for (std::size_t v = 0; v < (std::size_t{1} << n); ++v)
        if ((v >> i) & 1u) out.insert(v);
      return out;
    }
    case FormulaKind::implies:
      return (all - eval(f.lhs(), letters)) | eval(f.rhs(), letters);
    case FormulaKind::belief:
    case FormulaKind::supports:
      break;
  }
  throw LanguageError("belief revision takes propositional formulas only");
}

// Cube over the letters: valuations v with (v & care) == value.
struct Cube {
  unsigned care = 0;
  unsigned value = 0;

  WorldSet members(std::size_t n) const {
    WorldSet out;
    for (unsigned v = 0; v < (1u << n); ++v)
      if ((v & care) == value) out.insert(v);
    return out;
  }
};

std::vector<Cube> minimal_cover(WorldSet models, std::size_t n) {
  std::vector<Cube> implicants;
  for (unsigned care = 0; care < (1u << n); ++care) {
    for (unsigned value = care;; value = (value - 1) & care) {
      Cube c{care, value};
      if (c.members(n).subset_of(models)) implicants.push_back(c);
      if (value == 0) break;
    }
  }
  // Keep the prime implicants: no other implicant strictly contains them.
  std::vector<Cube> primes;
  for (const Cube& c : implicants) {
    WorldSet mine = c.members(n);
    bool prime = std::none_of(implicants.begin(), implicants.end(), [&](const Cube& d) {
      WorldSet other = d.members(n);
      return other != mine && mine.subset_of(other);
    });
    if (prime) primes.push_back(c);
  }
  std::vector<Cube> chosen;
  WorldSet left = models;
  while (!left.empty()) {
    const Cube* best = nullptr;
    std::size_t best_gain = 0;
    for (const Cube& c : primes) {
      std::size_t gain = (c.members(n) & left).size();
      if (gain > best_gain) {
        best = &c;
        best_gain = gain;
      }
    }
    chosen.push_back(*best);
    left -= best->members(n);
  }
  return chosen;
}

std::string render_cube(const Cube& c, const std::vector<std::string>& letters) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (!((c.care >> i) & 1u)) continue;
    if (!out.empty()) out += " & ";
    if (!((c.value >> i) & 1u)) out += '~';
    out += letters[i];
  }
  return out.empty() ? "true" : out;
}

std::string describe(const BeliefState& t) { return "T = Cn(" + canonical_dnf(t.models, t.letters) + ")"; }

std::string describe(WorldSet set, const std::vector<std::string>& letters) { return canonical_dnf(set, letters); }

}  // namespace

bool BeliefState::believes(const Formula& f) const { return models.subset_of(models_of(f, letters)); }

WorldSet models_of(const Formula& f, const std::vector<std::string>& letters) {
  check_letters(letters);
  return eval(f, letters);
}

BeliefState consequence_close(const std::vector<Formula>& s, const std::vector<std::string>& letters) {
  check_letters(letters);
  BeliefState t{letters, all_valuations(letters.size())};
  for (const Formula& f : s) t.models &= eval(f, letters);
  return t;
}

BeliefState expand(const BeliefState& t, const Formula& psi) {
  BeliefState out = t;
  out.models &= models_of(psi, t.letters);
  return out;
}

std::string_view strategy_name(Strategy s) { return s == Strategy::two_layer ? "two_layer" : "hamming"; }

Strategy parse_strategy(std::string_view name) {
  if (name == "two_layer") return Strategy::two_layer;
  if (name == "hamming") return Strategy::hamming;
  throw Error("unknown strategy '" + std::string(name) + "' (expected two_layer or hamming)");
}

GroveSystem grove_system_for(const BeliefState& t, Strategy strategy) {
  check_letters(t.letters);
  if (!t.consistent()) throw ModelError("an inconsistent belief set has no Grove system");
  const std::size_t n = t.letters.size();
  const std::size_t count = std::size_t{1} << n;
  std::vector<int> ranks(count, 0);
  std::vector<std::string> names;
  for (std::size_t v = 0; v < count; ++v) {
    std::string name = "v";
    for (std::size_t i = 0; i < n; ++i) name += ((v >> i) & 1u) ? '1' : '0';
    names.push_back(name);
    if (strategy == Strategy::two_layer) {
      ranks[v] = t.models.contains(v) ? 0 : 1;
    } else {
      int best = static_cast<int>(n) + 1;
      for (World m : t.models) best = std::min(best, std::popcount(static_cast<unsigned>(v ^ m)));
      ranks[v] = best;
    }
  }
  std::map<std::string, WorldSet> valuation;
  for (std::size_t i = 0; i < n; ++i) {
    WorldSet ext;
    for (std::size_t v = 0; v < count; ++v)
      if ((v >> i) & 1u) ext.insert(v);
    valuation.emplace(t.letters[i], ext);
  }
  std::vector<int> component(count, 0);
  return {t.letters, PlausibilityModel::from_ranks(std::move(names), component, ranks, std::move(valuation)), ranks};
}

BeliefState belief_set_of(const GroveSystem& g) { return {g.letters, g.model.min_worlds(g.model.all())}; }

BeliefState revise_via_model(const GroveSystem& g, const Formula& psi) {
  if (!is_propositional(psi)) throw LanguageError("belief revision takes propositional formulas only");
  models_of(psi, g.letters);  // signature check
  return {g.letters, g.model.min_worlds(extension(g.model, psi))};
}

Revision grove_revision(Strategy strategy) {
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::vector<std::string>, std::uint64_t>, std::shared_ptr<const GroveSystem>> systems;
  };
  auto cache = std::make_shared<Cache>();
  return [strategy, cache](const BeliefState& t, const Formula& psi) {
    BeliefState seed = t.consistent() ? t : consequence_close({}, t.letters);
    std::shared_ptr<const GroveSystem> g;
    {
      std::lock_guard<std::mutex> lock(cache->mutex);
      auto& slot = cache->systems[{seed.letters, seed.models.bits()}];
      if (!slot) slot = std::make_shared<const GroveSystem>(grove_system_for(seed, strategy));
      g = slot;
    }
    return revise_via_model(*g, psi);
  };
}

Revision expansion_revision() {
  return [](const BeliefState& t, const Formula& psi) { return expand(t, psi); };
}

std::string canonical_dnf(WorldSet models, const std::vector<std::string>& letters) {
  check_letters(letters);
  const std::size_t n = letters.size();
  if (models.empty()) return "false";
  if (models == all_valuations(n)) return "true";
  std::vector<std::string> parts;
  for (const Cube& c : minimal_cover(models, n)) parts.push_back(render_cube(c, letters));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += " | ";
    out += p;
  }
  return out;
}

Formula minterm_formula(WorldSet models, const std::vector<std::string>& letters) {
  check_letters(letters);
  std::vector<Formula> terms;
  for (World v : models) {
    Formula term = top();
    bool first = true;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      Formula lit = ((v >> i) & 1u) ? letter(letters[i]) : neg(letter(letters[i]));
      term = first ? lit : conj(term, lit);
      first = false;
    }
    terms.push_back(term);
  }
  if (terms.empty()) return Formula::bottom();
  Formula out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) out = disj(out, terms[i]);
  return out;
}

Formula canonical_formula(WorldSet models, const std::vector<std::string>& letters) {
  return parse_formula(canonical_dnf(models, letters), Language::cdl);
}

std::vector<PostulateResult> check_postulates(const Revision& revise, const std::vector<std::string>& letters) {
  check_letters(letters);
  const std::size_t n = letters.size();
  const std::size_t count = std::size_t{1} << n;
  if (count > 8) throw Error("exhaustive postulate checking supports at most 3 letters");
  const std::size_t sets = std::size_t{1} << count;
  const WorldSet all = all_valuations(n);

  std::vector<Formula> canon;
  for (std::size_t m = 0; m < sets; ++m) canon.push_back(canonical_formula(WorldSet(m), letters));

  std::vector<PostulateResult> out;
  for (const char* name : {"Closure", "Success", "Inclusion", "Vacuity", "Consistency", "Extensionality",
                           "Superexpansion", "Subexpansion"})
    out.push_back({name, true, {}});
  auto fail = [&](std::size_t k, const std::string& witness) {
    if (out[k].pass) {
      out[k].pass = false;
      out[k].witness = witness;
    }
  };

  // With few letters T * (psi & phi) is computed on the literal conjunction;
  // otherwise it is looked up by valuation set, which Extensionality covers.
  const bool literal_conjunction = sets * sets * sets <= 200000;

  // Consistent states first so that witnesses prefer them.
  std::vector<std::size_t> order;
  for (std::size_t tm = 1; tm < sets; ++tm) order.push_back(tm);
  order.push_back(0);
  for (std::size_t tm : order) {
    const BeliefState t{letters, WorldSet(tm)};
    std::vector<BeliefState> revised;
    for (std::size_t pm = 0; pm < sets; ++pm) revised.push_back(revise(t, canon[pm]));

    for (std::size_t pm = 0; pm < sets; ++pm) {
      const WorldSet psi(pm);
      const BeliefState& r = revised[pm];
      const std::string at = describe(t) + ", psi = " + describe(psi, letters);
      const WorldSet expanded = t.models & psi;

      if (r.letters != letters || !r.models.subset_of(all)) fail(0, at);
      if (!r.models.subset_of(psi)) fail(1, at);
      if (!expanded.subset_of(r.models)) fail(2, at);
      if (!expanded.empty() && r.models != expanded) fail(3, at);
      if (!psi.empty() && r.models.empty()) fail(4, at);
      if (revise(t, minterm_formula(psi, letters)).models != r.models) fail(5, at);

      for (std::size_t fm = 0; fm < sets; ++fm) {
        const WorldSet phi(fm);
        const WorldSet r_plus_phi = r.models & phi;
        const WorldSet both = literal_conjunction ? revise(t, conj(canon[pm], canon[fm])).models
                                                  : revised[pm & fm].models;
        auto where = [&] { return at + ", phi = " + describe(phi, letters); };
        if (!r_plus_phi.subset_of(both)) fail(6, where());
        if (!r_plus_phi.empty() && !both.subset_of(r_plus_phi)) fail(7, where());
      }
    }
  }
  return out;
}

}  // namespace cdl::agm
