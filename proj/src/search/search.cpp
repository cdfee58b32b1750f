#include "cdl/search.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "cdl/error.hpp"
#include "cdl/semantics.hpp"

namespace cdl::search {

namespace {

struct ShapeData {
  std::vector<std::string> names;
  std::vector<int> component;
  std::vector<int> rank;
};

std::vector<std::string> world_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

// Calls fn for every order shape on 1..max_worlds worlds; false stops.
bool for_each_shape(std::size_t max_worlds, Shape shape, const std::function<bool(const ShapeData&)>& fn) {
  if (max_worlds == 0) throw Error("search bounds need at least one world");
  if (max_worlds > kMaxWorlds) throw Error("search bounds exceed the world limit");
  for (std::size_t n = 1; n <= max_worlds; ++n) {
    ShapeData s{world_names(n), std::vector<int>(n, 0), {}};
    if (shape == Shape::well_ordered) {
      for (const auto& r : total_preorders(n)) {
        s.rank = r;
        if (!fn(s)) return false;
      }
      continue;
    }
    for (const auto& part : set_partitions(n)) {
      const int blocks = *std::max_element(part.begin(), part.end()) + 1;
      std::vector<std::vector<World>> members(static_cast<std::size_t>(blocks));
      for (World w = 0; w < n; ++w) members[static_cast<std::size_t>(part[w])].push_back(w);
      std::vector<std::vector<std::vector<int>>> options;
      for (const auto& m : members) options.push_back(total_preorders(m.size()));
      // Odometer over the per-component rank vectors.
      std::vector<std::size_t> pick(options.size(), 0);
      for (;;) {
        s.component = part;
        s.rank.assign(n, 0);
        for (std::size_t c = 0; c < members.size(); ++c)
          for (std::size_t i = 0; i < members[c].size(); ++i) s.rank[members[c][i]] = options[c][pick[c]][i];
        if (!fn(s)) return false;
        std::size_t c = options.size();
        while (c > 0 && ++pick[c - 1] == options[c - 1].size()) pick[--c] = 0;
        if (c == 0) break;
      }
    }
  }
  return true;
}

// Calls fn for every valuation of the letters over n worlds; false stops.
bool for_each_valuation(std::size_t n, const std::vector<std::string>& letters,
                        const std::function<bool(std::map<std::string, WorldSet>)>& fn) {
  const std::size_t bits = n * letters.size();
  if (bits >= 63) throw Error("too many valuations to enumerate");
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    std::map<std::string, WorldSet> val;
    // The first letter varies slowest.
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const std::size_t shift = (letters.size() - 1 - i) * n;
      val.emplace(letters[i], WorldSet((code >> shift) & mask));
    }
    if (!fn(std::move(val))) return false;
  }
  return true;
}

std::vector<SupportPair> occurring_pairs(const Formula& f) {
  std::set<SupportPair> seen;
  for (const Formula& g : subformulas(f))
    if (g.is_supports()) seen.emplace(g.term(), g.body());
  return {seen.begin(), seen.end()};
}

// One representative base per distinct admissibility pattern of `pairs` on
// each component of the shape.
std::vector<std::vector<AdmFact>> admissibility_patterns(const PlausibilityModel& shape,
                                                         const std::vector<SupportPair>& pairs) {
  constexpr std::size_t kMaxPatterns = std::size_t{1} << 16;
  std::vector<std::vector<std::vector<AdmFact>>> per_component;
  for (WorldSet comp : shape.components()) {
    auto profile = [&](const std::vector<AdmFact>& facts) {
      FittingModel fm(shape, facts, AdmDefault::empty);
      std::vector<bool> key;
      for (const auto& [t, phi] : pairs) key.push_back(fm.admissible_set(t, phi).intersects(comp));
      return key;
    };
    // Closed profiles, grown one base fact at a time from the empty base;
    // closure is monotone, so this reaches the profile of every subset.
    std::map<std::vector<bool>, std::vector<AdmFact>> patterns;
    std::vector<std::vector<bool>> queue{profile({})};
    patterns.emplace(queue.front(), std::vector<AdmFact>{});
    for (std::size_t next = 0; next < queue.size(); ++next) {
      const std::vector<bool> key = queue[next];
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (key[i]) continue;
        std::vector<AdmFact> facts = patterns.at(key);
        facts.push_back({pairs[i].first, pairs[i].second, comp});
        std::vector<bool> grown = profile(facts);
        if (patterns.emplace(grown, std::move(facts)).second) queue.push_back(std::move(grown));
      }
      if (patterns.size() > kMaxPatterns) throw Error("too many admissibility patterns to enumerate");
    }
    std::vector<std::vector<AdmFact>> reps;
    for (auto& [key, facts] : patterns) reps.push_back(std::move(facts));
    per_component.push_back(std::move(reps));
  }
  std::vector<std::vector<AdmFact>> out{{}};
  for (const auto& reps : per_component) {
    std::vector<std::vector<AdmFact>> next;
    for (const auto& prefix : out) {
      for (const auto& rep : reps) {
        std::vector<AdmFact> combined = prefix;
        combined.insert(combined.end(), rep.begin(), rep.end());
        next.push_back(std::move(combined));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Countermodel search over the `empty`-default Fitting models of one base.
// Admissibility of each occurring pair on each component is a bit that is
// yes, no or open. Formulas get three-valued extensions (surely true, maybe
// true), so a branch stops once the target is settled at every world. Each
// yes is closed under the admissibility rules, and a closure that hits a no
// kills the branch. Leaves are therefore exactly the realizable patterns.
class AdmissibilitySearch {
 public:
  AdmissibilitySearch(const Formula& target, const std::vector<SupportPair>& pairs)
      : target_(target), pairs_(pairs), probe_(PlausibilityModel::from_ranks({"w1"}, {0}, {0}, {})) {
    if (pairs.size() > 64) throw Error("too many support pairs for admissibility search");
    for (std::size_t i = 0; i < pairs.size(); ++i) index_.emplace(pairs[i], i);
  }

  // Returns false when the search should stop: a countermodel was found or
  // the node budget ran out.
  bool run(const PlausibilityModel& base, std::size_t& nodes, std::size_t max_nodes,
           std::optional<Countermodel>& found) {
    base_ = &base;
    comps_ = base.components();
    yes_.assign(comps_.size(), close(0));
    no_.assign(comps_.size(), 0);
    nodes_ = &nodes;
    max_nodes_ = max_nodes;
    found_ = &found;
    return descend();
  }

 private:
  using Mask = std::uint64_t;
  struct Range {
    WorldSet sure;
    WorldSet maybe;
  };

  Mask bit(std::size_t i) const { return Mask{1} << i; }

  // Pairs admissible on a component whose base facts are exactly `facts`.
  Mask close(Mask facts) {
    if (auto it = closure_.find(facts); it != closure_.end()) return it->second;
    std::vector<AdmFact> base_facts;
    for (std::size_t i = 0; i < pairs_.size(); ++i)
      if (facts & bit(i)) base_facts.push_back({pairs_[i].first, pairs_[i].second, WorldSet::first(1)});
    FittingModel fm(probe_, std::move(base_facts), AdmDefault::empty);
    Mask out = 0;
    for (std::size_t i = 0; i < pairs_.size(); ++i)
      if (fm.admissible(pairs_[i].first, pairs_[i].second, 0)) out |= bit(i);
    closure_.emplace(facts, out);
    return out;
  }

  WorldSet belief(WorldSet cond, WorldSet body) const {
    WorldSet good = base_->all() - (base_->min_worlds(cond) - body);
    WorldSet out;
    for (WorldSet comp : comps_)
      if (comp.subset_of(good)) out |= comp;
    return out;
  }

  Range eval(const Formula& f, std::unordered_map<Formula, Range>& memo, int depth = 0) {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    Range r;
    switch (f.kind()) {
      case FormulaKind::bottom:
        break;
      case FormulaKind::letter:
        r.sure = r.maybe = base_->letter_extension(f.name());
        break;
      case FormulaKind::implies: {
        Range a = eval(f.lhs(), memo, depth + 1);
        Range b = eval(f.rhs(), memo, depth + 1);
        r.sure = (base_->all() - a.maybe) | b.sure;
        r.maybe = (base_->all() - a.sure) | b.maybe;
        break;
      }
      case FormulaKind::belief:
        throw LanguageError("conditional belief is not part of JCDL: " + render(f));
      case FormulaKind::supports: {
        Range c = eval(f.cond(), memo, depth + 1);
        Range b = eval(f.body(), memo, depth + 1);
        // Where the condition is unsettled on a component, so is the belief.
        WorldSet settled;
        for (WorldSet comp : comps_)
          if ((c.sure & comp) == (c.maybe & comp)) settled |= comp;
        const std::size_t i = index_.at({f.term(), f.body()});
        WorldSet adm_yes;
        WorldSet adm_open;
        for (std::size_t k = 0; k < comps_.size(); ++k) {
          if (yes_[k] & bit(i)) adm_yes |= comps_[k];
          if (!(no_[k] & bit(i))) adm_open |= comps_[k];
        }
        r.sure = belief(c.sure, b.sure) & settled & adm_yes;
        const WorldSet possible = (belief(c.sure, b.maybe) & settled) | (base_->all() - settled);
        r.maybe = possible & adm_open;
        // Branch first on the outermost open bit that can change this truth value.
        if (depth < pick_depth_) {
          for (std::size_t k = 0; k < comps_.size(); ++k) {
            if (((yes_[k] | no_[k]) & bit(i)) || !possible.intersects(comps_[k])) continue;
            pick_depth_ = depth;
            pick_ = {k, i};
            break;
          }
        }
        break;
      }
    }
    memo.emplace(f, r);
    return r;
  }

  bool descend() {
    if (max_nodes_ != 0 && *nodes_ >= max_nodes_) return false;
    ++*nodes_;
    std::unordered_map<Formula, Range> memo;
    pick_depth_ = std::numeric_limits<int>::max();
    const Range r = eval(target_, memo);
    const int found_depth = pick_depth_;
    const auto [k, i] = pick_;
    if (r.sure == base_->all()) return true;
    if (r.maybe != base_->all()) {
      std::vector<AdmFact> facts;
      for (std::size_t k = 0; k < comps_.size(); ++k)
        for (std::size_t i = 0; i < pairs_.size(); ++i)
          if (yes_[k] & bit(i)) facts.push_back({pairs_[i].first, pairs_[i].second, comps_[k]});
      FittingModel m(*base_, std::move(facts), AdmDefault::empty);
      *found_ = Countermodel{m, first_outside(extension(m, target_), base_->size())};
      return false;
    }
    if (found_depth == std::numeric_limits<int>::max()) throw Error("admissibility search left the target unsettled");
    const Mask saved = yes_[k];
    no_[k] |= bit(i);
    if (!descend()) return false;
    no_[k] &= ~bit(i);
    const Mask grown = close(yes_[k] | bit(i));
    if ((grown & no_[k]) == 0) {
      yes_[k] = grown;
      const bool go_on = descend();
      yes_[k] = saved;
      if (!go_on) return false;
    }
    return true;
  }

  static World first_outside(WorldSet ext, std::size_t n) {
    for (World w = 0; w < n; ++w)
      if (!ext.contains(w)) return w;
    return n;
  }

  Formula target_;
  std::vector<SupportPair> pairs_;
  std::map<SupportPair, std::size_t> index_;
  PlausibilityModel probe_;
  std::unordered_map<Mask, Mask> closure_;

  const PlausibilityModel* base_ = nullptr;
  std::vector<WorldSet> comps_;
  std::vector<Mask> yes_;
  std::vector<Mask> no_;
  std::size_t* nodes_ = nullptr;
  std::size_t max_nodes_ = 0;
  std::optional<Countermodel>* found_ = nullptr;
  int pick_depth_ = 0;
  std::pair<std::size_t, std::size_t> pick_;
};

void check_letters(const Formula& f, const SearchBounds& b) {
  for (const std::string& l : letters_of(f)) {
    if (std::find(b.letters.begin(), b.letters.end(), l) == b.letters.end())
      throw Error("letter '" + l + "' is not among the search letters");
  }
}

World first_outside(WorldSet ext, std::size_t n) {
  for (World w = 0; w < n; ++w)
    if (!ext.contains(w)) return w;
  return n;
}

}  // namespace

std::vector<std::vector<int>> total_preorders(std::size_t n) {
  std::vector<std::vector<int>> out;
  if (n == 0) return {{}};
  std::vector<int> r(n, 0);
  for (;;) {
    int top = *std::max_element(r.begin(), r.end());
    std::vector<bool> used(static_cast<std::size_t>(top) + 1, false);
    for (int x : r) used[static_cast<std::size_t>(x)] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) out.push_back(r);
    std::size_t i = n;
    while (i > 0 && ++r[i - 1] == static_cast<int>(n)) r[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::vector<std::vector<int>> set_partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int blocks) {
    if (i == n) {
      out.push_back(s);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      s[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) return {{}};
  s[0] = 0;
  rec(1, 1);
  return out;
}

std::vector<std::vector<WorldSet>> all_preorders(std::size_t n) {
  if (n > 5) throw Error("preorder enumeration supports at most 5 worlds");
  std::vector<std::pair<World, World>> off;
  for (World x = 0; x < n; ++x)
    for (World y = 0; y < n; ++y)
      if (x != y) off.emplace_back(x, y);
  std::vector<std::vector<WorldSet>> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << off.size()); ++code) {
    std::vector<WorldSet> down(n);
    for (World w = 0; w < n; ++w) down[w].insert(w);
    for (std::size_t i = 0; i < off.size(); ++i)
      if ((code >> i) & 1u) down[off[i].second].insert(off[i].first);
    // Transitive iff every down-set is closed under down.
    bool transitive = true;
    for (World y = 0; y < n && transitive; ++y)
      for (World x : down[y]) transitive = transitive && down[x].subset_of(down[y]);
    if (transitive) out.push_back(std::move(down));
  }
  return out;
}

std::size_t enumerate_models(const SearchBounds& b, const std::function<bool(const PlausibilityModel&)>& visit) {
  std::size_t count = 0;
  for_each_shape(b.max_worlds, b.shape, [&](const ShapeData& s) {
    return for_each_valuation(s.names.size(), b.letters, [&](std::map<std::string, WorldSet> val) {
      if (b.max_models != 0 && count >= b.max_models) return false;
      ++count;
      return visit(PlausibilityModel::from_ranks(s.names, s.component, s.rank, std::move(val)));
    });
  });
  return count;
}

std::size_t enumerate_fitting_models(const SearchBounds& b, const Formula& target,
                                     const std::function<bool(const FittingModel&)>& visit) {
  const std::vector<SupportPair> pairs = occurring_pairs(target);
  std::size_t count = 0;
  for_each_shape(b.max_worlds, b.shape, [&](const ShapeData& s) {
    PlausibilityModel bare = PlausibilityModel::from_ranks(s.names, s.component, s.rank, {});
    std::vector<std::vector<AdmFact>> patterns;
    for (AdmDefault mode : b.adm_modes)
      if (mode == AdmDefault::empty && patterns.empty()) patterns = admissibility_patterns(bare, pairs);
    return for_each_valuation(s.names.size(), b.letters, [&](std::map<std::string, WorldSet> val) {
      PlausibilityModel base = PlausibilityModel::from_ranks(s.names, s.component, s.rank, std::move(val));
      auto emit = [&](std::vector<AdmFact> facts, AdmDefault mode) {
        if (b.max_models != 0 && count >= b.max_models) return false;
        ++count;
        return visit(FittingModel(base, std::move(facts), mode));
      };
      for (AdmDefault mode : b.adm_modes) {
        if (mode == AdmDefault::full) {
          if (!emit({}, AdmDefault::full)) return false;
          continue;
        }
        for (const auto& facts : patterns)
          if (!emit(facts, AdmDefault::empty)) return false;
      }
      return true;
    });
  });
  return count;
}

SearchResult find_countermodel(const Formula& f, const SearchBounds& b) {
  check_letters(f, b);
  SearchBounds bounds = b;
  if (bounds.shape == Shape::locally_well_ordered && bounds.exploit_restriction) bounds.shape = Shape::well_ordered;

  SearchResult result;
  if (is_cdl(f)) {
    result.models_checked = enumerate_models(bounds, [&](const PlausibilityModel& m) {
      World w = first_outside(extension(m, f), m.size());
      if (w == m.size()) return true;
      result.countermodel = Countermodel{m, w};
      return false;
    });
  } else {
    if (!is_jcdl(f)) throw LanguageError("formula mixes conditional belief and term support");
    AdmissibilitySearch adm(f, occurring_pairs(f));
    std::size_t& count = result.models_checked;
    for_each_shape(bounds.max_worlds, bounds.shape, [&](const ShapeData& s) {
      return for_each_valuation(s.names.size(), bounds.letters, [&](std::map<std::string, WorldSet> val) {
        PlausibilityModel base = PlausibilityModel::from_ranks(s.names, s.component, s.rank, std::move(val));
        for (AdmDefault mode : bounds.adm_modes) {
          if (mode == AdmDefault::empty) {
            if (!adm.run(base, count, bounds.max_models, result.countermodel)) return false;
            continue;
          }
          if (bounds.max_models != 0 && count >= bounds.max_models) return false;
          ++count;
          FittingModel m(base, {}, AdmDefault::full);
          World w = first_outside(extension(m, f), base.size());
          if (w == base.size()) continue;
          result.countermodel = Countermodel{m, w};
          return false;
        }
        return true;
      });
    });
  }
  result.complete = result.countermodel.has_value() || b.max_models == 0 || result.models_checked < b.max_models;
  return result;
}

Countermodel restrict_countermodel(const Countermodel& c) {
  return std::visit(
      [&](const auto& m) -> Countermodel {
        WorldSet comp;
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PlausibilityModel>) {
          comp = m.component(c.world);
        } else {
          comp = m.base().component(c.world);
        }
        World renumbered = 0;
        for (World x : comp) {
          if (x == c.world) break;
          ++renumbered;
        }
        return Countermodel{m.restrict(comp), renumbered};
      },
      c.model);
}

std::vector<std::string> letters_for(const std::vector<Formula>& fs) {
  std::set<std::string> all;
  for (const Formula& f : fs) collect_letters(f, all);
  return {all.begin(), all.end()};
}

}  // namespace cdl::search
