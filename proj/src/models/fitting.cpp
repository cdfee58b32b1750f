#include "cdl/error.hpp"
#include "cdl/models.hpp"

namespace cdl {

namespace {

WorldSet widen_to_components(const PlausibilityModel& m, WorldSet s) {
  WorldSet out;
  for (World w : s) out |= m.component(w);
  return out;
}

}  // namespace

FittingModel::FittingModel(PlausibilityModel base, std::vector<AdmFact> facts, AdmDefault mode)
    : base_(std::move(base)), facts_(std::move(facts)), mode_(mode) {
  for (AdmFact& f : facts_) {
    if (!f.worlds.subset_of(base_.all())) throw ModelError("admissibility fact mentions unknown worlds");
    if (!is_jcdl(f.formula)) throw LanguageError("admissibility fact formula is not a JCDL formula");
    f.worlds = widen_to_components(base_, f.worlds);
    base_by_term_[f.term][f.formula] |= f.worlds;
  }
}

FittingModel::FittingModel(const FittingModel& other)
    : base_(other.base_), facts_(other.facts_), mode_(other.mode_), base_by_term_(other.base_by_term_) {}

FittingModel& FittingModel::operator=(const FittingModel& other) {
  if (this != &other) {
    base_ = other.base_;
    facts_ = other.facts_;
    mode_ = other.mode_;
    base_by_term_ = other.base_by_term_;
    std::lock_guard lock(cache_mutex_);
    cache_.clear();
  }
  return *this;
}

// For a term t, the formulas phi with A(t, phi) nonempty, each mapped to
// A(t, phi). This is the least assignment closed under the admissibility
// rules: it is computed by recursion on t, since every rule only ever forces
// A(t, -) from the values at the immediate subterms of t.
const FittingModel::Produced& FittingModel::produced(const Term& t) const {
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return *it->second;
  }
  auto out = std::make_shared<Produced>();
  if (auto it = base_by_term_.find(t); it != base_by_term_.end()) *out = it->second;
  switch (t.kind()) {
    case TermKind::cert:
      (*out)[t.certified()] = base_.all();
      break;
    case TermKind::sum:
      for (const Term& side : {t.left(), t.right()}) {
        for (const auto& [phi, ws] : produced(side)) (*out)[phi] |= ws;
      }
      break;
    case TermKind::app: {
      const Produced& fun = produced(t.left());
      const Produced& arg = produced(t.right());
      for (const auto& [imp, ws] : fun) {
        if (!imp.is_implies()) continue;
        auto a = arg.find(imp.lhs());
        if (a == arg.end()) continue;
        WorldSet both = ws & a->second;
        if (!both.empty()) (*out)[imp.rhs()] |= both;
      }
      break;
    }
  }
  std::lock_guard lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(t, std::move(out));
  return *it->second;
}

WorldSet FittingModel::admissible_set(const Term& t, const Formula& phi) const {
  if (mode_ == AdmDefault::full) return base_.all();
  const Produced& p = produced(t);
  auto it = p.find(phi);
  return it == p.end() ? WorldSet() : it->second;
}

FittingModel FittingModel::restrict(WorldSet keep) const {
  PlausibilityModel sub = base_.restrict(keep);
  std::vector<AdmFact> facts;
  for (const AdmFact& f : facts_) {
    WorldSet ws;
    World i = 0;
    for (World w : keep) {
      if (f.worlds.contains(w)) ws.insert(i);
      ++i;
    }
    if (!ws.empty()) facts.push_back({f.term, f.formula, ws});
  }
  return FittingModel(std::move(sub), std::move(facts), mode_);
}

bool admissible(const FittingModel& m, const Term& t, const Formula& phi, World w) {
  if (w >= m.base().size()) throw ModelError("unknown world index " + std::to_string(w));
  return m.admissible(t, phi, w);
}

FittingModel restrict_to_component(const FittingModel& m, World w) {
  if (w >= m.base().size()) throw ModelError("unknown world index " + std::to_string(w));
  return m.restrict(m.base().component(w));
}

}  // namespace cdl
