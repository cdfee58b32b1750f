#include "cdl/error.hpp"
#include "cdl/semantics.hpp"

namespace cdl {

Evaluator::Evaluator(const PlausibilityModel& m, Clause clause)
    : base_(m), clause_(clause), components_(m.components()) {}

Evaluator::Evaluator(const FittingModel& m, Clause clause)
    : base_(m.base()), fitting_(&m), clause_(clause), components_(m.base().components()) {}

WorldSet Evaluator::extension(const Formula& f) { return eval(f); }

WorldSet Evaluator::belief_set(WorldSet cond, WorldSet body) const {
  WorldSet good;
  if (clause_ == Clause::general) {
    for (World x = 0; x < base_.size(); ++x) {
      WorldSet below = base_.down(x) & cond;
      bool ok = below.empty();
      for (World y : below) {
        if ((base_.down(y) & cond).subset_of(body)) {
          ok = true;
          break;
        }
      }
      if (ok) good.insert(x);
    }
  } else {
    // Only a minimal psi-world outside [phi] spoils its component.
    good = base_.all() - (base_.min_worlds(cond) - body);
  }
  // Truth is decided per connected component.
  WorldSet out;
  for (WorldSet comp : components_) {
    if (comp.subset_of(good)) out |= comp;
  }
  return out;
}

WorldSet Evaluator::eval(const Formula& f) {
  if (auto it = cache_.find(f); it != cache_.end()) return it->second;
  WorldSet out;
  switch (f.kind()) {
    case FormulaKind::bottom:
      break;
    case FormulaKind::letter:
      out = base_.letter_extension(f.name());
      break;
    case FormulaKind::implies:
      out = (base_.all() - eval(f.lhs())) | eval(f.rhs());
      break;
    case FormulaKind::belief:
      if (fitting_ != nullptr) throw LanguageError("conditional belief is not part of JCDL: " + render(f));
      out = belief_set(eval(f.cond()), eval(f.body()));
      break;
    case FormulaKind::supports:
      if (fitting_ == nullptr) throw LanguageError("term support needs a Fitting model: " + render(f));
      out = belief_set(eval(f.cond()), eval(f.body())) & fitting_->admissible_set(f.term(), f.body());
      break;
  }
  cache_.emplace(f, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_world(std::size_t size, World w) {
  if (w >= size) throw ModelError("unknown world index " + std::to_string(w));
}

}  // namespace

bool satisfies(const PlausibilityModel& m, World w, const Formula& f) {
  check_world(m.size(), w);
  return Evaluator(m).satisfies(w, f);
}

bool satisfies(const FittingModel& m, World w, const Formula& f) {
  check_world(m.base().size(), w);
  return Evaluator(m).satisfies(w, f);
}

bool satisfies_min(const PlausibilityModel& m, World w, const Formula& f) {
  check_world(m.size(), w);
  return Evaluator(m, Clause::min).satisfies(w, f);
}

bool satisfies_min(const FittingModel& m, World w, const Formula& f) {
  check_world(m.base().size(), w);
  return Evaluator(m, Clause::min).satisfies(w, f);
}

WorldSet extension(const PlausibilityModel& m, const Formula& f) { return Evaluator(m).extension(f); }
WorldSet extension(const FittingModel& m, const Formula& f) { return Evaluator(m).extension(f); }

bool valid_in_model(const PlausibilityModel& m, const Formula& f) { return extension(m, f) == m.all(); }
bool valid_in_model(const FittingModel& m, const Formula& f) { return extension(m, f) == m.base().all(); }

bool knowledge_holds(const PlausibilityModel& m, World w, const Formula& f) { return satisfies(m, w, know(f)); }

bool local_consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                       const std::vector<PointedModel>& sample) {
  for (const PointedModel& pm : sample) {
    bool ok = std::visit(
        [&](const auto& m) {
          Evaluator ev(m);
          for (const Formula& p : premises) {
            if (!ev.satisfies(pm.world, p)) return true;
          }
          return ev.satisfies(pm.world, conclusion);
        },
        pm.model);
    if (!ok) return false;
  }
  return true;
}

}  // namespace cdl
