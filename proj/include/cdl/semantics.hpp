#pragma once

// Truth of CDL formulas on plausibility models and JCDL formulas on Fitting
// models.

#include <unordered_map>
#include <variant>
#include <vector>

#include "cdl/models.hpp"
#include "cdl/syntax.hpp"

namespace cdl {

/// Which truth clause decides B[psi] phi and {t}:[psi] phi.
///  general: every x in cc(w) has no psi-world below it, or some psi-world y
///           below x has all psi-worlds below y inside [phi].
///  min:     min [psi] restricted to cc(w) is inside [phi]. Only correct on
///           well-founded models, which all finite models are.
enum class Clause { general, min };

/// Computes extensions bottom-up with a per-subformula cache. Holds a
/// reference to the model, which must outlive the evaluator.
class Evaluator {
 public:
  explicit Evaluator(const PlausibilityModel& m, Clause clause = Clause::general);
  explicit Evaluator(const FittingModel& m, Clause clause = Clause::general);

  /// {v | M, v |= f}. Throws LanguageError on a language/model mismatch.
  WorldSet extension(const Formula& f);
  bool satisfies(World w, const Formula& f) { return extension(f).contains(w); }

 private:
  WorldSet eval(const Formula& f);
  WorldSet belief_set(WorldSet cond, WorldSet body) const;

  const PlausibilityModel& base_;
  const FittingModel* fitting_ = nullptr;
  Clause clause_;
  std::vector<WorldSet> components_;
  std::unordered_map<Formula, WorldSet> cache_;
};

bool satisfies(const PlausibilityModel& m, World w, const Formula& f);
bool satisfies(const FittingModel& m, World w, const Formula& f);
bool satisfies_min(const PlausibilityModel& m, World w, const Formula& f);
bool satisfies_min(const FittingModel& m, World w, const Formula& f);

WorldSet extension(const PlausibilityModel& m, const Formula& f);
WorldSet extension(const FittingModel& m, const Formula& f);

bool valid_in_model(const PlausibilityModel& m, const Formula& f);
bool valid_in_model(const FittingModel& m, const Formula& f);

/// K f, i.e. B[~f] false, at w.
bool knowledge_holds(const PlausibilityModel& m, World w, const Formula& f);

struct PointedModel {
  std::variant<PlausibilityModel, FittingModel> model;
  World world;
};

/// Whether every supplied pointed model satisfying all of `premises` also
/// satisfies `conclusion`. This only covers the given sample; it is not a
/// decision procedure for local consequence.
bool local_consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                       const std::vector<PointedModel>& sample);

}  // namespace cdl
