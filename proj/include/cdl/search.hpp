#pragma once

// Bounded enumeration of finite plausibility and Fitting models, and
// countermodel search over them.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdl/models.hpp"
#include "cdl/syntax.hpp"

namespace cdl::search {

enum class Shape { well_ordered, locally_well_ordered };

struct SearchBounds {
  std::size_t max_worlds = 3;
  std::vector<std::string> letters;
  Shape shape = Shape::well_ordered;
  /// Admissibility defaults tried for Fitting models.
  std::vector<AdmDefault> adm_modes{AdmDefault::empty, AdmDefault::full};
  /// Stop after this many models; 0 means no cap.
  std::size_t max_models = 0;
  /// For locally well-ordered searches, search only connected models: any
  /// countermodel restricts to its component, which is well-ordered.
  bool exploit_restriction = true;
};

/// Every total preorder on n worlds as a rank vector (ranks 0..k-1, each
/// used), in lexicographic order.
std::vector<std::vector<int>> total_preorders(std::size_t n);
/// Every partition of n worlds into components as a restricted growth
/// string, in lexicographic order.
std::vector<std::vector<int>> set_partitions(std::size_t n);
/// Every preorder (reflexive, transitive relation) on n worlds as down-sets:
/// element y is the set {x | x <= y}.
std::vector<std::vector<WorldSet>> all_preorders(std::size_t n);

/// Calls `visit` for each plausibility model within the bounds; a false
/// return stops the enumeration. Returns the number of models visited.
std::size_t enumerate_models(const SearchBounds& b, const std::function<bool(const PlausibilityModel&)>& visit);

/// Fitting models over the enumerated plausibility models: for each default
/// in `adm_modes`, `full` once, and `empty` with every base assignment over
/// the support pairs of `target` (one representative per distinct
/// admissibility pattern of those pairs, chosen per component).
std::size_t enumerate_fitting_models(const SearchBounds& b, const Formula& target,
                                     const std::function<bool(const FittingModel&)>& visit);

struct Countermodel {
  AnyModel model;
  World world = 0;
};

struct SearchResult {
  std::optional<Countermodel> countermodel;
  /// Models evaluated. For `empty`-default Fitting models this counts
  /// search nodes, each covering every admissibility pattern below it.
  std::size_t models_checked = 0;
  /// Every model within the bounds was checked.
  bool complete = true;
};

/// First pointed model falsifying f. CDL formulas are searched on
/// plausibility models, other JCDL formulas on Fitting models. Under the
/// `empty` default the admissibility patterns are branched on lazily and
/// pruned once f is settled, so the first countermodel found may differ
/// from the first one in enumerate_fitting_models order. Throws Error when
/// f uses a letter outside b.letters.
SearchResult find_countermodel(const Formula& f, const SearchBounds& b);

/// Restricts a countermodel to the component of its world.
Countermodel restrict_countermodel(const Countermodel& c);

/// Sorted letters occurring in the formulas.
std::vector<std::string> letters_for(const std::vector<Formula>& fs);

}  // namespace cdl::search
