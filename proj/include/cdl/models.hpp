#pragma once

// Finite plausibility models and Fitting models.
//
// Worlds are indices 0..size()-1 with display names. The plausibility order
// x <= y reads "x is at least as plausible as y"; lower is more plausible.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cdl/syntax.hpp"
#include "cdl/world_set.hpp"

namespace cdl {

using World = std::size_t;

/// Order-theoretic properties of a model, each computed from its definition.
struct ModelClass {
  bool finite = true;
  bool well_founded = false;
  bool smooth = false;
  bool total = false;
  bool locally_total = false;
  bool connected = false;
  bool well_ordered = false;
  bool locally_well_ordered = false;
};

class PlausibilityModel {
 public:
  /// Builds a model from an explicit relation. `pairs` lists (x, y) with
  /// x <= y. Throws ModelError unless the relation is reflexive and transitive.
  static PlausibilityModel from_relation(std::vector<std::string> names,
                                         const std::vector<std::pair<World, World>>& pairs,
                                         std::map<std::string, WorldSet> valuation);

  /// Builds a locally well-ordered model: worlds in the same component are
  /// ordered by rank (lower rank = more plausible), different components
  /// are incomparable.
  static PlausibilityModel from_ranks(std::vector<std::string> names, const std::vector<int>& component,
                                      const std::vector<int>& rank, std::map<std::string, WorldSet> valuation);

  std::size_t size() const { return names_.size(); }
  WorldSet all() const { return WorldSet::first(size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(World w) const { return names_.at(w); }
  /// Throws ModelError for an unknown name.
  World index_of(std::string_view name) const;

  bool le(World x, World y) const { return down_[y].contains(x); }
  bool lt(World x, World y) const { return le(x, y) && !le(y, x); }
  /// {y | y <= x}
  WorldSet down(World x) const { return down_[x]; }
  /// {y | y < x}
  WorldSet strictly_below(World x) const { return strict_down_[x]; }

  /// Letters with a nonempty or explicitly declared extension.
  std::set<std::string> letters() const;
  /// Worlds where `letter` holds; empty for letters the model does not mention.
  WorldSet letter_extension(const std::string& letter) const;
  std::set<std::string> true_letters(World w) const;
  const std::map<std::string, WorldSet>& valuation() const { return valuation_; }

  /// Connected component of w under the symmetric-transitive closure of <=.
  WorldSet component(World w) const { return component_.at(w); }
  /// The distinct connected components, ordered by least member.
  std::vector<WorldSet> components() const;

  /// {x in S | no y in S with y < x}
  WorldSet min_worlds(WorldSet s) const;

  /// Submodel on `keep` with worlds renumbered in ascending order.
  PlausibilityModel restrict(WorldSet keep) const;

 private:
  PlausibilityModel() = default;
  void finish();

  std::vector<std::string> names_;
  std::vector<WorldSet> down_;
  std::vector<WorldSet> strict_down_;
  std::vector<WorldSet> component_;
  std::map<std::string, WorldSet> valuation_;
};

ModelClass classify_model(const PlausibilityModel& m);
WorldSet connected_component(const PlausibilityModel& m, World w);
WorldSet min_worlds(const PlausibilityModel& m, WorldSet s);
PlausibilityModel restrict_to_component(const PlausibilityModel& m, World w);

// ---------------------------------------------------------------------------

enum class AdmDefault { empty, full };

/// A base admissibility fact: `term` is admissible for `formula` at `worlds`.
struct AdmFact {
  Term term;
  Formula formula;
  WorldSet worlds;
};

/// A plausibility model with an admissibility function A(t, phi) given by a
/// finite base and a default. With default `full` every term is admissible
/// for every formula everywhere. With default `empty`, A is the least
/// function containing the base that satisfies Certification, Application,
/// Sum and Indefeasibility; base facts are widened to whole components.
class FittingModel {
 public:
  FittingModel(PlausibilityModel base, std::vector<AdmFact> facts, AdmDefault mode);
  FittingModel(const FittingModel& other);
  FittingModel& operator=(const FittingModel& other);

  const PlausibilityModel& base() const { return base_; }
  const std::vector<AdmFact>& facts() const { return facts_; }
  AdmDefault mode() const { return mode_; }

  /// A(t, phi) as a set of worlds.
  WorldSet admissible_set(const Term& t, const Formula& phi) const;
  bool admissible(const Term& t, const Formula& phi, World w) const {
    return admissible_set(t, phi).contains(w);
  }

  FittingModel restrict(WorldSet keep) const;

 private:
  using Produced = std::unordered_map<Formula, WorldSet>;
  const Produced& produced(const Term& t) const;

  PlausibilityModel base_;
  std::vector<AdmFact> facts_;
  AdmDefault mode_;
  std::unordered_map<Term, Produced> base_by_term_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<Term, std::shared_ptr<const Produced>> cache_;
};

bool admissible(const FittingModel& m, const Term& t, const Formula& phi, World w);
FittingModel restrict_to_component(const FittingModel& m, World w);

// ---------------------------------------------------------------------------
// Model file format.

using AnyModel = std::variant<PlausibilityModel, FittingModel>;

/// Parses the line-based model format. Throws ModelError or ParseError.
AnyModel load_model(std::string_view text);
AnyModel load_model_file(const std::string& path);

std::string render_model(const PlausibilityModel& m);
std::string render_model(const FittingModel& m);

}  // namespace cdl
