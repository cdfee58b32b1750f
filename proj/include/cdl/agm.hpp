#pragma once

// AGM belief revision over a finite propositional signature. A belief set is
// represented by its models; valuation v makes letters[i] true iff bit i of
// v is set.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cdl/models.hpp"
#include "cdl/syntax.hpp"
#include "cdl/world_set.hpp"

namespace cdl::agm {

/// At most 6 letters, so that the 2^n valuations fit in a WorldSet.
constexpr std::size_t kMaxLetters = 6;

struct BeliefState {
  std::vector<std::string> letters;
  WorldSet models;  // over valuation indices

  std::size_t valuation_count() const { return std::size_t{1} << letters.size(); }
  bool consistent() const { return !models.empty(); }
  /// f in the belief set, i.e. every model satisfies f.
  bool believes(const Formula& f) const;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

/// Valuations over `letters` satisfying a propositional formula. Throws
/// LanguageError for modal formulas or letters outside the signature.
WorldSet models_of(const Formula& f, const std::vector<std::string>& letters);

/// Cn(S): the state whose models satisfy every formula of S.
BeliefState consequence_close(const std::vector<Formula>& s, const std::vector<std::string>& letters);
/// T + psi.
BeliefState expand(const BeliefState& t, const Formula& psi);

enum class Strategy { two_layer, hamming };
std::string_view strategy_name(Strategy s);
/// Throws Error for an unknown name.
Strategy parse_strategy(std::string_view name);

struct GroveSystem {
  std::vector<std::string> letters;
  /// World v is valuation v.
  PlausibilityModel model;
  std::vector<int> ranks;
};

/// Grove system whose most plausible worlds are the models of t. Throws
/// ModelError when t is inconsistent.
GroveSystem grove_system_for(const BeliefState& t, Strategy strategy);
/// The belief set of the minimal worlds.
BeliefState belief_set_of(const GroveSystem& g);
/// Models of the revised state: the most plausible psi-worlds.
BeliefState revise_via_model(const GroveSystem& g, const Formula& psi);

using Revision = std::function<BeliefState(const BeliefState&, const Formula&)>;
/// T * psi via grove_system_for(T); an inconsistent T is revised with the
/// Grove system of Cn(empty).
Revision grove_revision(Strategy strategy);
/// Expansion posing as revision; violates Consistency.
Revision expansion_revision();

/// A short DNF for a set of valuations: "false", "true", or a disjunction of
/// conjunctions of literals. Deterministic for a given set.
std::string canonical_dnf(WorldSet models, const std::vector<std::string>& letters);
/// The same set as a disjunction of full minterms.
Formula minterm_formula(WorldSet models, const std::vector<std::string>& letters);
/// Parsed form of canonical_dnf.
Formula canonical_formula(WorldSet models, const std::vector<std::string>& letters);

struct PostulateResult {
  std::string name;
  bool pass = true;
  std::string witness;  // empty when pass
};

/// Closure, Success, Inclusion, Vacuity, Consistency, Extensionality,
/// Superexpansion, Subexpansion, checked over every belief state and every
/// pair of valuation sets psi, phi (one canonical formula each; Extensionality
/// also compares with the minterm form).
std::vector<PostulateResult> check_postulates(const Revision& revise, const std::vector<std::string>& letters);

}  // namespace cdl::agm
