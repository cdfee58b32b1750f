#pragma once

// Random generators and small helpers shared by the unit tests and the
// acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cdl/models.hpp"
#include "cdl/proofs.hpp"
#include "cdl/syntax.hpp"

namespace cdl::testing {

using Rng = std::mt19937_64;

/// Formula of connective depth at most `depth`. CDL uses B[c]b, JCDL uses
/// t:[c]b with terms of depth at most `term_depth`.
Formula random_formula(Rng& rng, const std::vector<std::string>& letters, int depth, Language lang,
                       int term_depth = 1);
Formula random_propositional(Rng& rng, const std::vector<std::string>& letters, int depth);
/// Term of depth at most `depth`; certificates carry formulas of depth at most 1.
Term random_term(Rng& rng, const std::vector<std::string>& letters, int depth);

/// Random metavariable assignment for a schema.
proofs::Substitution random_substitution(Rng& rng, proofs::Schema s, const std::vector<std::string>& letters,
                                         int formula_depth, int term_depth);

/// A checking CDL derivation mixing axioms, tautologies, necessitation and
/// classical steps.
proofs::Derivation random_cdl_derivation(Rng& rng, const std::vector<std::string>& letters, int steps);

/// A checking closed JCDL derivation with exactly `troublesome` troublesome
/// necessitations.
proofs::Derivation random_troublesome_derivation(Rng& rng, const std::vector<std::string>& letters,
                                                 int troublesome);

/// Model over worlds "w1".."wn" with random components, ranks and valuation.
PlausibilityModel random_model(Rng& rng, std::size_t worlds, const std::vector<std::string>& letters,
                               bool connected);
/// Fitting model over a random base with a few admissibility facts for the
/// support pairs of `target`.
FittingModel random_fitting_model(Rng& rng, std::size_t worlds, const std::vector<std::string>& letters,
                                  const Formula& target);

/// Path of a file under tests/data.
std::string data_path(const std::string& name);

}  // namespace cdl::testing
