#pragma once

// Translations between CDL and JCDL derivations, elimination of troublesome
// necessitations, and internalization of JCDL theorems as logical terms.

#include <cstddef>
#include <vector>

#include "cdl/proofs.hpp"
#include "cdl/syntax.hpp"

namespace cdl::transforms {

using proofs::Derivation;

/// Forgetful projection: {t}:[psi] phi becomes B[psi] phi, recursively.
Formula forget_formula(const Formula& f);
/// Trivial realization: B[psi] phi becomes Bd[psi] phi, recursively.
Formula realize_formula(const Formula& f);

struct TranslationReport {
  Derivation input;
  Derivation output;
  /// line_map[i] is the 1-based output line that carries input line i + 1.
  std::vector<std::size_t> line_map;
};

/// JCDL derivation to a CDL derivation of the projected lines. Throws
/// DerivationError when the input does not check.
TranslationReport project(const Derivation& d);
/// CDL derivation to a JCDL derivation of the realized lines.
TranslationReport realize(const Derivation& d);

Derivation forget_derivation(const Derivation& d);
Derivation realize_derivation(const Derivation& d);

/// A JCDL derivation of the same final line without troublesome
/// necessitations, containing every line formula of the input.
Derivation eliminate_troublesome(const Derivation& d);

struct Internalized {
  Term term;
  Derivation derivation;
};

/// For a closed JCDL derivation of phi, a logical term t and a derivation of
/// {t}:[cond] phi without troublesome necessitations.
Internalized internalize(const Derivation& d, const Formula& cond);

}  // namespace cdl::transforms
