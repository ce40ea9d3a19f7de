// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/formula.hh"

#include <set>
#include <string>
#include <vector>

namespace feq {

/// Φ_spec ∧ ¬Φ_sol with the negation skolemized, plus everything added
/// to help a solver refute it.
struct ProofObligation {
	/// Specification axioms, passed through unchanged.
	std::vector<Formula> spec;
	/// When false the quantified specification axioms are left out of the
	/// emitted script (the instantiations stay).
	bool emit_spec = true;
	std::set<std::string> skolems;
	/// Constants of the problem itself; declared alongside the skolems.
	std::set<std::string> constants;
	std::vector<Formula> negation_constraints;
	std::vector<Formula> instantiations;
	std::vector<Formula> lemmas;

	/// Every assertion in emission order: spec (if emitted), instantiations,
	/// lemmas, negation constraints.
	std::vector<Formula> assertions() const;
};

} // namespace feq
