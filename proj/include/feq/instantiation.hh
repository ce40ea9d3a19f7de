// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/formula.hh"
#include "feq/obligation.hh"

#include <cstddef>
#include <string>
#include <vector>

namespace feq {

enum class TermLevel { Minimal, Extended };

/// Ground terms used for partial instantiation.
struct SmallTermSet {
	TermLevel level = TermLevel::Minimal;
	std::vector<Poly> terms;
};

/// Minimal: 0, 1 and the skolems of ob. Extended adds the problem constants
/// and the rational coefficients (in absolute value) occurring in the spec.
SmallTermSet small_terms(const ProofObligation &ob, TermLevel level);

enum class InstOrigin { PartialInst, TheoryUnif, FullInstFI };

const char *to_string(InstOrigin o);

/// formulas[i] == instantiate(sources[i], witnesses[i]).
struct InstantiationBatch {
	InstOrigin origin = InstOrigin::PartialInst;
	std::vector<Formula> formulas;
	std::vector<Formula> sources;
	std::vector<Subst> witnesses;
	/// FI only: the budget cut the enumeration short.
	bool truncated = false;

	size_t size() const { return formulas.size(); }
	/// Appends unless trivially true or a duplicate up to canonical_key.
	bool add(const Formula &source, const Subst &witness);
};

/// Instantiates one variable at a time with each term (variables in
/// quantifier order, terms in set order). With keep_original, φ itself
/// comes first (empty witness).
InstantiationBatch partial_instantiations(const Formula &phi, const SmallTermSet &s, bool keep_original);

/// Terms S ∪ {u+v, u-v, u·v : u, v ∈ S} ∪ {f(u) : u ∈ S}, in that order and
/// without duplicates.
std::vector<Poly> fi_terms(const SmallTermSet &s);

/// Substitutes every nonempty set of at most three variables (by size, then
/// quantifier order) with every tuple of fi_terms, stopping after `budget`
/// formulas.
InstantiationBatch full_instantiations_fi(const Formula &phi, const SmallTermSet &s, size_t budget = 2000);

/// Maximum number of f-arguments considered by theory unification.
inline constexpr size_t tu_max_arguments = 6;

/// Partition of the f-arguments A into those set equal to a fresh variable
/// and those set to 0, with the substitution solving it.
struct TuSolution {
	std::vector<Poly> to_z, to_zero;
	Subst sigma;
};

/// Solves every partition of collect_f_arguments(phi), with the arguments
/// sorted in decreasing Poly order. Partitions are visited by bit mask
/// (bit i set puts argument i with the fresh variable),
/// masks 1 .. 2^n-1 first and the all-zero partition last. Partitions whose
/// solution is not unique are skipped.
std::vector<TuSolution> theory_unification_solutions(const Formula &phi, std::string *fresh = nullptr);

/// Instances for theory_unification_solutions, minus trivial ones and those
/// equal to phi up to renaming.
InstantiationBatch theory_unification_instantiations(const Formula &phi);

enum class EnrichStage { TU, TU_PI, TU_PI_FI };

struct InstantiationOptions {
	bool tu = true;
	TermLevel level = TermLevel::Minimal;
	/// Added to the small term set of the PI stage.
	std::vector<Poly> extra_terms;
	/// Keep the quantified spec in the emitted script once PI runs.
	bool keep_original = true;
	size_t fi_budget = 2000;
};

/// Adds the instances of `stage` for every universally quantified spec
/// axiom. Instances already present are not added again.
ProofObligation enrich_obligation(const ProofObligation &ob, EnrichStage stage,
                                  const InstantiationOptions &opts = {});

} // namespace feq
