// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/formula.hh"
#include "feq/obligation.hh"
#include "feq/problem.hh"

#include <optional>
#include <string>
#include <vector>

namespace feq {

enum class TemplateKind { Constant, Linear, QuadMonomial, Quadratic };

const char *to_string(TemplateKind k);
/// Accepts constant, linear, quadmonomial (or monomial), quadratic.
std::optional<TemplateKind> template_from_string(std::string_view s);

/// a·x² + b·x + c with some coefficients fixed to zero.
struct Template {
	TemplateKind kind = TemplateKind::Quadratic;
	/// Parameter names of the x², x and constant coefficients; unset when
	/// the coefficient is fixed to zero.
	std::optional<std::string> a, b, c;

	/// Parameters in order a, b, c.
	std::vector<std::string> params() const;
	/// The template polynomial at `arg`.
	Poly at(const Poly &arg) const;
};

/// Parameters are named a, b, c unless those clash with `avoid`, in which
/// case a numeric suffix is appended.
Template make_template(TemplateKind kind, const std::set<std::string> &avoid = {});

struct TemplateApplication {
	/// One p for every equation conjunct p = 0 under the quantifier prefix.
	std::vector<Poly> residuals;
	/// Union of the prefixes of all axioms.
	std::set<std::string> quantified_vars;
	/// Every non-equation conjunct after substitution, re-quantified.
	Formula side = Formula::top();
};

TemplateApplication apply_template(const std::vector<Formula> &spec, const Template &t);

/// Coefficients of the residuals viewed as polynomials in the quantified
/// variables. Zero entries and scalar multiples of earlier entries are
/// dropped.
std::vector<Poly> extract_coefficient_system(const std::vector<Poly> &residuals,
                                             const std::set<std::string> &quantified_vars);

struct ParameterSolution {
	/// Fixed parameters → value in the free ones; triangular and fully
	/// resolved (no value mentions an assigned parameter).
	Subst assignment;
	/// Γ, ground over the parameters.
	Formula residual_constraints = Formula::top();

	std::vector<std::string> free_params(const std::vector<std::string> &params) const;
};

/// Complete branch list for a system over `params`. Throws system_too_hard
/// when a branch needs a rule the solver does not have, or branching goes
/// deeper than depth_cap.
std::vector<ParameterSolution> solve_parameter_system(const std::vector<Poly> &system,
                                                      const std::vector<std::string> &params,
                                                      int depth_cap = 8);

/// One disjunct Γ ∧ ∀x. f(x) = definition.
struct SolvedBranch {
	Formula gamma = Formula::top();
	/// Polynomial in the variable x and the atoms f(0), f(1), f(-1).
	Poly definition;
};

struct SolvedForm {
	std::vector<SolvedBranch> branches;

	/// True when the only branch has Γ = ⊥ (the template has no solution).
	bool is_empty() const;
	/// Branch list as "Γ → f(x) = t" lines.
	std::string describe() const;
};

/// Replaces the free parameters by their values in terms of f(0), f(1),
/// f(-1). Throws system_too_hard if a parameter cannot be eliminated.
SolvedBranch lagrange_eliminate(const ParameterSolution &sol, const Template &t);

/// Substitutes each branch definition for f in the spec and checks that
/// what remains holds given Γ and the definition's values at 0, 1, -1.
bool verify_candidate(const std::vector<Formula> &spec, const SolvedForm &sf);

/// Spec plus one skolemized ¬Γᵢ ∨ f(cᵢ) ≠ tᵢ(cᵢ) per branch. Skolems are
/// named c (single branch) or c1, c2, ..., avoiding every symbol of the
/// spec and `constants`.
ProofObligation build_obligation(const std::vector<Formula> &spec, const SolvedForm &sf,
                                 const std::set<std::string> &constants = {});

struct TemplateAttempt {
	TemplateKind kind;
	bool solved = false;
	bool verified = false;
	std::string note;
	SolvedForm form;
};

struct SynthesisResult {
	/// Smallest template that reproduces the chosen candidate.
	TemplateKind used = TemplateKind::Quadratic;
	SolvedForm form;
	std::vector<TemplateAttempt> attempts;
};

/// Runs every template from Constant to Quadratic (or just `only`). The candidate is
/// the solution set of the largest template that solves and verifies.
/// Throws system_too_hard or unsupported_side_condition when no template
/// succeeds.
SynthesisResult synthesize(const Problem &problem, std::optional<TemplateKind> only = std::nullopt);

} // namespace feq
