// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/poly.hh"

#include <memory>
#include <string>
#include <vector>

namespace feq {

/// Comparison of a polynomial against zero.
enum class Rel { Eq, Ne, Le, Lt };

const char *to_string(Rel r);

/// Immutable first-order formula over polynomial atoms `p ⋈ 0`.
class Formula {
public:
	enum class Kind { True, False, Cmp, Not, And, Or, Implies, Forall, Exists };

	static Formula top();
	static Formula bottom();
	/// lhs ⋈ rhs, stored as (lhs - rhs) ⋈ 0.
	static Formula cmp(const Poly &lhs, Rel rel, const Poly &rhs = Poly());
	static Formula eq(const Poly &lhs, const Poly &rhs = Poly()) { return cmp(lhs, Rel::Eq, rhs); }
	static Formula ne(const Poly &lhs, const Poly &rhs = Poly()) { return cmp(lhs, Rel::Ne, rhs); }
	static Formula negate(Formula f);
	static Formula conj(std::vector<Formula> fs);
	static Formula disj(std::vector<Formula> fs);
	static Formula implies(Formula a, Formula b);
	static Formula forall(std::vector<std::string> vars, Formula body);
	static Formula exists(std::vector<std::string> vars, Formula body);

	Kind kind() const;
	bool is_true() const { return kind() == Kind::True; }
	bool is_false() const { return kind() == Kind::False; }
	bool is_quantifier() const { return kind() == Kind::Forall || kind() == Kind::Exists; }

	/// Cmp only.
	const Poly &poly() const;
	Rel rel() const;
	/// Not/And/Or/Implies operands; quantifiers have their body as child 0.
	const std::vector<Formula> &children() const;
	const Formula &body() const;
	/// Bound variables of a quantifier.
	const std::vector<std::string> &vars() const;

	/// Structural equality (no normalization beyond the Poly atoms).
	friend bool operator==(const Formula &a, const Formula &b);

private:
	struct Node;
	explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
	std::shared_ptr<const Node> node_;
};

/// Folds rational ground atoms, flattens and prunes And/Or, drops unused
/// bound variables and empty quantifier prefixes.
Formula simplify(const Formula &f);

/// Capture-avoiding simultaneous substitution of free variables.
Formula substitute(const Formula &f, const Subst &sigma);

/// Applies fn to every polynomial of every comparison atom.
Formula map_polys(const Formula &f, const std::function<Poly(const Poly &)> &fn);

/// Visits every comparison polynomial.
void for_each_poly(const Formula &f, const std::function<void(const Poly &)> &fn);

/// Free Var symbols.
std::set<std::string> free_variables(const Formula &f);
std::set<std::string> constants(const Formula &f);
bool is_ground(const Formula &f);
bool has_quantifier(const Formula &f);
bool has_existential(const Formula &f);

/// Instantiation of ∀x⃗.ψ: σ maps some of x⃗; the remaining variables and
/// every variable introduced by σ's images are universally quantified in
/// the result, which is simplified. Formulas that are not universally
/// quantified are substituted as-is.
Formula instantiate(const Formula &f, const Subst &sigma);

/// Distinct arguments of f inside the quantified formula that mention a
/// bound variable outside of any nested application, in traversal order.
/// Arguments of nested applications are collected too.
std::vector<Poly> collect_f_arguments(const Formula &f);

/// Key identifying a formula up to renaming of bound variables and
/// scaling of comparison atoms by positive (Le/Lt) or any nonzero (Eq/Ne)
/// rationals. Used for deduplication.
std::string canonical_key(const Formula &f);

/// Splits nested conjunctions into their conjuncts.
std::vector<Formula> conjuncts(const Formula &f);

/// Node count used for prioritisation.
unsigned formula_size(const Formula &f);

/// Human-readable form that parse_problem accepts back.
std::string to_string(const Formula &f);

} // namespace feq
