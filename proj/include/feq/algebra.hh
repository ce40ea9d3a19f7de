// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/poly.hh"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace feq {

using AtomPredicate = std::function<bool(const Atom &)>;

/// Replaces atom a by value; Var atoms are replaced everywhere (also
/// inside f arguments), other atoms only at the top level.
Poly replace_atom(const Poly &p, const Atom &a, const Poly &value);

/// If u occurs in eq only as k·u with a rational k ≠ 0 (and nowhere inside
/// an f argument), returns the value u must take for eq = 0.
std::optional<Poly> solve_linear_for(const Poly &eq, const Atom &u);

/// Result of Gaussian elimination over unknown atoms.
struct Elimination {
	/// Fully resolved: no value mentions an eliminated unknown.
	std::vector<std::pair<Atom, Poly>> assignment;
	/// Equations that had no linearly occurring unknown, after substitution.
	std::vector<Poly> remaining;
	/// Some equation reduced to a nonzero rational.
	bool inconsistent = false;

	Poly apply(const Poly &p) const;
	const Poly *value_of(const Atom &a) const;
};

/// Repeatedly picks the first equation (in order) with an unknown atom that
/// occurs linearly with a rational coefficient and eliminates it; unknowns
/// are tried in atom order. Zero equations are dropped.
Elimination eliminate_linear(std::vector<Poly> eqs, const AtomPredicate &is_unknown);

/// Dense univariate polynomial, coefficient of v^i at index i.
using UniPoly = std::vector<Q>;

/// Coefficients of p as a polynomial in v; nullopt if p has any other atom.
std::optional<UniPoly> as_univariate(const Poly &p, const Atom &v);

/// Number of distinct real roots (Sturm sequence).
unsigned count_real_roots(UniPoly p);

/// Distinct rational roots in increasing order. Sets `exhaustive` to false
/// when real roots remain that are irrational.
std::vector<Q> rational_roots(const UniPoly &p, bool &exhaustive);

} // namespace feq
