// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/rational.hh"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace feq {

class Poly;

/// Ring generator of a Poly.
///
/// Var atoms are variables that may be bound by a quantifier (problem
/// variables, template parameters, the fresh variable of a unification
/// instance). Const atoms are uninterpreted real constants such as skolems;
/// they are never bound. FApp atoms are applications f(p) of the unknown
/// function to a canonical Poly and may nest to any depth.
///
/// Order: Var < Const < FApp; named atoms by name; applications by their
/// argument Polys.
class Atom {
public:
	enum class Kind : unsigned char { Var, Const, FApp };

	static Atom var(std::string name);
	static Atom constant(std::string name);
	static Atom fapp(Poly arg);

	Kind kind() const { return kind_; }
	bool is_var() const { return kind_ == Kind::Var; }
	bool is_const() const { return kind_ == Kind::Const; }
	bool is_fapp() const { return kind_ == Kind::FApp; }

	/// Symbol name; empty for applications.
	const std::string &name() const { return name_; }
	/// Argument of an application. Only valid for FApp atoms.
	const Poly &arg() const { return *arg_; }

	friend std::strong_ordering compare(const Atom &a, const Atom &b);
	friend bool operator==(const Atom &a, const Atom &b)
	{ return compare(a, b) == 0; }
	friend bool operator<(const Atom &a, const Atom &b)
	{ return compare(a, b) < 0; }

private:
	Atom(Kind k, std::string name, std::shared_ptr<const Poly> arg);

	Kind kind_;
	std::string name_;
	std::shared_ptr<const Poly> arg_;
};

/// Power product: atoms in increasing order, each with exponent > 0.
using Powers = std::vector<std::pair<Atom, unsigned>>;

/// Graded lexicographic monomial order; earlier atoms weigh more.
std::strong_ordering compare_powers(const Powers &a, const Powers &b);

unsigned total_degree(const Powers &p);

struct Monomial {
	Q coeff;
	Powers powers;
};

/// Canonical multivariate polynomial over Q.
///
/// Monomials are kept in strictly decreasing monomial order with nonzero
/// coefficients, so two Polys are semantically equal iff they compare
/// equal structurally. The zero polynomial has no monomials.
class Poly {
public:
	Poly() = default;
	Poly(const Q &c);
	Poly(long c) : Poly(Q(c)) {}

	static Poly var(const std::string &name);
	static Poly constant(const std::string &name);
	static Poly fapp(const Poly &arg);
	static Poly atom(const Atom &a, unsigned exp = 1);
	/// Sums up arbitrary monomials into canonical form.
	static Poly from_monomials(std::vector<Monomial> ms);

	const std::vector<Monomial> &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	/// True for rational constants, including zero.
	bool is_constant() const;
	std::optional<Q> constant_value() const;
	/// Coefficient of the greatest monomial; zero for the zero polynomial.
	Q leading_coefficient() const;
	unsigned degree() const;

	Poly operator-() const;
	Poly &operator+=(const Poly &o);
	Poly &operator-=(const Poly &o);
	Poly &operator*=(const Poly &o);
	friend Poly operator+(Poly a, const Poly &b) { return a += b; }
	friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
	friend Poly operator*(const Poly &a, const Poly &b);
	Poly pow(unsigned n) const;
	Poly scaled(const Q &k) const;

	friend std::strong_ordering compare(const Poly &a, const Poly &b);
	friend bool operator==(const Poly &a, const Poly &b)
	{ return compare(a, b) == 0; }
	friend bool operator<(const Poly &a, const Poly &b)
	{ return compare(a, b) < 0; }

private:
	std::vector<Monomial> terms_;
};

/// Symbol → polynomial; applied to Var atoms only.
using Subst = std::map<std::string, Poly>;

/// Simultaneous substitution of variables, recursively inside f arguments.
Poly substitute(const Poly &p, const Subst &sigma);

/// Rebuilds p with every atom replaced by fn(atom); atoms not touched by
/// fn must be returned as Poly::atom(a). FApp arguments are not visited.
Poly map_atoms(const Poly &p, const std::function<Poly(const Atom &)> &fn);

/// Replaces every application f(q), innermost first, by fn(q') where q' is
/// the already rewritten argument. The result of fn is not rewritten again.
Poly replace_fapps(const Poly &p, const std::function<Poly(const Poly &)> &fn);

using FunctionInterp = std::function<Q(const Q &)>;

/// Evaluates p; point must cover every Var and Const symbol in p.
/// Throws std::out_of_range for a missing symbol.
Q evaluate(const Poly &p, const std::map<std::string, Q> &point,
           const FunctionInterp &f);

/// Exponent vector (aligned with the sorted variable list) → coefficient.
using CoefficientMap = std::map<std::vector<unsigned>, Poly>;

/// Views p as a polynomial in `vars` with coefficients free of them.
/// Throws vars_under_f if one of the vars occurs inside an f argument.
CoefficientMap coefficients_wrt(const Poly &p, const std::set<std::string> &vars);

/// Inverse of coefficients_wrt.
Poly assemble(const CoefficientMap &coeffs, const std::set<std::string> &vars);

/// Collects atoms occurring at the top level of p (not inside arguments).
std::set<Atom> top_atoms(const Poly &p);
/// Names of Var atoms anywhere in p, including inside f arguments.
std::set<std::string> variables(const Poly &p);
/// Names of Const atoms anywhere in p.
std::set<std::string> constants(const Poly &p);
bool contains_fapp(const Poly &p);
/// True when p mentions `name` as a Var anywhere.
bool mentions_var(const Poly &p, const std::string &name);
/// True when p has no Var atoms anywhere.
bool is_ground(const Poly &p);

/// Degree of p in the atom a, counting top-level occurrences only.
unsigned degree_in(const Poly &p, const Atom &a);

/// Exact division; nullopt when d does not divide p.
std::optional<Poly> divide_exact(const Poly &p, const Poly &d);

/// Substitutes `value` for every top-level occurrence of atom a.
Poly substitute_atom(const Poly &p, const Atom &a, const Poly &value);

/// p divided by its leading coefficient (zero stays zero).
Poly monic(const Poly &p);

/// Number of nodes of the expression tree a printed form would have.
unsigned term_size(const Poly &p);

std::string to_string(const Poly &p);
std::string to_string(const Atom &a);

} // namespace feq
