// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/formula.hh"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace feq {

/// A functional-equation problem for an unknown f : R → R.
struct Problem {
	std::string name;
	/// Top-level sentences; their conjunction is the specification.
	std::vector<Formula> axioms;
	/// Uninterpreted constants named in the problem (identifiers that are
	/// not bound by a quantifier).
	std::set<std::string> declared_constants;
	std::optional<std::string> source_note;

	Formula spec() const;
};

/// Parses the problem language:
///
///     # comment
///     find f;
///     forall x y. f(x + y) = x*f(y) + y*f(x);
///     where k > 0;
///
/// Terms use + - * ^n, division by nonzero constants, decimal and integer
/// literals, parentheses and applications of f. Formulas combine
/// comparisons (= != < <= > >=) with not/and/or/-> and forall.
///
/// Throws syntax_error (with line and column) or unsupported_feature.
Problem parse_problem(std::string_view text, std::string name = "problem");

/// Reads and parses a .feq file; the problem is named after the file stem.
Problem load_problem(const std::string &path);

/// Parses a single term; free identifiers become Var atoms when listed in
/// `vars` and Const atoms otherwise.
Poly parse_term(std::string_view text, const std::set<std::string> &vars = {"x"});

/// Renders a problem so that parse_problem reads it back.
std::string pretty_print(const Problem &p);

} // namespace feq
