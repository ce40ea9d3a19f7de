// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/problem.hh"

#include <string>

namespace feq::test {

/// Term with a, b, c, x, y, z as variables; other identifiers are constants.
inline Poly P(std::string_view s)
{
	return parse_term(s, {"a", "b", "c", "x", "y", "z"});
}

inline Problem fixture(const std::string &name)
{
	return load_problem(std::string(FEQ_PROBLEMS_DIR) + "/" + name + ".feq");
}

} // namespace feq::test
