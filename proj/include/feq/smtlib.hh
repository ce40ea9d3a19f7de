// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/obligation.hh"

#include <string>
#include <vector>

namespace feq {

struct EmitOptions {
	/// Written as a leading comment when nonempty.
	std::string comment;
};

/// Renders an obligation as an SMT-LIB 2.6 script in logic UFNRA: f is
/// declared Real→Real, every constant gets a declare-const, one assert per
/// conjunct, then check-sat. Output is a pure function of the obligation.
///
/// Throws non_ground_existential if any assertion contains an existential.
std::string emit_smtlib(const ProofObligation &ob, const EmitOptions &opts = {});

/// Same layout for an arbitrary list of assertions.
std::string emit_script(const std::vector<Formula> &assertions, const EmitOptions &opts = {});

std::string smt_term(const Poly &p);
std::string smt_formula(const Formula &f);

} // namespace feq
