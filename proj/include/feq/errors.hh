// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace feq {

struct error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

/// Malformed problem text; carries a 1-based position.
struct syntax_error : error {
	int line, column;
	syntax_error(const std::string &msg, int line, int column);
};

struct unsupported_feature : error {
	using error::error;
};

/// A coefficient view was requested over variables that still occur
/// inside an f-application.
struct vars_under_f : error {
	using error::error;
};

struct system_too_hard : error {
	using error::error;
};

struct unsupported_side_condition : error {
	using error::error;
};

struct non_ground_existential : error {
	using error::error;
};

struct no_solvers_available : error {
	using error::error;
};

struct archive_corrupt : error {
	using error::error;
};

/// Two solvers disagreed on the same script.
struct soundness_alarm : error {
	using error::error;
};

} // namespace feq
