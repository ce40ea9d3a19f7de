// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace feq {

enum class Status { Sat, Unsat, Unknown, Timeout, Crash };

const char *to_string(Status s);
Status status_from_string(std::string_view s);

struct SolverVerdict {
	Status status = Status::Unknown;
	std::string solver_id;
	double wall_time = 0;
	/// Stopped because another solver answered first.
	bool cancelled = false;
	/// The command could not be started at all.
	bool not_found = false;

	bool definitive() const { return status == Status::Sat || status == Status::Unsat; }
};

/// How a solver process ended.
struct ExitInfo {
	int code = 0;
	bool signaled = false;
	bool timed_out = false;
};

/// The first output line that is exactly sat, unsat or unknown decides.
/// Without one: a deadline kill is Timeout, an abnormal exit is Crash and a
/// clean exit is Unknown.
SolverVerdict parse_solver_output(std::string_view out, std::string_view err, const ExitInfo &exit);

} // namespace feq
