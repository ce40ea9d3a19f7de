// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/verdict.hh"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace feq {

/// One external solver invocation.
///
/// The command is split on whitespace. Placeholders: {file} (the script,
/// exactly once), {timeout} (seconds, rounded up), {timeout_ms} and
/// {confdir} (directory of the config file it was loaded from).
struct SolverConfig {
	std::string id;
	std::string command;
	double timeout = 120;
	bool enabled = true;
	/// Address-space cap for the process, when set.
	std::optional<unsigned> memory_mb;
	/// Also used for lemma and redundancy proofs.
	bool lemmas = true;
	/// Command printing a version line; empty for none.
	std::string version_command;
	std::string confdir;
};

/// Config path: $FUNC_EQ_SOLVER_CONFIG, else the bundled config/solvers.ini.
std::string default_config_path();

/// Reads an INI file: one section per solver (the section name is the id)
/// with keys cmd, timeout, enabled and optionally memory_mb, lemmas,
/// version.
/// Throws feq::error on malformed entries.
std::vector<SolverConfig> load_solver_configs(const std::string &path);

/// argv for a config with placeholders filled in.
std::vector<std::string> expand_command(const SolverConfig &c, const std::string &file, double timeout);

using Clock = std::chrono::steady_clock;

struct PortfolioOptions {
	/// Concurrent solver processes.
	size_t parallelism = 4;
	/// Replaces every config's own timeout when set.
	std::optional<double> timeout;
	/// No process runs past this point.
	std::optional<Clock::time_point> deadline;
	/// Keep artifacts under <archive_dir>/<obligation_id>/.
	std::optional<std::filesystem::path> archive_dir;
	std::string obligation_id = "obligation";
};

struct PortfolioResult {
	/// First Sat/Unsat to arrive; otherwise Unknown, or Timeout when every
	/// run timed out.
	SolverVerdict verdict;
	/// One entry per enabled config, in config order.
	std::vector<SolverVerdict> all_runs;
	/// Directory holding the artifacts when archived; empty otherwise.
	std::string artifact_dir;
};

/// Runs the enabled configs on `script`, at most opts.parallelism at a
/// time. The first definitive answer cancels the other runs (SIGTERM, then
/// SIGKILL after a 2 s grace). Runs that never started or were cancelled
/// are reported as Timeout with cancelled set.
///
/// Throws no_solvers_available when no command could be started, and
/// soundness_alarm when one run says sat and another unsat.
PortfolioResult run_portfolio(const std::string &script, const std::vector<SolverConfig> &configs,
                              const PortfolioOptions &opts = {});

struct ProbeEntry {
	std::string id;
	bool ok = false;
	/// "ok", "not found", "noncompliant (sat)", or the verdict seen.
	std::string status;
	std::string version;
};

/// Runs each config on a trivially unsatisfiable script with a 5 s limit
/// and disables every config that does not answer unsat. Results are cached
/// per command for the lifetime of the process.
std::vector<ProbeEntry> probe_solvers(std::vector<SolverConfig> &configs);

/// Every verdict ever recorded by run_portfolio, keyed by script hash.
struct SoundnessMonitor {
	/// Number of scripts seen with both sat and unsat answers.
	static size_t conflicts();
	static size_t scripts_seen();
	static void record(size_t script_hash, Status s);
};

} // namespace feq
