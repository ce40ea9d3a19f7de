// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/instantiation.hh"
#include "feq/lemmas.hh"
#include "feq/portfolio.hh"
#include "feq/problem.hh"
#include "feq/synthesis.hh"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace feq {

/// Plain is the bare obligation, sent only when neither TU nor PI runs.
enum class Stage { Plain, TU, PI, LemmaLoop, None };

const char *to_string(Stage s);

struct PipelineOptions {
	bool tu = true;
	bool pi = true;
	bool lemmas = true;
	/// Keep the quantified spec next to the PI instances (off is -EQ).
	bool keep_eq = true;
	/// Add FI instances to the PI stage; runs the PI stage even with pi off.
	bool fi = false;
	TermLevel terms = TermLevel::Minimal;
	double total_budget = 3600;
	double per_solver = 120;
	double lemma_timeout = 5;
	/// Unset means escalate through every template.
	std::optional<TemplateKind> templ;
	/// Solver processes per obligation.
	size_t parallelism = 4;
	/// Run directory; every obligation is archived below it.
	std::optional<std::filesystem::path> archive;
	LemmaOptions lemma;

	/// The default configuration with tu, pi and lemmas all off.
	static PipelineOptions base();
};

struct StageRun {
	Stage stage;
	Status status;
	double wall_s;
	size_t assertions;
};

struct SolveReport {
	std::string problem;
	std::string template_used;
	/// SolvedForm::describe() of the candidate, empty if synthesis failed.
	std::string candidate;
	Status verdict = Status::Unknown;
	Stage closed_by = Stage::None;
	std::vector<Formula> lemmas;
	std::vector<StageRun> stages;
	double wall_s = 0;
	std::string winning_solver;
	/// Archive of the obligation that decided the verdict.
	std::string artifact_dir;
	/// Set when a solver found a model of spec ∧ ¬candidate.
	bool candidate_incomplete = false;
	/// Synthesis or runtime failure; empty on a normal run.
	std::string error;
	bool synthesis_failed = false;

	bool solved() const { return verdict == Status::Unsat; }
	/// 0 solved, 2 candidate without proof, 3 synthesis failed.
	int exit_code() const;
};

/// Synthesis, obligation, then the enabled stages in order TU, PI (+FI),
/// lemma loop; stops at the first definitive verdict. Synthesis errors are
/// reported in the result, solver errors (no_solvers_available,
/// soundness_alarm) propagate.
SolveReport solve_problem(const Problem &problem, const PipelineOptions &opts,
                          const std::vector<SolverConfig> &configs);

/// Loads the solver config, probes it, and solves. Parse errors propagate.
SolveReport solve_file(const std::string &path, const PipelineOptions &opts);

/// Every .feq file of dir (sorted by name), up to `jobs` at a time. A
/// failing problem becomes a row with `error` set.
std::vector<SolveReport> run_benchmark(const std::filesystem::path &dir, const PipelineOptions &opts,
                                       const std::vector<SolverConfig> &configs, size_t jobs = 1);

/// problem,template,candidate,stage,verdict,lemmas_count,wall_s,winning_solver
void write_csv(std::ostream &out, const std::vector<SolveReport> &rows);
/// Fixed-width table with a solved count at the bottom.
void write_table(std::ostream &out, const std::vector<SolveReport> &rows);

/// Reruns an archived obligation: the directory holding result.json, or a
/// report file written by the pipeline. Uses the winning solver when there
/// was one, otherwise every recorded solver.
/// Throws archive_corrupt, or no_solvers_available if the solvers are gone.
SolverVerdict replay(const std::filesystem::path &archive);

} // namespace feq
