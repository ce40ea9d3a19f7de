// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solve, bench, probe, replay.

#include "feq/errors.hh"
#include "feq/pipeline.hh"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>

using namespace feq;

namespace {

struct Flags {
	bool no_tu = false, no_pi = false, no_lemmas = false, no_eq = false, fi = false;
	std::string terms = "minimal";
	std::string templ = "auto";
	double budget = 3600, timeout = 120, lemma_timeout = 5;
	size_t jobs = 1, parallel = 4;
	std::string archive, config;

	void attach(CLI::App *app)
	{
		app->add_flag("--no-tu", no_tu, "skip theory-unification instances");
		app->add_flag("--no-pi", no_pi, "skip partial instantiation");
		app->add_flag("--no-lemmas", no_lemmas, "skip the lemma loop");
		app->add_flag("--no-eq", no_eq, "drop the quantified spec once instances are added");
		app->add_flag("--fi", fi, "add full instantiations over the extended term universe");
		app->add_option("--terms", terms, "small term set")->check(CLI::IsMember({"minimal", "extended"}));
		app->add_option("--template", templ, "template family")
			->check(CLI::IsMember({"auto", "const", "lin", "mono", "quad"}));
		app->add_option("--budget", budget, "total seconds per problem")->check(CLI::PositiveNumber);
		app->add_option("--timeout", timeout, "seconds per solver on main obligations")->check(CLI::PositiveNumber);
		app->add_option("--lemma-timeout", lemma_timeout, "seconds per solver on lemmas")->check(CLI::PositiveNumber);
		app->add_option("--jobs", jobs, "problems run concurrently by bench")->check(CLI::PositiveNumber);
		app->add_option("--parallel", parallel, "solver processes per obligation")->check(CLI::PositiveNumber);
		app->add_option("--archive", archive, "keep scripts and solver output under this directory");
		app->add_option("--config", config, "solver configuration file");
	}

	PipelineOptions options() const
	{
		PipelineOptions o;
		o.tu = !no_tu;
		o.pi = !no_pi;
		o.lemmas = !no_lemmas;
		o.keep_eq = !no_eq;
		o.fi = fi;
		o.terms = terms == "extended" ? TermLevel::Extended : TermLevel::Minimal;
		if (templ == "const")
			o.templ = TemplateKind::Constant;
		else if (templ == "lin")
			o.templ = TemplateKind::Linear;
		else if (templ == "mono")
			o.templ = TemplateKind::QuadMonomial;
		else if (templ == "quad")
			o.templ = TemplateKind::Quadratic;
		o.total_budget = budget;
		o.per_solver = std::min(timeout, budget);
		o.lemma_timeout = lemma_timeout;
		o.parallelism = parallel;
		if (!archive.empty())
			o.archive = archive;
		return o;
	}

	std::vector<SolverConfig> solvers() const
	{
		auto cs = load_solver_configs(config.empty() ? default_config_path() : config);
		for (const auto &p : probe_solvers(cs))
			if (!p.ok)
				spdlog::info("solver {} disabled: {}", p.id, p.status);
		return cs;
	}
};

void print_report(const SolveReport &r)
{
	std::cout << "problem:   " << r.problem << "\n";
	if (r.synthesis_failed) {
		std::cout << "synthesis failed: " << r.error << "\n";
		return;
	}
	std::cout << "template:  " << r.template_used << "\n";
	std::cout << "candidate:\n";
	std::istringstream lines(r.candidate);
	for (std::string l; std::getline(lines, l);)
		std::cout << "  " << l << "\n";
	std::cout << "verdict:   " << to_string(r.verdict);
	if (r.solved())
		std::cout << " (candidate complete, stage " << to_string(r.closed_by) << ", " << r.winning_solver << ")";
	std::cout << "\n";
	if (r.candidate_incomplete)
		std::cout << "warning:   a solver found a function outside the candidate; the candidate is incomplete\n";
	for (const auto &s : r.stages)
		std::cout << "  stage " << to_string(s.stage) << ": " << to_string(s.status) << " in " << s.wall_s << "s, "
		          << s.assertions << " assertions\n";
	if (!r.lemmas.empty()) {
		std::cout << "lemmas:\n";
		for (const auto &l : r.lemmas)
			std::cout << "  " << to_string(l) << "\n";
	}
	if (!r.artifact_dir.empty())
		std::cout << "archive:   " << r.artifact_dir << "\n";
	std::cout << "wall:      " << r.wall_s << "s\n";
}

} // namespace

int main(int argc, char **argv)
{
	spdlog::set_default_logger(spdlog::stderr_color_mt("feq"));
	spdlog::set_level(spdlog::level::warn);

	CLI::App app{"Solve functional equations over the reals and prove the answer complete"};
	app.require_subcommand(1);
	// global flags may follow the subcommand
	app.fallthrough();
	int verbosity = 0;
	app.add_flag("-v,--verbose", verbosity, "more log output on stderr (repeatable)");

	Flags flags;
	std::string problem_path, bench_dir, csv_path, replay_path;

	auto *solve = app.add_subcommand("solve", "synthesize a candidate and prove it complete");
	solve->add_option("problem", problem_path, "problem file (.feq)")->required();
	flags.attach(solve);

	auto *bench = app.add_subcommand("bench", "solve every .feq file of a directory");
	bench->add_option("dir", bench_dir, "problem directory")->required();
	bench->add_option("--csv", csv_path, "write the results table as CSV");
	flags.attach(bench);

	auto *probe = app.add_subcommand("probe", "check which configured solvers respond");
	probe->add_option("--config", flags.config, "solver configuration file");

	auto *rep = app.add_subcommand("replay", "rerun an archived obligation");
	rep->add_option("archive", replay_path, "obligation directory or report file")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int code = app.exit(e);
		return code == 0 ? 0 : 4;
	}
	if (verbosity >= 2)
		spdlog::set_level(spdlog::level::debug);
	else if (verbosity == 1)
		spdlog::set_level(spdlog::level::info);

	try {
		if (*solve) {
			Problem p;
			try {
				p = load_problem(problem_path);
			} catch (const syntax_error &e) {
				std::cerr << problem_path << ":" << e.line << ":" << e.column << ": " << e.what() << "\n";
				return 4;
			} catch (const error &e) {
				std::cerr << problem_path << ": " << e.what() << "\n";
				return 4;
			}
			auto report = solve_problem(p, flags.options(), flags.solvers());
			print_report(report);
			return report.exit_code();
		}
		if (*bench) {
			auto rows = run_benchmark(bench_dir, flags.options(), flags.solvers(), flags.jobs);
			write_table(std::cout, rows);
			if (!csv_path.empty()) {
				std::ofstream out(csv_path);
				write_csv(out, rows);
			}
			return 0;
		}
		if (*probe) {
			auto cs = load_solver_configs(flags.config.empty() ? default_config_path() : flags.config);
			bool any = false;
			for (const auto &e : probe_solvers(cs)) {
				std::cout << e.id << ": " << e.status;
				if (!e.version.empty())
					std::cout << " (" << e.version << ")";
				std::cout << "\n";
				any |= e.ok;
			}
			return any ? 0 : 1;
		}
		if (*rep) {
			auto v = replay(replay_path);
			std::cout << to_string(v.status);
			if (!v.solver_id.empty())
				std::cout << " (" << v.solver_id << ", " << v.wall_time << "s)";
			std::cout << "\n";
			return v.status == Status::Unsat ? 0 : 2;
		}
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	}
	return 0;
}
