// SPDX-License-Identifier: Apache-2.0

#include "feq/pipeline.hh"
#include "feq/errors.hh"
#include "feq/smtlib.hh"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <iomanip>
#include <mutex>
#include <ostream>

namespace fs = std::filesystem;

namespace feq {

const char *to_string(Stage s)
{
	switch (s) {
	case Stage::Plain: return "Plain";
	case Stage::TU: return "TU";
	case Stage::PI: return "PI";
	case Stage::LemmaLoop: return "LemmaLoop";
	case Stage::None: return "None";
	}
	return "?";
}

PipelineOptions PipelineOptions::base()
{
	PipelineOptions o;
	o.tu = o.pi = o.lemmas = false;
	return o;
}

int SolveReport::exit_code() const
{
	if (synthesis_failed)
		return 3;
	return solved() ? 0 : 2;
}

namespace {

double since(Clock::time_point t)
{
	return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string lower(std::string s)
{
	std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
	return s;
}

std::string one_line(const std::string &s)
{
	std::string out;
	for (char c : s) {
		if (c == '\n')
			out += " | ";
		else
			out += c;
	}
	return out;
}

nlohmann::json report_json(const SolveReport &r)
{
	nlohmann::json j{{"problem", r.problem},
	                 {"template", r.template_used},
	                 {"candidate", r.candidate},
	                 {"verdict", to_string(r.verdict)},
	                 {"stage", to_string(r.closed_by)},
	                 {"wall_s", r.wall_s},
	                 {"winning_solver", r.winning_solver},
	                 {"artifact_dir", r.artifact_dir},
	                 {"candidate_incomplete", r.candidate_incomplete},
	                 {"error", r.error}};
	j["lemmas"] = nlohmann::json::array();
	for (const auto &l : r.lemmas)
		j["lemmas"].push_back(to_string(l));
	j["stages"] = nlohmann::json::array();
	for (const auto &s : r.stages)
		j["stages"].push_back({{"stage", to_string(s.stage)},
		                       {"status", to_string(s.status)},
		                       {"wall_s", s.wall_s},
		                       {"assertions", s.assertions}});
	return j;
}

} // namespace

SolveReport solve_problem(const Problem &problem, const PipelineOptions &opts,
                          const std::vector<SolverConfig> &configs)
{
	auto t0 = Clock::now();
	auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opts.total_budget));
	SolveReport rep;
	rep.problem = problem.name;
	auto finish = [&]() -> SolveReport {
		rep.wall_s = since(t0);
		if (opts.archive) {
			fs::create_directories(*opts.archive);
			std::ofstream(*opts.archive / (problem.name + ".report.json")) << report_json(rep).dump(2) << "\n";
		}
		spdlog::info("{}: {} (stage {}, {:.2f}s)", rep.problem, to_string(rep.verdict), to_string(rep.closed_by),
		             rep.wall_s);
		return rep;
	};

	SynthesisResult syn;
	try {
		syn = synthesize(problem, opts.templ);
	} catch (const system_too_hard &e) {
		rep.synthesis_failed = true;
		rep.error = e.what();
		return finish();
	} catch (const unsupported_side_condition &e) {
		rep.synthesis_failed = true;
		rep.error = e.what();
		return finish();
	}
	rep.template_used = to_string(syn.used);
	rep.candidate = syn.form.describe();
	spdlog::info("{}: candidate ({}) {}", problem.name, rep.template_used, one_line(rep.candidate));
	ProofObligation ob = build_obligation(problem.axioms, syn.form, problem.declared_constants);

	PortfolioOptions po;
	po.timeout = opts.per_solver;
	po.deadline = deadline;
	po.parallelism = opts.parallelism;
	po.archive_dir = opts.archive;

	auto conclude = [&](Stage st, const SolverVerdict &v, const std::string &dir) {
		rep.verdict = v.status;
		rep.winning_solver = v.solver_id;
		rep.artifact_dir = dir;
		if (v.status == Status::Unsat) {
			rep.closed_by = st;
		} else {
			rep.candidate_incomplete = true;
			spdlog::warn("{}: candidate incomplete, {} found a model of spec and the negated candidate",
			             problem.name, v.solver_id);
		}
	};
	auto run_stage = [&](Stage st, const ProofObligation &o) {
		po.obligation_id = problem.name + "-" + lower(to_string(st));
		auto s0 = Clock::now();
		EmitOptions eo;
		eo.comment = problem.name + ", stage " + to_string(st);
		auto r = run_portfolio(emit_smtlib(o, eo), configs, po);
		rep.stages.push_back({st, r.verdict.status, since(s0), o.assertions().size()});
		spdlog::info("{}: stage {} -> {} in {:.2f}s", problem.name, to_string(st), to_string(r.verdict.status),
		             rep.stages.back().wall_s);
		if (r.verdict.definitive())
			conclude(st, r.verdict, r.artifact_dir);
		return r.verdict.definitive();
	};

	InstantiationOptions io;
	io.tu = opts.tu;
	io.level = opts.terms;
	io.keep_original = opts.keep_eq;
	ProofObligation current = ob;
	if (opts.tu) {
		current = enrich_obligation(ob, EnrichStage::TU, io);
		if (run_stage(Stage::TU, current))
			return finish();
	} else if (!opts.pi && !opts.fi) {
		if (run_stage(Stage::Plain, current))
			return finish();
	}
	if (opts.pi || opts.fi) {
		current = enrich_obligation(ob, opts.fi ? EnrichStage::TU_PI_FI : EnrichStage::TU_PI, io);
		if (run_stage(Stage::PI, current))
			return finish();
	}
	if (opts.lemmas && Clock::now() < deadline) {
		LemmaOptions lo = opts.lemma;
		lo.deadline = lo.deadline ? std::min(*lo.deadline, deadline) : deadline;
		lo.lemma_timeout = opts.lemma_timeout;
		lo.precheck = false;
		if (opts.archive && !lo.trace_path)
			lo.trace_path = *opts.archive / (problem.name + "-lemmas.jsonl");
		po.obligation_id = problem.name;
		auto s0 = Clock::now();
		auto lr = lemma_loop(current, syn.form, configs, po, lo);
		rep.lemmas = lr.proven();
		rep.stages.push_back(
			{Stage::LemmaLoop, lr.status, since(s0), lr.obligation.assertions().size()});
		if (lr.main && lr.main->verdict.definitive())
			conclude(Stage::LemmaLoop, lr.main->verdict, lr.main->artifact_dir);
		if (rep.verdict == Status::Unsat || rep.verdict == Status::Sat)
			return finish();
	}
	rep.verdict = Clock::now() >= deadline ? Status::Timeout : Status::Unknown;
	return finish();
}

SolveReport solve_file(const std::string &path, const PipelineOptions &opts)
{
	auto problem = load_problem(path);
	auto configs = load_solver_configs(default_config_path());
	probe_solvers(configs);
	return solve_problem(problem, opts, configs);
}

std::vector<SolveReport> run_benchmark(const fs::path &dir, const PipelineOptions &opts,
                                       const std::vector<SolverConfig> &configs, size_t jobs)
{
	std::vector<fs::path> files;
	for (const auto &e : fs::directory_iterator(dir))
		if (e.is_regular_file() && e.path().extension() == ".feq")
			files.push_back(e.path());
	std::sort(files.begin(), files.end());
	std::vector<SolveReport> rows(files.size());
	std::atomic<size_t> next{0};
	auto worker = [&] {
		for (size_t i; (i = next++) < files.size();) {
			try {
				rows[i] = solve_problem(load_problem(files[i].string()), opts, configs);
			} catch (const std::exception &e) {
				rows[i].problem = files[i].stem().string();
				rows[i].error = e.what();
				spdlog::error("{}: {}", rows[i].problem, e.what());
			}
		}
	};
	std::vector<std::future<void>> pool;
	for (size_t k = 0; k < std::max<size_t>(1, std::min(jobs, files.size())); k++)
		pool.push_back(std::async(std::launch::async, worker));
	for (auto &f : pool)
		f.get();
	return rows;
}

namespace {

std::string csv_field(const std::string &s)
{
	if (s.find_first_of(",\"\n") == std::string::npos)
		return s;
	std::string out = "\"";
	for (char c : s) {
		if (c == '"')
			out += '"';
		out += c;
	}
	return out + "\"";
}

std::string verdict_column(const SolveReport &r)
{
	if (r.synthesis_failed)
		return "synthesis-failed";
	if (!r.error.empty())
		return "error";
	return to_string(r.verdict);
}

} // namespace

void write_csv(std::ostream &out, const std::vector<SolveReport> &rows)
{
	out << "problem,template,candidate,stage,verdict,lemmas_count,wall_s,winning_solver\n";
	for (const auto &r : rows)
		out << csv_field(r.problem) << ',' << csv_field(r.template_used) << ',' << csv_field(one_line(r.candidate))
		    << ',' << to_string(r.closed_by) << ',' << verdict_column(r) << ',' << r.lemmas.size() << ','
		    << std::fixed << std::setprecision(3) << r.wall_s << std::defaultfloat << ','
		    << csv_field(r.winning_solver) << '\n';
}

void write_table(std::ostream &out, const std::vector<SolveReport> &rows)
{
	size_t w = 7;
	for (const auto &r : rows)
		w = std::max(w, r.problem.size());
	auto line = [&](const std::string &p, const std::string &t, const std::string &st, const std::string &v,
	                const std::string &l, const std::string &s, const std::string &c) {
		out << std::left << std::setw(int(w) + 2) << p << std::setw(14) << t << std::setw(11) << st
		    << std::setw(18) << v << std::setw(8) << l << std::setw(10) << s << c << '\n';
	};
	line("problem", "template", "stage", "verdict", "lemmas", "wall_s", "candidate");
	size_t solved = 0;
	for (const auto &r : rows) {
		std::ostringstream secs;
		secs << std::fixed << std::setprecision(1) << r.wall_s;
		line(r.problem, r.template_used, to_string(r.closed_by), verdict_column(r), std::to_string(r.lemmas.size()),
		     secs.str(), one_line(r.candidate));
		solved += r.solved();
	}
	out << "solved " << solved << "/" << rows.size() << '\n';
}

SolverVerdict replay(const fs::path &archive)
{
	fs::path dir = archive;
	if (fs::is_regular_file(archive)) {
		try {
			std::ifstream in(archive);
			auto j = nlohmann::json::parse(in);
			dir = j.at("artifact_dir").get<std::string>();
		} catch (const std::exception &e) {
			throw archive_corrupt("unreadable report " + archive.string() + ": " + e.what());
		}
		if (dir.empty())
			throw archive_corrupt("report " + archive.string() + " has no archived obligation");
	}
	if (!fs::is_regular_file(dir / "result.json"))
		throw archive_corrupt("no result.json in " + dir.string());
	nlohmann::json j;
	std::vector<SolverConfig> configs;
	std::string winner, script;
	try {
		std::ifstream in(dir / "result.json");
		j = nlohmann::json::parse(in);
		winner = j.at("winner").get<std::string>();
		for (const auto &r : j.at("runs")) {
			SolverConfig c;
			c.id = r.at("solver").get<std::string>();
			c.command = r.at("cmd").get<std::string>();
			c.timeout = r.at("timeout").get<double>();
			c.confdir = r.at("confdir").get<std::string>();
			if (!r.at("memory_mb").is_null())
				c.memory_mb = r.at("memory_mb").get<unsigned>();
			c.enabled = winner.empty() || winner == c.id;
			configs.push_back(c);
		}
	} catch (const std::exception &e) {
		throw archive_corrupt("malformed result.json in " + dir.string() + ": " + e.what());
	}
	if (configs.empty())
		throw archive_corrupt("no solver runs recorded in " + dir.string());
	std::string pick = winner.empty() ? configs[0].id : winner;
	fs::path file = dir / (pick + ".smt2");
	std::ifstream in(file);
	if (!in)
		throw archive_corrupt("missing script " + file.string());
	std::stringstream ss;
	ss << in.rdbuf();
	PortfolioOptions o;
	o.obligation_id = "replay";
	return run_portfolio(ss.str(), configs, o).verdict;
}

} // namespace feq
