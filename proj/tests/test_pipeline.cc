// SPDX-License-Identifier: Apache-2.0

#include "feq/errors.hh"
#include "feq/fixtures.hh"
#include "feq/pipeline.hh"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using namespace feq;
namespace fs = std::filesystem;

namespace {

/// Stand-in solver: keeps every script in order and answers `answer`.
struct Recorder {
	fs::path dir;
	SolverConfig config;

	explicit Recorder(const std::string &answer)
	{
		std::string tmpl = (fs::temp_directory_path() / "feq-pipe-XXXXXX").string();
		REQUIRE(mkdtemp(tmpl.data()));
		dir = tmpl;
		fs::create_directories(dir / "seen");
		auto p = dir / "solver";
		std::ofstream(p) << "#!/bin/sh\nn=$(ls " << (dir / "seen").string() << " | wc -l)\ncp \"$1\" "
		                 << (dir / "seen").string() << "/$n.smt2\necho " << answer << "\n";
		fs::permissions(p, fs::perms::owner_all);
		config.id = "recorder";
		config.command = p.string() + " {file}";
		config.timeout = 5;
	}
	~Recorder()
	{
		std::error_code ec;
		fs::remove_all(dir, ec);
	}
	std::vector<std::string> scripts() const
	{
		std::vector<std::string> out;
		for (int i = 0;; i++) {
			std::ifstream in(dir / "seen" / (std::to_string(i) + ".smt2"));
			if (!in)
				return out;
			std::stringstream ss;
			ss << in.rdbuf();
			out.push_back(ss.str());
		}
	}
};

std::set<std::string> assert_lines(const std::string &script)
{
	std::set<std::string> out;
	std::istringstream in(script);
	for (std::string l; std::getline(in, l);)
		if (l.rfind("(assert", 0) == 0)
			out.insert(l);
	return out;
}

Problem bundled(const std::string &name)
{
	return load_problem((default_problems_dir() / (name + ".feq")).string());
}

PipelineOptions quick()
{
	PipelineOptions o;
	o.total_budget = 30;
	o.per_solver = 5;
	o.lemma.initial_size = 2;
	o.lemma.max_size = 2;
	o.lemma.max_pairs = 1;
	return o;
}

} // namespace

TEST_CASE("bundled fixtures synthesize their expected candidates")
{
	auto fx = load_fixtures();
	CHECK(fx.size() >= 10);
	std::set<std::string> names;
	for (const auto &f : fx)
		names.insert(f.name);
	for (const char *n : {"eq1", "u6", "u10", "india"})
		CHECK(names.count(n));
	for (const auto &f : fx) {
		CAPTURE(f.name);
		auto p = load_problem(f.file.string());
		auto syn = synthesize(p);
		CHECK(syn.form.describe() == f.candidate);
		CHECK(to_string(syn.used) == f.templ);
		CHECK(verify_candidate(p.axioms, syn.form));
	}
}

TEST_CASE("fixture manifest errors")
{
	Recorder tmp("unknown");
	auto write = [&](const std::string &text) { std::ofstream(tmp.dir / "manifest.ini") << text; };
	CHECK_THROWS_AS(load_fixtures(tmp.dir), error);
	write("[a]\nfile = a.feq\ncandidate = f(x) = 0\ntemplate = constant\nstage = Somewhere\n");
	CHECK_THROWS_AS(load_fixtures(tmp.dir), error);
	write("[a]\nfile = a.feq\ntemplate = constant\nstage = TU\n");
	CHECK_THROWS_AS(load_fixtures(tmp.dir), error);
	write("[a]\nfile = a.feq\ncandidate = f(x) = x | f(x) = 0\ntemplate = linear\nstage = LemmaLoop\n");
	auto fx = load_fixtures(tmp.dir);
	REQUIRE(fx.size() == 1);
	CHECK(fx[0].candidate == "f(x) = x\nf(x) = 0");
	CHECK(fx[0].stage == Stage::LemmaLoop);
}

TEST_CASE("stages run in order and only grow the obligation")
{
	Recorder rec("unknown");
	auto o = quick();
	o.lemmas = false;
	auto r = solve_problem(bundled("u6"), o, {rec.config});
	CHECK(r.verdict == Status::Unknown);
	CHECK(r.closed_by == Stage::None);
	CHECK(r.exit_code() == 2);
	REQUIRE(r.stages.size() == 2);
	CHECK(r.stages[0].stage == Stage::TU);
	CHECK(r.stages[1].stage == Stage::PI);
	auto s = rec.scripts();
	REQUIRE(s.size() == 2);
	auto tu = assert_lines(s[0]), pi = assert_lines(s[1]);
	CHECK(std::includes(pi.begin(), pi.end(), tu.begin(), tu.end()));
	CHECK(pi.size() > tu.size());

	SUBCASE("the lemma loop leaves earlier stages untouched")
	{
		Recorder with("unknown");
		auto ol = quick();
		auto rl = solve_problem(bundled("u6"), ol, {with.config});
		REQUIRE(rl.stages.size() == 3);
		CHECK(rl.stages[2].stage == Stage::LemmaLoop);
		auto sl = with.scripts();
		REQUIRE(sl.size() > 2);
		CHECK(sl[0] == s[0]);
		CHECK(sl[1] == s[1]);
	}
	SUBCASE("-EQ drops the quantified spec at PI only")
	{
		Recorder noeq("unknown");
		auto on = quick();
		on.lemmas = false;
		on.keep_eq = false;
		solve_problem(bundled("u6"), on, {noeq.config});
		auto sn = noeq.scripts();
		REQUIRE(sn.size() == 2);
		CHECK(sn[0] == s[0]);
		auto lines = assert_lines(sn[1]);
		CHECK(std::none_of(lines.begin(), lines.end(),
		                   [](const std::string &l) { return l.find("forall ((x Real) (y Real))") != std::string::npos; }));
	}
}

TEST_CASE("ablation switches")
{
	SUBCASE("base sends the bare obligation once")
	{
		Recorder rec("unknown");
		auto o = PipelineOptions::base();
		o.total_budget = 30;
		auto r = solve_problem(bundled("u10"), o, {rec.config});
		REQUIRE(r.stages.size() == 1);
		CHECK(r.stages[0].stage == Stage::Plain);
		CHECK(rec.scripts().size() == 1);
	}
	SUBCASE("-TU goes straight to PI")
	{
		Recorder rec("unknown");
		auto o = quick();
		o.tu = false;
		o.lemmas = false;
		auto r = solve_problem(bundled("u6"), o, {rec.config});
		REQUIRE(r.stages.size() == 1);
		CHECK(r.stages[0].stage == Stage::PI);
	}
	SUBCASE("FI adds instances")
	{
		Recorder a("unknown"), b("unknown");
		auto o = quick();
		o.lemmas = false;
		solve_problem(bundled("u10"), o, {a.config});
		o.fi = true;
		solve_problem(bundled("u10"), o, {b.config});
		CHECK(assert_lines(b.scripts()[1]).size() > assert_lines(a.scripts()[1]).size());
	}
}

TEST_CASE("verdict handling")
{
	SUBCASE("unsat closes at the first stage")
	{
		Recorder rec("unsat");
		auto o = quick();
		o.archive = rec.dir / "archive";
		auto r = solve_problem(bundled("eq1"), o, {rec.config});
		CHECK(r.solved());
		CHECK(r.exit_code() == 0);
		CHECK(r.closed_by == Stage::TU);
		CHECK(r.winning_solver == "recorder");
		CHECK(r.candidate == "f(x) = 0");
		CHECK(fs::exists(fs::path(r.artifact_dir) / "result.json"));
		CHECK(fs::exists(rec.dir / "archive" / "eq1.report.json"));
		CHECK(replay(r.artifact_dir).status == Status::Unsat);
		CHECK(replay(rec.dir / "archive" / "eq1.report.json").status == Status::Unsat);
		fs::remove(rec.dir / "solver");
		CHECK_THROWS_AS(replay(r.artifact_dir), no_solvers_available);
	}
	SUBCASE("sat means the candidate is incomplete")
	{
		Recorder rec("sat");
		auto r = solve_problem(bundled("eq1"), quick(), {rec.config});
		CHECK(r.verdict == Status::Sat);
		CHECK(r.candidate_incomplete);
		CHECK(r.closed_by == Stage::None);
		CHECK(r.exit_code() == 2);
		CHECK(r.stages.size() == 1);
	}
	SUBCASE("synthesis failure")
	{
		Recorder rec("unsat");
		auto p = parse_problem("find f; forall x y. f(x + y) = f(x) + f(y); forall x. x > 0 -> f(x) > 0;");
		auto r = solve_problem(p, quick(), {rec.config});
		CHECK(r.synthesis_failed);
		CHECK(r.exit_code() == 3);
		CHECK(rec.scripts().empty());
	}
	SUBCASE("no solvers")
	{
		SolverConfig gone;
		gone.id = "gone";
		gone.command = "/nonexistent/solver {file}";
		CHECK_THROWS_AS(solve_problem(bundled("eq1"), quick(), {gone}), no_solvers_available);
	}
}

TEST_CASE("replay rejects broken archives")
{
	Recorder tmp("unsat");
	CHECK_THROWS_AS(replay(tmp.dir / "missing"), archive_corrupt);
	fs::create_directories(tmp.dir / "ob");
	std::ofstream(tmp.dir / "ob" / "result.json") << "{not json";
	CHECK_THROWS_AS(replay(tmp.dir / "ob"), archive_corrupt);
	std::ofstream(tmp.dir / "ob" / "result.json") << R"({"winner": "x", "runs": []})";
	CHECK_THROWS_AS(replay(tmp.dir / "ob"), archive_corrupt);
	std::ofstream(tmp.dir / "ob" / "result.json")
		<< R"({"winner": "x", "runs": [{"solver": "x", "cmd": "true {file}", "timeout": 1, "confdir": "", "memory_mb": null}]})";
	// script missing
	CHECK_THROWS_AS(replay(tmp.dir / "ob"), archive_corrupt);
	std::ofstream(tmp.dir / "report.json") << R"({"artifact_dir": ""})";
	CHECK_THROWS_AS(replay(tmp.dir / "report.json"), archive_corrupt);
}

TEST_CASE("benchmark tables")
{
	Recorder rec("unsat");
	fs::create_directories(rec.dir / "empty");
	auto none = run_benchmark(rec.dir / "empty", quick(), {rec.config});
	CHECK(none.empty());
	std::ostringstream t;
	write_table(t, none);
	CHECK(t.str().find("solved 0/0") != std::string::npos);

	fs::create_directories(rec.dir / "set");
	std::ofstream(rec.dir / "set" / "a.feq") << "find f;\nforall x y. f(x + y) = x*f(y) + y*f(x);\n";
	std::ofstream(rec.dir / "set" / "b.feq") << "find f;\nforall x. f(x) = = 1;\n";
	std::ofstream(rec.dir / "set" / "c.feq") << "find f;\nforall x. f(f(x)) = x;\n";
	std::ofstream(rec.dir / "set" / "notes.txt") << "ignored\n";
	auto rows = run_benchmark(rec.dir / "set", quick(), {rec.config}, 2);
	REQUIRE(rows.size() == 3);
	CHECK(rows[0].problem == "a");
	CHECK(rows[0].solved());
	CHECK(rows[1].problem == "b");
	CHECK_FALSE(rows[1].error.empty());
	CHECK(rows[2].solved());

	std::ostringstream csv;
	write_csv(csv, rows);
	std::istringstream in(csv.str());
	std::string header, a, b, c;
	std::getline(in, header);
	std::getline(in, a);
	std::getline(in, b);
	std::getline(in, c);
	CHECK(header == "problem,template,candidate,stage,verdict,lemmas_count,wall_s,winning_solver");
	CHECK(a.rfind("a,constant,f(x) = 0,TU,unsat,0,", 0) == 0);
	CHECK(a.substr(a.rfind(',')) == ",recorder");
	CHECK(b.rfind("b,,,None,error,0,", 0) == 0);
	// multi-branch candidates stay on one line
	CHECK(c.find(" | ") != std::string::npos);
	std::ostringstream table;
	write_table(table, rows);
	CHECK(table.str().find("solved 2/3") != std::string::npos);
}
