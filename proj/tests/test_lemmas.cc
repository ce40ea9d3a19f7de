// SPDX-License-Identifier: Apache-2.0

#include "helpers.hh"

#include "feq/instantiation.hh"
#include "feq/lemmas.hh"
#include "feq/synthesis.hh"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>

using namespace feq;
using feq::test::fixture;
namespace fs = std::filesystem;

namespace {

bool has(const std::vector<Poly> &v, const Poly &p)
{
	return std::find(v.begin(), v.end(), p) != v.end();
}

std::vector<std::string> shown(const std::vector<Formula> &fs)
{
	std::vector<std::string> out;
	for (const auto &f : fs)
		out.push_back(to_string(f));
	return out;
}

std::string joined(const std::vector<std::string> &v)
{
	std::string out;
	for (const auto &s : v)
		out += s + "; ";
	return out;
}

bool contains(const std::vector<std::string> &v, const std::string &s)
{
	return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<SolverConfig> real_solvers()
{
	auto cs = load_solver_configs(default_config_path());
	probe_solvers(cs);
	return cs;
}

bool any_enabled(const std::vector<SolverConfig> &cs)
{
	return std::any_of(cs.begin(), cs.end(), [](const SolverConfig &c) { return c.enabled; });
}

const Poly c = Poly::constant("c");
const Poly f0 = Poly::fapp(Poly(0));

/// Stand-in solver that keeps every script it is given and answers `answer`.
struct Recorder {
	fs::path dir;
	SolverConfig config;

	explicit Recorder(const std::string &answer)
	{
		std::string tmpl = (fs::temp_directory_path() / "feq-rec-XXXXXX").string();
		REQUIRE(mkdtemp(tmpl.data()));
		dir = tmpl;
		auto p = dir / "solver";
		std::ofstream(p) << "#!/bin/sh\nn=$(ls " << dir.string() << " | grep -c smt2)\ncp \"$1\" "
		                 << dir.string() << "/seen-$n.smt2\necho " << answer << "\n";
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
			std::ifstream in(dir / ("seen-" + std::to_string(i) + ".smt2"));
			if (!in)
				return out;
			std::stringstream ss;
			ss << in.rdbuf();
			out.push_back(ss.str());
		}
	}
};

} // namespace

TEST_CASE("ground term closure")
{
	std::vector<Poly> seeds{Poly(0), Poly(1), c};
	// sizes from an independent enumeration with sympy
	std::vector<size_t> expect{3, 6, 17, 52, 149};
	for (unsigned b = 1; b <= 5; b++)
		CHECK(generate_ground_terms(seeds, b).size() == expect[b - 1]);
	std::vector<Poly> two{Poly(0), Poly(1), Poly::constant("c1"), Poly::constant("c2")};
	std::vector<size_t> expect2{4, 8, 30, 100, 327};
	for (unsigned b = 1; b <= 5; b++)
		CHECK(generate_ground_terms(two, b).size() == expect2[b - 1]);

	auto t3 = generate_ground_terms(seeds, 3);
	for (const auto &p : {c + Poly(1), c * c, -c, Poly::fapp(c), f0, Poly::fapp(Poly(1))})
		CHECK(has(t3, p));
	CHECK(generate_ground_terms(seeds, 1) == seeds);
	CHECK(generate_ground_terms({Poly(0)}, 3) == std::vector<Poly>{Poly(0), f0, Poly::fapp(f0)});
	// 0 - f(0) is new at size 4
	CHECK(generate_ground_terms({Poly(0)}, 4).size() == 5);
	CHECK(generate_ground_terms(seeds, 4) == generate_ground_terms(seeds, 4));
	CHECK(generate_ground_terms(seeds, 0).empty());
}

TEST_CASE("conjectures from the India candidate")
{
	auto p = fixture("india");
	auto sf = synthesize(p).form;
	std::vector<Poly> seeds{Poly(0), Poly(1), Poly::constant("c1"), Poly::constant("c2")};
	auto terms = generate_ground_terms(seeds, 3);
	auto cs = generate_conjectures(terms, sf, seeds, 20);
	auto s = shown(cs);
	REQUIRE(!s.empty());
	CHECK(s[0] == "f(0) = 0");
	CHECK(std::count(s.begin(), s.end(), "f(0) = 0") == 1);
	CHECK(contains(s, "f(1) = 1 or f(1) = 0"));
	CHECK(contains(s, "f(1) = 1"));
	CHECK(contains(s, "f(1) = 0"));
	CHECK(contains(s, "f(c1) = 0"));
	CHECK(contains(s, "f(c2) = c2"));
	// solved-form conjectures precede the 20 pairs
	CHECK(cs.size() == 10 + 20);
	size_t first_pair = 10;
	for (size_t i = 0; i < cs.size(); i++) {
		CHECK(is_ground(cs[i]));
		CHECK_FALSE(has_quantifier(cs[i]));
		bool fapp = false;
		for_each_poly(cs[i], [&](const Poly &q) { fapp |= contains_fapp(q); });
		CHECK(fapp);
		if (i >= first_pair)
			CHECK(cs[i].kind() == Formula::Kind::Cmp);
	}
	// equations before disjunctions within the solved-form group
	bool seen_or = false;
	for (size_t i = 0; i < first_pair; i++) {
		if (cs[i].kind() == Formula::Kind::Or)
			seen_or = true;
		else
			CHECK_FALSE(seen_or);
	}
	CHECK(shown(generate_conjectures(terms, sf, seeds, 20)) == s);

	std::set<std::string> attempted{canonical_key(cs[0]), canonical_key(cs[12])};
	auto rest = generate_conjectures(terms, sf, seeds, 20, attempted);
	// one solved-form conjecture fewer; the pair slot is refilled
	CHECK(rest.size() == cs.size() - 1);
	for (const auto &f : rest)
		CHECK_FALSE(attempted.count(canonical_key(f)));
}

TEST_CASE("conjectures from a two-branch candidate")
{
	SolvedForm sf;
	auto x = Poly::var("x");
	sf.branches = {{Formula::top(), x}, {Formula::top(), -x}};
	auto cs = shown(generate_conjectures({}, sf, {c}, 0));
	CAPTURE(joined(cs));
	// f(c) = -c prints in its normalised form
	REQUIRE(cs.size() == 3);
	CHECK(contains(cs, "f(c) = c"));
	CHECK(contains(cs, "c + f(c) = 0"));
	CHECK(cs[2] == "f(c) = c or c + f(c) = 0");

	// a branch with a condition on f keeps it
	SolvedForm shift;
	shift.branches = {{Formula::cmp(Poly(0), Rel::Lt, f0), x + f0}};
	auto sc = shown(generate_conjectures({}, shift, {Poly(1)}, 0));
	CAPTURE(joined(sc));
	REQUIRE(sc.size() == 1);
	CHECK(sc[0].find("f(1)") != std::string::npos);
	CHECK(sc[0].find("and") != std::string::npos);
}

TEST_CASE("redundancy checks")
{
	auto l0 = Formula::eq(f0);
	// syntactic, no solver involved
	CHECK(is_redundant(l0, {l0}, {}, 1));
	CHECK_FALSE(is_redundant(l0, {}, {}, 1));

	auto cs = real_solvers();
	if (!any_enabled(cs)) {
		MESSAGE("no solver available, skipping solver-backed checks");
		return;
	}
	auto f1 = Poly::fapp(Poly(1));
	CHECK_FALSE(is_redundant(Formula::eq(f1, Poly(1)), {l0}, cs, 1));
	auto fc = Poly::fapp(c);
	auto weak = Formula::disj({Formula::eq(fc, c), Formula::eq(fc)});
	CHECK(is_redundant(weak, {Formula::eq(fc)}, cs, 1));
}

TEST_CASE("proving conjectures")
{
	auto eq1 = fixture("eq1");
	auto ob = enrich_obligation(build_obligation(eq1.axioms, synthesize(eq1).form), EnrichStage::TU);

	SUBCASE("negation constraints stay out of the context")
	{
		Recorder rec("unknown");
		PortfolioOptions o;
		o.timeout = 5;
		auto v = prove_conjecture(ob, Formula::eq(f0), {rec.config}, o);
		CHECK(v.status == Status::Unknown);
		auto scripts = rec.scripts();
		REQUIRE(scripts.size() == 1);
		CHECK(scripts[0].find("(not (= (f c) 0))") == std::string::npos);
		CHECK(scripts[0].find("(not (= (f 0) 0))") != std::string::npos);
	}
	SUBCASE("real solvers")
	{
		auto cs = real_solvers();
		if (!any_enabled(cs)) {
			MESSAGE("no solver available");
			return;
		}
		PortfolioOptions o;
		o.timeout = 5;
		CHECK(prove_conjecture(ob, Formula::eq(f0), cs, o).status == Status::Unsat);
		// f = 0 is a model
		o.timeout = 2;
		CHECK(prove_conjecture(ob, Formula::eq(Poly::fapp(Poly(1)), Poly(1)), cs, o).status != Status::Unsat);
	}
}

TEST_CASE("lemma loop control")
{
	auto india = fixture("india");
	auto sf = synthesize(india).form;
	auto ob = build_obligation(india.axioms, sf);

	SUBCASE("zero budget")
	{
		Recorder rec("unknown");
		LemmaOptions lo;
		lo.deadline = Clock::now();
		auto r = lemma_loop(ob, sf, {rec.config}, {}, lo);
		CHECK(r.status == Status::Unknown);
		CHECK(r.records.empty());
		CHECK(r.rounds == 0);
		CHECK(rec.scripts().empty());
	}
	SUBCASE("pre-check closes before any round")
	{
		Recorder rec("unsat");
		auto r = lemma_loop(ob, sf, {rec.config}, {}, {});
		CHECK(r.status == Status::Unsat);
		CHECK(r.rounds == 0);
		CHECK(r.main_attempts == 1);
	}
	SUBCASE("rounds escalate and commit in generation order")
	{
		Recorder rec("unknown");
		fs::path trace = rec.dir / "trace.jsonl";
		LemmaOptions lo;
		lo.precheck = false;
		lo.initial_size = 2;
		lo.max_size = 3;
		lo.max_pairs = 3;
		lo.workers = 3;
		lo.trace_path = trace;
		auto r = lemma_loop(ob, sf, {rec.config}, {}, lo);
		CHECK(r.status == Status::Unknown);
		CHECK(r.rounds == 2);
		CHECK(r.main_attempts == 0);
		CHECK(r.proven().empty());
		std::set<std::string> keys;
		for (const auto &rec_ : r.records) {
			CHECK(rec_.status == LemmaStatus::Failed);
			CHECK(keys.insert(canonical_key(rec_.formula)).second);
		}
		std::vector<Poly> seeds{Poly(0), Poly(1), Poly::constant("c1"), Poly::constant("c2")};
		auto first = generate_conjectures(generate_ground_terms(seeds, 2), sf, seeds, 3);
		REQUIRE(r.records.size() > first.size());
		for (size_t i = 0; i < first.size(); i++)
			CHECK(r.records[i].formula == first[i]);
		std::ifstream in(trace);
		size_t lines = 0;
		for (std::string l; std::getline(in, l); lines++) {
			auto j = nlohmann::json::parse(l);
			CHECK(j.contains("formula"));
			CHECK(j["status"] == "failed");
		}
		CHECK(lines == r.records.size());
		// lemma scripts never carry the negated candidate: no single
		// conjecture negates both f(c1) = c1 and f(c2) = 0
		for (const auto &s : rec.scripts())
			CHECK_FALSE((s.find("(not (= (f c1) c1))") != std::string::npos &&
			             s.find("(not (= (f c2) 0))") != std::string::npos));
	}
}
