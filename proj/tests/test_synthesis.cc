// SPDX-License-Identifier: Apache-2.0

#include "helpers.hh"

#include "feq/errors.hh"
#include "feq/synthesis.hh"

#include <doctest.h>

using namespace feq;
using feq::test::P;
using feq::test::fixture;

namespace {

std::set<Poly> monic_set(const std::vector<Poly> &ps)
{
	std::set<Poly> out;
	for (const auto &p : ps)
		out.insert(monic(p));
	return out;
}

std::vector<Poly> system_of(const Problem &p, TemplateKind k)
{
	auto t = make_template(k);
	auto app = apply_template(p.axioms, t);
	return extract_coefficient_system(app.residuals, app.quantified_vars);
}

std::vector<Poly> polys(std::initializer_list<const char *> ts)
{
	std::vector<Poly> out;
	for (const char *t : ts)
		out.push_back(P(t));
	return out;
}

const std::vector<std::string> abc = {"a", "b", "c"};

} // namespace

TEST_CASE("template application residuals")
{
	auto eq1 = fixture("eq1");
	auto app = apply_template(eq1.axioms, make_template(TemplateKind::Constant));
	REQUIRE(app.residuals.size() == 1);
	CHECK(app.residuals[0] == P("c - x*c - y*c"));
	CHECK(app.quantified_vars == std::set<std::string>{"x", "y"});
	CHECK(app.side.is_true());

	auto u6 = fixture("u6");
	app = apply_template(u6.axioms, make_template(TemplateKind::Quadratic));
	REQUIRE(app.residuals.size() == 1);
	CHECK(app.residuals[0] == P("(4*a - 1)*x*y + 2*b*y"));
}

TEST_CASE("coefficient systems match the frozen CAS expansion")
{
	// Frozen from an independent symbolic expansion of each residual.
	struct Row {
		const char *problem;
		std::vector<Poly> expected;
	};
	std::vector<Row> rows = {
		{"eq1", polys({"c", "-a", "a", "b - c", "2*a - 2*b"})},
		{"u6", polys({"2*b", "4*a - 1"})},
		{"u10", polys({"-2*a^2*b", "-2*a*c", "2*a - 2", "-2*a*b", "-a^3 + a", "-a*c^2 - b*c",
		               "-2*a*b*c - b^2", "-2*a^2*c - a*b^2 - a*b + b", "-2*a^2 + 2*a"})},
		{"india", polys({"2*a*b*c + b^2 - b - c", "-a", "2*a^2*b", "a^3", "2*a*c", "2*a*b",
		                 "2*a^2*c + a*b^2 + a*b - a", "a*c^2 + b*c", "2*a^2", "a"})},
		{"cauchy", polys({"2*a", "-c"})},
		{"jensen", polys({"-2*b", "-2*c"})},
		{"idem", polys({"2*a^2*b", "a^3", "2*a*b*c + b^2 - b", "2*a^2*c + a*b^2 + a*b - a",
		                "a*c^2 + b*c"})},
		{"invol", polys({"2*a^2*b", "a^3", "2*a*b*c + b^2 - 1", "2*a^2*c + a*b^2 + a*b",
		                 "a*c^2 + b*c + c"})},
		{"ff_x2", polys({"-a*c", "-a^2 + a", "-a*b", "-c^2 + c", "-b^2 + b", "-b*c"})},
	};
	for (const auto &r : rows) {
		CAPTURE(r.problem);
		auto sys = system_of(fixture(r.problem), TemplateKind::Quadratic);
		CHECK(monic_set(sys) == monic_set(r.expected));
		CHECK(sys.size() == monic_set(sys).size());
	}
}

TEST_CASE("introductory equation reads off a = b = c = 0")
{
	auto sols = solve_parameter_system(polys({"a", "2*a - 2*b", "b - c", "c"}), abc);
	REQUIRE(sols.size() == 1);
	CHECK(sols[0].assignment == Subst{{"a", 0}, {"b", 0}, {"c", 0}});
	CHECK(sols[0].free_params(abc).empty());
}

TEST_CASE("U6 system leaves c free")
{
	auto sols = solve_parameter_system(polys({"4*a - 1", "2*b"}), abc);
	REQUIRE(sols.size() == 1);
	CHECK(sols[0].assignment == Subst{{"a", Q(1, 4)}, {"b", 0}});
	CHECK(sols[0].free_params(abc) == std::vector<std::string>{"c"});
}

namespace {

using Point = std::array<Q, 3>;

std::set<Point> points(const std::vector<ParameterSolution> &sols)
{
	std::set<Point> out;
	for (const auto &s : sols) {
		REQUIRE(s.free_params(abc).empty());
		Point p;
		for (int i = 0; i < 3; i++)
			p[i] = *s.assignment.at(abc[i]).constant_value();
		out.insert(p);
	}
	return out;
}

} // namespace

TEST_CASE("branching systems")
{
	SUBCASE("India: exactly the zero map and the identity")
	{
		auto sols = solve_parameter_system(system_of(fixture("india"), TemplateKind::Quadratic), abc);
		CHECK(points(sols) == std::set<Point>{{0, 0, 0}, {0, 1, 0}});
	}
	SUBCASE("U10: only x^2")
	{
		auto sols = solve_parameter_system(system_of(fixture("u10"), TemplateKind::Quadratic), abc);
		CHECK(points(sols) == std::set<Point>{{1, 0, 0}});
	}
	SUBCASE("multiplicative maps: 0, 1, x, x^2")
	{
		auto sols = solve_parameter_system(system_of(fixture("ff_x2"), TemplateKind::Quadratic), abc);
		CHECK(points(sols) == std::set<Point>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
	}
	SUBCASE("idempotent maps: constants and the identity")
	{
		auto sols = solve_parameter_system(system_of(fixture("idem"), TemplateKind::Quadratic), abc);
		REQUIRE(sols.size() == 2);
		std::set<std::string> shapes;
		for (const auto &s : sols)
			shapes.insert(to_string(s.assignment.at("a")) + "," + to_string(s.assignment.at("b")) + "," +
			              (s.assignment.count("c") ? to_string(s.assignment.at("c")) : "free"));
		CHECK(shapes == std::set<std::string>{"0,0,free", "0,1,0"});
	}
	SUBCASE("involutions: identity and c - x")
	{
		auto sols = solve_parameter_system(system_of(fixture("invol"), TemplateKind::Quadratic), abc);
		REQUIRE(sols.size() == 2);
		std::set<std::string> shapes;
		for (const auto &s : sols)
			shapes.insert(to_string(s.assignment.at("a")) + "," + to_string(s.assignment.at("b")) + "," +
			              (s.assignment.count("c") ? to_string(s.assignment.at("c")) : "free"));
		CHECK(shapes == std::set<std::string>{"0,-1,free", "0,1,0"});
	}
	SUBCASE("contradictions prune")
	{
		CHECK(solve_parameter_system(polys({"a - 1", "a - 2"}), abc).empty());
		CHECK(solve_parameter_system(polys({"a^2 + 1"}), abc).empty());
	}
	SUBCASE("irrational roots are out of reach")
	{
		CHECK_THROWS_AS(solve_parameter_system(polys({"a^2 - 2"}), abc), system_too_hard);
		CHECK_THROWS_AS(solve_parameter_system(polys({"a^3 - a - 1"}), abc), system_too_hard);
	}
	SUBCASE("rational roots of a quadratic")
	{
		auto sols = solve_parameter_system(polys({"4*a^2 - 1", "b", "c"}), abc);
		CHECK(points(sols) == std::set<Point>{{Q(-1, 2), 0, 0}, {Q(1, 2), 0, 0}});
	}
}

TEST_CASE("every grid point of the system lies in exactly one branch")
{
	const std::vector<Q> grid = {-2, -1, Q(-1, 2), 0, Q(1, 2), 1, 2};
	for (const char *name : {"eq1", "u6", "u10", "india", "cauchy", "jensen", "idem", "invol", "ff_x2", "shift"})
		for (auto kind : {TemplateKind::Constant, TemplateKind::Linear, TemplateKind::QuadMonomial,
		                  TemplateKind::Quadratic}) {
			CAPTURE(name);
			CAPTURE(to_string(kind));
			auto t = make_template(kind);
			auto params = t.params();
			auto sys = system_of(fixture(name), kind);
			auto sols = solve_parameter_system(sys, params);
			for (const auto &s : sols)
				for (const auto &e : sys)
					CHECK(substitute(e, s.assignment).is_zero());
			size_t n = params.size();
			size_t total = 1;
			for (size_t i = 0; i < n; i++)
				total *= grid.size();
			for (size_t idx = 0; idx < total; idx++) {
				std::map<std::string, Q> pt;
				size_t r = idx;
				for (size_t i = 0; i < n; i++, r /= grid.size())
					pt[params[i]] = grid[r % grid.size()];
				auto f0 = [](const Q &) { return Q(0); };
				bool in_system = std::all_of(sys.begin(), sys.end(),
				                             [&](const Poly &e) { return evaluate(e, pt, f0) == 0; });
				int hits = 0;
				for (const auto &s : sols) {
					bool match = true;
					for (const auto &[p, v] : s.assignment)
						if (evaluate(v, pt, f0) != pt.at(p))
							match = false;
					hits += match;
				}
				CHECK(hits == (in_system ? 1 : 0));
			}
		}
}

TEST_CASE("Lagrange elimination")
{
	auto t = make_template(TemplateKind::Quadratic);
	SUBCASE("U6 candidate")
	{
		ParameterSolution s{{{"a", Q(1, 4)}, {"b", 0}}, Formula::top()};
		auto b = lagrange_eliminate(s, t);
		CHECK(b.definition == parse_term("x^2/4 + f(0)"));
		CHECK(b.gamma.is_true());
	}
	SUBCASE("positive shift")
	{
		ParameterSolution s{{{"a", 0}, {"b", 1}}, Formula::cmp(Poly(), Rel::Lt, P("c"))};
		auto b = lagrange_eliminate(s, t);
		CHECK(b.definition == parse_term("x + f(0)"));
		CHECK(b.gamma == Formula::cmp(Poly(), Rel::Lt, parse_term("f(0)")));
	}
	SUBCASE("fully fixed")
	{
		ParameterSolution s{{{"a", 0}, {"b", 0}, {"c", 0}}, Formula::top()};
		CHECK(lagrange_eliminate(s, t).definition.is_zero());
	}
	SUBCASE("free quadratic reproduces the interpolation formulas")
	{
		auto b = lagrange_eliminate({}, t);
		auto expect = parse_term("((f(1) + f(-1))/2 - f(0))*x^2 + (f(1) - ((f(1) + f(-1))/2 - f(0)) - f(0))*x + f(0)");
		CHECK(b.definition == expect);
		for (long k : {0L, 1L, -1L})
			CHECK(substitute(b.definition, {{"x", Poly(k)}}) == Poly::fapp(Poly(k)));
	}
}

TEST_CASE("candidate verification")
{
	auto eq1 = fixture("eq1");
	CHECK(verify_candidate(eq1.axioms, {{{Formula::top(), Poly()}}}));
	CHECK_FALSE(verify_candidate(eq1.axioms, {{{Formula::top(), parse_term("x")}}}));
	auto u6 = fixture("u6");
	CHECK(verify_candidate(u6.axioms, {{{Formula::top(), parse_term("x^2/4 + f(0)")}}}));
	CHECK_FALSE(verify_candidate(u6.axioms, {{{Formula::top(), parse_term("x^2/3 + f(0)")}}}));
	auto india = fixture("india");
	CHECK(verify_candidate(india.axioms, {{{Formula::top(), parse_term("x")}, {Formula::top(), Poly()}}}));
	auto shift = fixture("shift");
	auto g = Formula::cmp(Poly(), Rel::Lt, parse_term("f(0)"));
	CHECK(verify_candidate(shift.axioms, {{{g, parse_term("x + f(0)")}}}));
	CHECK_FALSE(verify_candidate(shift.axioms, {{{Formula::top(), parse_term("x + f(0)")}}}));
}

TEST_CASE("obligations")
{
	auto eq1 = fixture("eq1");
	auto ob = build_obligation(eq1.axioms, {{{Formula::top(), Poly()}}});
	CHECK(ob.spec == eq1.axioms);
	CHECK(ob.skolems == std::set<std::string>{"c"});
	REQUIRE(ob.negation_constraints.size() == 1);
	CHECK(to_string(ob.negation_constraints[0]) == "f(c) != 0");

	auto india = fixture("india");
	ob = build_obligation(india.axioms, synthesize(india).form);
	CHECK(ob.skolems == std::set<std::string>{"c1", "c2"});
	REQUIRE(ob.negation_constraints.size() == 2);
	CHECK(to_string(ob.negation_constraints[0]) == "f(c1) != c1");
	CHECK(to_string(ob.negation_constraints[1]) == "f(c2) != 0");

	auto shift = fixture("shift");
	ob = build_obligation(shift.axioms, synthesize(shift).form);
	REQUIRE(ob.negation_constraints.size() == 1);
	CHECK(to_string(ob.negation_constraints[0]) == "f(0) <= 0 or f(c) != c + f(0)");
}

TEST_CASE("synthesis picks the full solution class")
{
	struct Row {
		const char *problem;
		const char *form;
		TemplateKind used;
	};
	for (const auto &r : std::vector<Row>{
	         {"eq1", "f(x) = 0", TemplateKind::Constant},
	         {"u6", "f(x) = 1/4*x^2 + f(0)", TemplateKind::Quadratic},
	         {"u10", "f(x) = x^2", TemplateKind::QuadMonomial},
	         {"india", "f(x) = x\nf(x) = 0", TemplateKind::Linear},
	         {"ff_x2", "f(x) = x^2\nf(x) = x\nf(x) = 1\nf(x) = 0", TemplateKind::Quadratic},
	         {"shift", "0 < f(0) -> f(x) = x + f(0)", TemplateKind::Linear},
	     }) {
		CAPTURE(r.problem);
		auto res = synthesize(fixture(r.problem));
		CHECK(res.form.describe() == r.form);
		CHECK(res.used == r.used);
	}
}

TEST_CASE("side conditions must become ground")
{
	auto p = parse_problem("find f; forall x y. f(x + y) = f(x) + f(y); forall x. x > 0 -> f(x) > 0;");
	CHECK_THROWS_AS(synthesize(p), unsupported_side_condition);
}
