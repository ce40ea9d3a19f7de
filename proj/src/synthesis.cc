// SPDX-License-Identifier: Apache-2.0

#include "feq/synthesis.hh"
#include "feq/algebra.hh"
#include "feq/errors.hh"

#include <algorithm>
#include <sstream>

namespace feq {

const char *to_string(TemplateKind k)
{
	switch (k) {
	case TemplateKind::Constant: return "constant";
	case TemplateKind::Linear: return "linear";
	case TemplateKind::QuadMonomial: return "quadmonomial";
	case TemplateKind::Quadratic: return "quadratic";
	}
	return "?";
}

std::optional<TemplateKind> template_from_string(std::string_view s)
{
	if (s == "constant") return TemplateKind::Constant;
	if (s == "linear") return TemplateKind::Linear;
	if (s == "quadmonomial" || s == "monomial") return TemplateKind::QuadMonomial;
	if (s == "quadratic") return TemplateKind::Quadratic;
	return std::nullopt;
}

std::vector<std::string> Template::params() const
{
	std::vector<std::string> out;
	for (const auto *p : {&a, &b, &c})
		if (*p)
			out.push_back(**p);
	return out;
}

Poly Template::at(const Poly &arg) const
{
	Poly r;
	if (a)
		r += Poly::var(*a) * arg * arg;
	if (b)
		r += Poly::var(*b) * arg;
	if (c)
		r += Poly::var(*c);
	return r;
}

static std::string fresh_name(const std::string &base, const std::set<std::string> &avoid)
{
	std::string name = base;
	for (int k = 1; avoid.count(name); k++)
		name = base + std::to_string(k);
	return name;
}

Template make_template(TemplateKind kind, const std::set<std::string> &avoid)
{
	Template t;
	t.kind = kind;
	bool qa = kind == TemplateKind::Quadratic || kind == TemplateKind::QuadMonomial;
	bool qb = kind == TemplateKind::Quadratic || kind == TemplateKind::Linear;
	bool qc = kind != TemplateKind::QuadMonomial;
	if (qa)
		t.a = fresh_name("a", avoid);
	if (qb)
		t.b = fresh_name("b", avoid);
	if (qc)
		t.c = fresh_name("c", avoid);
	return t;
}

TemplateApplication apply_template(const std::vector<Formula> &spec, const Template &t)
{
	TemplateApplication app;
	auto subst = [&](const Poly &p) { return replace_fapps(p, [&](const Poly &arg) { return t.at(arg); }); };
	std::vector<Formula> sides;
	for (const auto &axiom : spec) {
		std::vector<std::string> prefix;
		Formula body = axiom;
		while (body.kind() == Formula::Kind::Forall) {
			prefix.insert(prefix.end(), body.vars().begin(), body.vars().end());
			body = body.body();
		}
		app.quantified_vars.insert(prefix.begin(), prefix.end());
		for (const auto &k : conjuncts(body)) {
			if (k.kind() == Formula::Kind::Cmp && k.rel() == Rel::Eq) {
				app.residuals.push_back(subst(k.poly()));
				continue;
			}
			Formula s = map_polys(k, subst);
			sides.push_back(prefix.empty() ? s : Formula::forall(prefix, s));
		}
	}
	app.side = simplify(Formula::conj(std::move(sides)));
	return app;
}

std::vector<Poly> extract_coefficient_system(const std::vector<Poly> &residuals,
                                             const std::set<std::string> &quantified_vars)
{
	std::vector<Poly> out;
	std::set<Poly> seen;
	for (const auto &r : residuals)
		for (const auto &[exps, c] : coefficients_wrt(r, quantified_vars))
			if (!c.is_zero() && seen.insert(monic(c)).second)
				out.push_back(c);
	return out;
}

std::vector<std::string> ParameterSolution::free_params(const std::vector<std::string> &params) const
{
	std::vector<std::string> out;
	for (const auto &p : params)
		if (!assignment.count(p))
			out.push_back(p);
	return out;
}

namespace {

Subst bind_param(const Subst &assign, const std::string &name, const Poly &value)
{
	Subst out;
	Subst one{{name, value}};
	for (const auto &[k, v] : assign)
		out[k] = substitute(v, one);
	out[name] = value;
	return out;
}

class SystemSolver {
public:
	SystemSolver(const std::vector<std::string> &params, int cap) : params_(params), cap_(cap) {}

	std::vector<Subst> found;

	void run(const std::vector<Poly> &eqs, const Subst &assign, int depth)
	{
		std::vector<Poly> cur;
		for (const auto &e : eqs) {
			Poly p = substitute(e, assign);
			if (p.is_zero())
				continue;
			if (p.is_constant())
				return;
			p = monic(p);
			if (std::find(cur.begin(), cur.end(), p) == cur.end())
				cur.push_back(std::move(p));
		}
		if (cur.empty()) {
			found.push_back(assign);
			return;
		}
		if (depth > cap_)
			throw system_too_hard("branching deeper than " + std::to_string(cap_));
		auto is_param = [&](const Atom &a) {
			return a.is_var() && !assign.count(a.name()) &&
			       std::find(params_.begin(), params_.end(), a.name()) != params_.end();
		};

		for (const auto &e : cur)
			for (const auto &a : top_atoms(e))
				if (is_param(a))
					if (auto v = solve_linear_for(e, a)) {
						run(cur, bind_param(assign, a.name(), *v), depth);
						return;
					}

		for (const auto &e : cur) {
			auto atoms = top_atoms(e);
			if (atoms.size() != 1 || !is_param(*atoms.begin()) || contains_fapp(e))
				continue;
			const Atom &v = *atoms.begin();
			bool exhaustive = true;
			auto roots = rational_roots(*as_univariate(e, v), exhaustive);
			if (!exhaustive)
				throw system_too_hard("irrational roots in " + to_string(e) + " = 0");
			for (const auto &r : roots)
				run(cur, bind_param(assign, v.name(), Poly(r)), depth + 1);
			return;
		}

		for (size_t i = 0; i < cur.size(); i++)
			for (const auto &a : top_atoms(cur[i])) {
				if (!is_param(a))
					continue;
				unsigned k = UINT32_MAX;
				for (const auto &m : cur[i].terms()) {
					unsigned d = 0;
					for (const auto &[b, e] : m.powers)
						if (b == a)
							d = e;
					k = std::min(k, d);
				}
				if (k == 0)
					continue;
				run(cur, bind_param(assign, a.name(), Poly()), depth + 1);
				auto rest = cur;
				rest[i] = *divide_exact(cur[i], Poly::atom(a, k));
				run(rest, assign, depth + 1);
				return;
			}

		for (const auto &e : cur)
			for (const auto &a : top_atoms(e)) {
				if (!is_param(a) || degree_in(e, a) != 1)
					continue;
				std::vector<Monomial> with, without;
				for (const auto &m : e.terms()) {
					Monomial r = m;
					auto it = std::find_if(r.powers.begin(), r.powers.end(),
					                       [&](const auto &pe) { return pe.first == a; });
					if (it == r.powers.end()) {
						without.push_back(m);
						continue;
					}
					r.powers.erase(it);
					with.push_back(std::move(r));
				}
				Poly A = Poly::from_monomials(with), B = Poly::from_monomials(without);
				if (A.is_constant())
					continue;
				auto q = divide_exact(B, A);
				if (!q)
					continue;
				auto more = cur;
				more.push_back(A);
				run(more, assign, depth + 1);
				run(cur, bind_param(assign, a.name(), -*q), depth + 1);
				return;
			}

		std::string msg = "no rule applies to";
		for (const auto &e : cur)
			msg += " [" + to_string(e) + " = 0]";
		throw system_too_hard(msg);
	}

private:
	const std::vector<std::string> &params_;
	int cap_;
};

Poly value_in(const Subst &s, const std::string &p)
{
	auto it = s.find(p);
	return it == s.end() ? Poly::var(p) : it->second;
}

/// Every instance of b is an instance of a.
bool subsumes(const Subst &a, const Subst &b, const std::vector<std::string> &params)
{
	Subst rename;
	for (const auto &p : params)
		if (!a.count(p))
			rename[p] = Poly::var("__s_" + p);
	std::vector<Poly> eqs;
	for (const auto &p : params)
		eqs.push_back(substitute(value_in(a, p), rename) - value_in(b, p));
	auto el = eliminate_linear(eqs, [](const Atom &x) {
		return x.is_var() && x.name().rfind("__s_", 0) == 0;
	});
	return !el.inconsistent && el.remaining.empty();
}

} // namespace

std::vector<ParameterSolution> solve_parameter_system(const std::vector<Poly> &system,
                                                      const std::vector<std::string> &params,
                                                      int depth_cap)
{
	SystemSolver s(params, depth_cap);
	s.run(system, {}, 0);
	std::vector<Subst> uniq;
	for (const auto &f : s.found)
		if (std::find(uniq.begin(), uniq.end(), f) == uniq.end())
			uniq.push_back(f);
	std::vector<ParameterSolution> out;
	for (size_t i = 0; i < uniq.size(); i++) {
		bool covered = false;
		for (size_t j = 0; j < uniq.size() && !covered; j++)
			if (i != j && subsumes(uniq[j], uniq[i], params) &&
			    !(j > i && subsumes(uniq[i], uniq[j], params)))
				covered = true;
		if (!covered)
			out.push_back({uniq[i], Formula::top()});
	}
	return out;
}

bool SolvedForm::is_empty() const
{
	return branches.size() == 1 && branches[0].gamma.is_false();
}

std::string SolvedForm::describe() const
{
	if (is_empty())
		return "false";
	std::string s;
	for (const auto &b : branches) {
		if (!s.empty())
			s += "\n";
		if (!b.gamma.is_true())
			s += to_string(b.gamma) + " -> ";
		s += "f(x) = " + to_string(b.definition);
	}
	return s;
}

static const Poly x_var = Poly::var("x");

SolvedBranch lagrange_eliminate(const ParameterSolution &sol, const Template &t)
{
	Poly tv = substitute(t.at(x_var), sol.assignment);
	auto free = sol.free_params(t.params());
	std::vector<Poly> rel;
	for (long k : {0L, 1L, -1L})
		rel.push_back(substitute(tv, {{"x", Poly(k)}}) - Poly::fapp(Poly(k)));
	auto el = eliminate_linear(rel, [&](const Atom &a) {
		return a.is_var() && std::find(free.begin(), free.end(), a.name()) != free.end();
	});
	for (const auto &p : free)
		if (!el.value_of(Atom::var(p)))
			throw system_too_hard("parameter " + p + " cannot be eliminated");
	SolvedBranch b;
	b.definition = el.apply(tv);
	b.gamma = simplify(map_polys(sol.residual_constraints, [&](const Poly &p) { return el.apply(p); }));
	return b;
}

namespace {

bool is_ground_fapp(const Atom &a)
{
	return a.is_fapp() && a.arg().is_constant();
}

} // namespace

bool verify_candidate(const std::vector<Formula> &spec, const SolvedForm &sf)
{
	for (const auto &br : sf.branches) {
		if (br.gamma.is_false())
			continue;
		std::vector<Poly> rel;
		for (long k : {0L, 1L, -1L})
			rel.push_back(substitute(br.definition, {{"x", Poly(k)}}) - Poly::fapp(Poly(k)));
		std::vector<Formula> gamma = conjuncts(br.gamma);
		for (const auto &g : gamma)
			if (g.kind() == Formula::Kind::Cmp && g.rel() == Rel::Eq)
				rel.push_back(g.poly());
		auto el = eliminate_linear(rel, is_ground_fapp);
		if (el.inconsistent)
			continue;
		auto reduce = [&](const Poly &p) { return el.apply(p); };
		std::set<std::string> known;
		for (const auto &g : gamma)
			known.insert(canonical_key(simplify(map_polys(g, reduce))));
		for (const auto &axiom : spec) {
			Formula r = map_polys(axiom, [&](const Poly &p) {
				return el.apply(replace_fapps(p, [&](const Poly &arg) {
					return substitute(br.definition, {{"x", arg}});
				}));
			});
			r = simplify(r);
			if (r.is_true())
				continue;
			for (const auto &k : conjuncts(r))
				if (!k.is_true() && !known.count(canonical_key(k)))
					return false;
		}
	}
	return true;
}

ProofObligation build_obligation(const std::vector<Formula> &spec, const SolvedForm &sf,
                                 const std::set<std::string> &constants)
{
	ProofObligation ob;
	ob.spec = spec;
	ob.constants = constants;
	std::set<std::string> avoid = constants;
	for (const auto &a : spec)
		for_each_poly(a, [&](const Poly &p) {
			auto v = variables(p);
			avoid.insert(v.begin(), v.end());
			auto c = feq::constants(p);
			avoid.insert(c.begin(), c.end());
		});
	std::vector<const SolvedBranch *> live;
	for (const auto &b : sf.branches)
		if (!b.gamma.is_false())
			live.push_back(&b);
	for (size_t i = 0; i < live.size(); i++) {
		std::string name = live.size() == 1 ? "c" : "c" + std::to_string(i + 1);
		for (int k = 1; avoid.count(name); k++)
			name = (live.size() == 1 ? "c" : "c" + std::to_string(i + 1)) + "_" + std::to_string(k);
		avoid.insert(name);
		ob.skolems.insert(name);
		Poly c = Poly::constant(name);
		Formula ne = Formula::ne(Poly::fapp(c), substitute(live[i]->definition, {{"x", c}}));
		if (live[i]->gamma.is_true())
			ob.negation_constraints.push_back(ne);
		else
			ob.negation_constraints.push_back(
				simplify(Formula::disj({Formula::negate(live[i]->gamma), ne})));
	}
	return ob;
}

static std::set<std::string> problem_symbols(const Problem &p)
{
	std::set<std::string> out = p.declared_constants;
	for (const auto &a : p.axioms)
		for_each_poly(a, [&](const Poly &q) {
			auto v = variables(q);
			out.insert(v.begin(), v.end());
			auto c = constants(q);
			out.insert(c.begin(), c.end());
		});
	return out;
}

static SolvedForm solve_with(const Problem &problem, const Template &t)
{
	auto app = apply_template(problem.axioms, t);
	auto params = t.params();
	if (has_quantifier(app.side))
		throw unsupported_side_condition("side condition is not ground after substitution: " +
		                                 to_string(app.side));
	for (const auto &v : free_variables(app.side))
		if (std::find(params.begin(), params.end(), v) == params.end())
			throw unsupported_side_condition("side condition mentions variable " + v);
	auto system = extract_coefficient_system(app.residuals, app.quantified_vars);
	auto sols = solve_parameter_system(system, params);
	SolvedForm sf;
	for (auto &s : sols) {
		s.residual_constraints = simplify(substitute(app.side, s.assignment));
		if (s.residual_constraints.is_false())
			continue;
		SolvedBranch b = lagrange_eliminate(s, t);
		bool dup = std::any_of(sf.branches.begin(), sf.branches.end(), [&](const SolvedBranch &o) {
			return o.definition == b.definition && canonical_key(o.gamma) == canonical_key(b.gamma);
		});
		if (!dup)
			sf.branches.push_back(std::move(b));
	}
	std::sort(sf.branches.begin(), sf.branches.end(), [](const SolvedBranch &x, const SolvedBranch &y) {
		if (x.definition == y.definition)
			return canonical_key(x.gamma) < canonical_key(y.gamma);
		return y.definition < x.definition;
	});
	if (sf.branches.empty())
		sf.branches.push_back({Formula::bottom(), Poly()});
	return sf;
}

SynthesisResult synthesize(const Problem &problem, std::optional<TemplateKind> only)
{
	std::vector<TemplateKind> kinds;
	if (only)
		kinds = {*only};
	else
		kinds = {TemplateKind::Constant, TemplateKind::Linear, TemplateKind::QuadMonomial,
		         TemplateKind::Quadratic};
	auto avoid = problem_symbols(problem);
	SynthesisResult res;
	bool side_failure = false;
	for (auto k : kinds) {
		TemplateAttempt at;
		at.kind = k;
		try {
			at.form = solve_with(problem, make_template(k, avoid));
			at.solved = true;
			at.verified = verify_candidate(problem.axioms, at.form);
			if (!at.verified)
				at.note = "candidate failed verification";
		} catch (const unsupported_side_condition &e) {
			side_failure = true;
			at.note = e.what();
		} catch (const system_too_hard &e) {
			at.note = e.what();
		}
		res.attempts.push_back(std::move(at));
	}
	const TemplateAttempt *chosen = nullptr;
	for (const auto &a : res.attempts)
		if (a.solved && a.verified)
			chosen = &a;
	if (!chosen) {
		std::string msg = "no template produced a verified candidate";
		for (const auto &a : res.attempts)
			msg += std::string("; ") + to_string(a.kind) + ": " + a.note;
		if (side_failure)
			throw unsupported_side_condition(msg);
		throw system_too_hard(msg);
	}
	res.form = chosen->form;
	res.used = chosen->kind;
	std::string key = chosen->form.describe();
	for (const auto &a : res.attempts)
		if (a.solved && a.verified && a.form.describe() == key) {
			res.used = a.kind;
			break;
		}
	return res;
}

} // namespace feq
