// SPDX-License-Identifier: Apache-2.0

#include "feq/formula.hh"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace feq {

const char *to_string(Rel r)
{
	switch (r) {
	case Rel::Eq: return "=";
	case Rel::Ne: return "!=";
	case Rel::Le: return "<=";
	case Rel::Lt: return "<";
	}
	return "?";
}

struct Formula::Node {
	Kind kind;
	Poly poly;
	Rel rel = Rel::Eq;
	std::vector<Formula> kids;
	std::vector<std::string> vars;
};

Formula Formula::top()
{
	static const Formula t(std::make_shared<const Node>(Node{Kind::True, {}, Rel::Eq, {}, {}}));
	return t;
}

Formula Formula::bottom()
{
	static const Formula t(std::make_shared<const Node>(Node{Kind::False, {}, Rel::Eq, {}, {}}));
	return t;
}

Formula Formula::cmp(const Poly &lhs, Rel rel, const Poly &rhs)
{
	return Formula(std::make_shared<const Node>(Node{Kind::Cmp, lhs - rhs, rel, {}, {}}));
}

Formula Formula::negate(Formula f)
{
	return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, Rel::Eq, {std::move(f)}, {}}));
}

Formula Formula::conj(std::vector<Formula> fs)
{
	return Formula(std::make_shared<const Node>(Node{Kind::And, {}, Rel::Eq, std::move(fs), {}}));
}

Formula Formula::disj(std::vector<Formula> fs)
{
	return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, Rel::Eq, std::move(fs), {}}));
}

Formula Formula::implies(Formula a, Formula b)
{
	return Formula(std::make_shared<const Node>(
		Node{Kind::Implies, {}, Rel::Eq, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::forall(std::vector<std::string> vars, Formula body)
{
	return Formula(std::make_shared<const Node>(
		Node{Kind::Forall, {}, Rel::Eq, {std::move(body)}, std::move(vars)}));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body)
{
	return Formula(std::make_shared<const Node>(
		Node{Kind::Exists, {}, Rel::Eq, {std::move(body)}, std::move(vars)}));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Poly &Formula::poly() const
{
	if (node_->kind != Kind::Cmp)
		throw std::logic_error("poly() on a non-comparison formula");
	return node_->poly;
}

Rel Formula::rel() const { return node_->rel; }
const std::vector<Formula> &Formula::children() const { return node_->kids; }
const Formula &Formula::body() const { return node_->kids.at(0); }
const std::vector<std::string> &Formula::vars() const { return node_->vars; }

bool operator==(const Formula &a, const Formula &b)
{
	if (a.node_ == b.node_)
		return true;
	if (a.kind() != b.kind())
		return false;
	switch (a.kind()) {
	case Formula::Kind::True:
	case Formula::Kind::False:
		return true;
	case Formula::Kind::Cmp:
		return a.rel() == b.rel() && a.poly() == b.poly();
	default:
		return a.vars() == b.vars() && a.children() == b.children();
	}
}

// ------------------------------------------------------------ traversal

void for_each_poly(const Formula &f, const std::function<void(const Poly &)> &fn)
{
	if (f.kind() == Formula::Kind::Cmp) {
		fn(f.poly());
		return;
	}
	for (const auto &k : f.children())
		for_each_poly(k, fn);
}

Formula map_polys(const Formula &f, const std::function<Poly(const Poly &)> &fn)
{
	using K = Formula::Kind;
	switch (f.kind()) {
	case K::True:
	case K::False:
		return f;
	case K::Cmp:
		return Formula::cmp(fn(f.poly()), f.rel());
	case K::Not:
		return Formula::negate(map_polys(f.body(), fn));
	case K::And:
	case K::Or: {
		std::vector<Formula> ks;
		for (const auto &k : f.children())
			ks.push_back(map_polys(k, fn));
		return f.kind() == K::And ? Formula::conj(std::move(ks)) : Formula::disj(std::move(ks));
	}
	case K::Implies:
		return Formula::implies(map_polys(f.children()[0], fn), map_polys(f.children()[1], fn));
	case K::Forall:
		return Formula::forall(f.vars(), map_polys(f.body(), fn));
	case K::Exists:
		return Formula::exists(f.vars(), map_polys(f.body(), fn));
	}
	return f;
}

static void free_vars(const Formula &f, std::set<std::string> &bound, std::set<std::string> &out)
{
	if (f.kind() == Formula::Kind::Cmp) {
		for (const auto &v : variables(f.poly()))
			if (!bound.count(v))
				out.insert(v);
		return;
	}
	if (f.is_quantifier()) {
		std::vector<std::string> added;
		for (const auto &v : f.vars())
			if (bound.insert(v).second)
				added.push_back(v);
		free_vars(f.body(), bound, out);
		for (const auto &v : added)
			bound.erase(v);
		return;
	}
	for (const auto &k : f.children())
		free_vars(k, bound, out);
}

std::set<std::string> free_variables(const Formula &f)
{
	std::set<std::string> bound, out;
	free_vars(f, bound, out);
	return out;
}

std::set<std::string> constants(const Formula &f)
{
	std::set<std::string> out;
	for_each_poly(f, [&](const Poly &p) {
		auto cs = constants(p);
		out.insert(cs.begin(), cs.end());
	});
	return out;
}

bool has_quantifier(const Formula &f)
{
	if (f.is_quantifier())
		return true;
	if (f.kind() == Formula::Kind::Cmp)
		return false;
	return std::any_of(f.children().begin(), f.children().end(), has_quantifier);
}

bool has_existential(const Formula &f)
{
	if (f.kind() == Formula::Kind::Exists)
		return true;
	if (f.kind() == Formula::Kind::Cmp)
		return false;
	return std::any_of(f.children().begin(), f.children().end(), has_existential);
}

bool is_ground(const Formula &f)
{
	bool ground = !has_quantifier(f);
	if (ground)
		for_each_poly(f, [&](const Poly &p) { ground &= is_ground(p); });
	return ground;
}

std::vector<Formula> conjuncts(const Formula &f)
{
	if (f.kind() != Formula::Kind::And)
		return {f};
	std::vector<Formula> out;
	for (const auto &k : f.children()) {
		auto sub = conjuncts(k);
		out.insert(out.end(), sub.begin(), sub.end());
	}
	return out;
}

unsigned formula_size(const Formula &f)
{
	if (f.kind() == Formula::Kind::Cmp)
		return 1 + term_size(f.poly());
	unsigned s = 1;
	for (const auto &k : f.children())
		s += formula_size(k);
	return s;
}

// ----------------------------------------------------------- simplify

static bool holds(Rel r, const Q &v)
{
	switch (r) {
	case Rel::Eq: return sgn(v) == 0;
	case Rel::Ne: return sgn(v) != 0;
	case Rel::Le: return sgn(v) <= 0;
	case Rel::Lt: return sgn(v) < 0;
	}
	return false;
}

static Formula negate_atom(const Formula &f)
{
	switch (f.rel()) {
	case Rel::Eq: return Formula::cmp(f.poly(), Rel::Ne);
	case Rel::Ne: return Formula::cmp(f.poly(), Rel::Eq);
	case Rel::Le: return Formula::cmp(-f.poly(), Rel::Lt);
	case Rel::Lt: return Formula::cmp(-f.poly(), Rel::Le);
	}
	return f;
}

Formula simplify(const Formula &f)
{
	using K = Formula::Kind;
	switch (f.kind()) {
	case K::True:
	case K::False:
		return f;
	case K::Cmp:
		if (auto v = f.poly().constant_value())
			return holds(f.rel(), *v) ? Formula::top() : Formula::bottom();
		return f;
	case K::Not: {
		Formula b = simplify(f.body());
		if (b.is_true())
			return Formula::bottom();
		if (b.is_false())
			return Formula::top();
		if (b.kind() == K::Not)
			return b.body();
		if (b.kind() == K::Cmp)
			return negate_atom(b);
		return Formula::negate(b);
	}
	case K::And:
	case K::Or: {
		bool is_and = f.kind() == K::And;
		std::vector<Formula> ks;
		for (const auto &k0 : f.children()) {
			Formula k = simplify(k0);
			if (is_and ? k.is_true() : k.is_false())
				continue;
			if (is_and ? k.is_false() : k.is_true())
				return k;
			auto push = [&](const Formula &g) {
				if (std::find(ks.begin(), ks.end(), g) == ks.end())
					ks.push_back(g);
			};
			if (k.kind() == f.kind())
				for (const auto &g : k.children())
					push(g);
			else
				push(k);
		}
		if (ks.empty())
			return is_and ? Formula::top() : Formula::bottom();
		if (ks.size() == 1)
			return ks[0];
		return is_and ? Formula::conj(std::move(ks)) : Formula::disj(std::move(ks));
	}
	case K::Implies: {
		Formula a = simplify(f.children()[0]), b = simplify(f.children()[1]);
		if (a.is_true())
			return b;
		if (a.is_false() || b.is_true())
			return Formula::top();
		if (b.is_false())
			return simplify(Formula::negate(a));
		return Formula::implies(a, b);
	}
	case K::Forall:
	case K::Exists: {
		Formula b = simplify(f.body());
		if (b.is_true() || b.is_false())
			return b;
		auto fv = free_variables(b);
		std::vector<std::string> vs;
		for (const auto &v : f.vars())
			if (fv.count(v) && std::find(vs.begin(), vs.end(), v) == vs.end())
				vs.push_back(v);
		if (vs.empty())
			return b;
		return f.kind() == K::Forall ? Formula::forall(vs, b) : Formula::exists(vs, b);
	}
	}
	return f;
}

// --------------------------------------------------------- substitution

static std::string fresh_name(const std::string &base, const std::set<std::string> &avoid)
{
	for (int i = 1;; i++) {
		std::string n = base + "_" + std::to_string(i);
		if (!avoid.count(n))
			return n;
	}
}

Formula substitute(const Formula &f, const Subst &sigma)
{
	using K = Formula::Kind;
	if (sigma.empty())
		return f;
	switch (f.kind()) {
	case K::True:
	case K::False:
		return f;
	case K::Cmp:
		return Formula::cmp(substitute(f.poly(), sigma), f.rel());
	case K::Forall:
	case K::Exists: {
		Subst inner = sigma;
		for (const auto &v : f.vars())
			inner.erase(v);
		std::set<std::string> image_vars;
		for (const auto &[k, p] : inner) {
			auto vs = variables(p);
			image_vars.insert(vs.begin(), vs.end());
		}
		std::vector<std::string> vars = f.vars();
		Subst rename;
		std::set<std::string> avoid = image_vars;
		auto fv = free_variables(f.body());
		avoid.insert(fv.begin(), fv.end());
		for (auto &v : vars)
			if (image_vars.count(v)) {
				std::string n = fresh_name(v, avoid);
				avoid.insert(n);
				rename[v] = Poly::var(n);
				v = n;
			}
		Formula body = rename.empty() ? f.body() : substitute(f.body(), rename);
		body = substitute(body, inner);
		return f.kind() == K::Forall ? Formula::forall(vars, body) : Formula::exists(vars, body);
	}
	default:
		break;
	}
	std::vector<Formula> ks;
	for (const auto &k : f.children())
		ks.push_back(substitute(k, sigma));
	switch (f.kind()) {
	case K::Not: return Formula::negate(ks[0]);
	case K::And: return Formula::conj(std::move(ks));
	case K::Or: return Formula::disj(std::move(ks));
	case K::Implies: return Formula::implies(ks[0], ks[1]);
	default: return f;
	}
}

Formula instantiate(const Formula &f, const Subst &sigma)
{
	if (f.kind() != Formula::Kind::Forall)
		return simplify(substitute(f, sigma));
	Subst own;
	std::vector<std::string> vars;
	for (const auto &v : f.vars()) {
		auto it = sigma.find(v);
		if (it != sigma.end())
			own.emplace(v, it->second);
		else
			vars.push_back(v);
	}
	std::set<std::string> introduced;
	for (const auto &[k, p] : own) {
		auto vs = variables(p);
		introduced.insert(vs.begin(), vs.end());
	}
	for (const auto &v : introduced)
		if (std::find(vars.begin(), vars.end(), v) == vars.end())
			vars.push_back(v);
	Formula body = substitute(f.body(), own);
	return simplify(Formula::forall(std::move(vars), body));
}

// ------------------------------------------------------- f arguments

static bool has_top_bound_var(const Poly &p, const std::set<std::string> &bound)
{
	for (const auto &a : top_atoms(p))
		if (a.is_var() && bound.count(a.name()))
			return true;
	return false;
}

static void collect_args(const Poly &p, const std::set<std::string> &bound, std::vector<Poly> &out)
{
	for (const auto &m : p.terms())
		for (const auto &[a, e] : m.powers) {
			if (!a.is_fapp())
				continue;
			if (has_top_bound_var(a.arg(), bound) &&
			    std::find(out.begin(), out.end(), a.arg()) == out.end())
				out.push_back(a.arg());
			collect_args(a.arg(), bound, out);
		}
}

static void collect_in(const Formula &f, std::set<std::string> &bound, std::vector<Poly> &out)
{
	if (f.kind() == Formula::Kind::Cmp) {
		collect_args(f.poly(), bound, out);
		return;
	}
	if (f.is_quantifier()) {
		std::vector<std::string> added;
		for (const auto &v : f.vars())
			if (bound.insert(v).second)
				added.push_back(v);
		collect_in(f.body(), bound, out);
		for (const auto &v : added)
			bound.erase(v);
		return;
	}
	for (const auto &k : f.children())
		collect_in(k, bound, out);
}

std::vector<Poly> collect_f_arguments(const Formula &f)
{
	std::set<std::string> bound;
	std::vector<Poly> out;
	collect_in(f, bound, out);
	return out;
}

// -------------------------------------------------------- canonical key

static Poly normalize_atom_poly(const Poly &p, Rel r)
{
	if (p.is_zero())
		return p;
	Q lc = p.leading_coefficient();
	if (r == Rel::Eq || r == Rel::Ne)
		return p.scaled(1 / lc);
	return p.scaled(1 / abs(lc));
}

static void key_of(const Formula &f, Subst &ren, int &counter, std::ostringstream &os)
{
	using K = Formula::Kind;
	switch (f.kind()) {
	case K::True: os << "T"; return;
	case K::False: os << "F"; return;
	case K::Cmp:
		os << "[" << to_string(normalize_atom_poly(substitute(f.poly(), ren), f.rel()))
		   << " " << to_string(f.rel()) << " 0]";
		return;
	case K::Forall:
	case K::Exists: {
		Subst saved = ren;
		os << (f.kind() == K::Forall ? "(A" : "(E");
		for (const auto &v : f.vars()) {
			std::string n = "_v" + std::to_string(counter++);
			ren[v] = Poly::var(n);
			os << " " << n;
		}
		os << ". ";
		key_of(f.body(), ren, counter, os);
		os << ")";
		ren = saved;
		return;
	}
	case K::Not: os << "(not "; break;
	case K::And: os << "(and "; break;
	case K::Or: os << "(or "; break;
	case K::Implies: os << "(=> "; break;
	}
	for (const auto &k : f.children()) {
		key_of(k, ren, counter, os);
		os << " ";
	}
	os << ")";
}

std::string canonical_key(const Formula &f)
{
	std::ostringstream os;
	Subst ren;
	int counter = 0;
	key_of(f, ren, counter, os);
	return os.str();
}

// ----------------------------------------------------------- printing

static void print(const Formula &f, std::ostringstream &os);

static void print_child(const Formula &f, std::ostringstream &os)
{
	using K = Formula::Kind;
	bool atomic = f.kind() == K::Cmp || f.kind() == K::True || f.kind() == K::False ||
	              f.kind() == K::Not;
	if (!atomic)
		os << "(";
	print(f, os);
	if (!atomic)
		os << ")";
}

static void print(const Formula &f, std::ostringstream &os)
{
	using K = Formula::Kind;
	switch (f.kind()) {
	case K::True: os << "true"; return;
	case K::False: os << "false"; return;
	case K::Cmp: {
		std::vector<Monomial> pos, neg;
		for (const auto &m : f.poly().terms())
			(sgn(m.coeff) > 0 ? pos : neg).push_back(m);
		for (auto &m : neg)
			m.coeff = -m.coeff;
		os << to_string(Poly::from_monomials(pos)) << " " << to_string(f.rel()) << " "
		   << to_string(Poly::from_monomials(neg));
		return;
	}
	case K::Not:
		os << "not ";
		print_child(f.body(), os);
		return;
	case K::And:
	case K::Or: {
		const char *op = f.kind() == K::And ? " and " : " or ";
		for (size_t i = 0; i < f.children().size(); i++) {
			if (i)
				os << op;
			print_child(f.children()[i], os);
		}
		return;
	}
	case K::Implies:
		print_child(f.children()[0], os);
		os << " -> ";
		print_child(f.children()[1], os);
		return;
	case K::Forall:
	case K::Exists:
		os << (f.kind() == K::Forall ? "forall" : "exists");
		for (const auto &v : f.vars())
			os << " " << v;
		os << ". ";
		print(f.body(), os);
		return;
	}
}

std::string to_string(const Formula &f)
{
	std::ostringstream os;
	print(f, os);
	return os.str();
}

} // namespace feq
