// SPDX-License-Identifier: Apache-2.0

#include "feq/poly.hh"
#include "feq/errors.hh"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace feq {

Q make_q(long num, long den)
{
	Q q(num, den);
	q.canonicalize();
	return q;
}

Q parse_q(std::string_view text)
{
	std::string s(text);
	if (s.empty())
		throw std::invalid_argument("empty number");
	auto dot = s.find('.');
	if (dot != std::string::npos) {
		std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
		bool neg = !whole.empty() && whole[0] == '-';
		if (neg)
			whole.erase(0, 1);
		if (whole.empty())
			whole = "0";
		for (char c : whole + frac)
			if (c < '0' || c > '9')
				throw std::invalid_argument("bad decimal literal: " + s);
		mpz_class num(whole + frac), den(1);
		for (size_t i = 0; i < frac.size(); i++)
			den *= 10;
		Q q(num, den);
		q.canonicalize();
		return neg ? Q(-q) : q;
	}
	Q q;
	if (q.set_str(s, 10) != 0)
		throw std::invalid_argument("bad rational literal: " + s);
	if (q.get_den() == 0)
		throw std::invalid_argument("zero denominator: " + s);
	q.canonicalize();
	return q;
}

std::string to_string(const Q &q)
{
	return q.get_str();
}

bool rational_sqrt(const Q &q, Q &root)
{
	if (sgn(q) < 0)
		return false;
	mpz_class n = q.get_num(), d = q.get_den();
	if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
		return false;
	mpz_class rn = sqrt(n), rd = sqrt(d);
	root = Q(rn, rd);
	root.canonicalize();
	return true;
}

// ---------------------------------------------------------------- atoms

Atom::Atom(Kind k, std::string name, std::shared_ptr<const Poly> arg)
: kind_(k), name_(std::move(name)), arg_(std::move(arg)) {}

Atom Atom::var(std::string name) { return Atom(Kind::Var, std::move(name), nullptr); }
Atom Atom::constant(std::string name) { return Atom(Kind::Const, std::move(name), nullptr); }
Atom Atom::fapp(Poly arg)
{
	return Atom(Kind::FApp, {}, std::make_shared<const Poly>(std::move(arg)));
}

std::strong_ordering compare(const Atom &a, const Atom &b)
{
	if (a.kind_ != b.kind_)
		return a.kind_ <=> b.kind_;
	if (a.kind_ != Atom::Kind::FApp)
		return a.name_.compare(b.name_) <=> 0;
	if (a.arg_ == b.arg_)
		return std::strong_ordering::equal;
	return compare(*a.arg_, *b.arg_);
}

unsigned total_degree(const Powers &p)
{
	unsigned d = 0;
	for (const auto &[a, e] : p)
		d += e;
	return d;
}

std::strong_ordering compare_powers(const Powers &a, const Powers &b)
{
	unsigned da = total_degree(a), db = total_degree(b);
	if (da != db)
		return da <=> db;
	size_t n = std::min(a.size(), b.size());
	for (size_t i = 0; i < n; i++) {
		auto c = compare(a[i].first, b[i].first);
		if (c != 0)
			return 0 <=> c; // the earlier atom makes the monomial heavier
		if (a[i].second != b[i].second)
			return a[i].second <=> b[i].second;
	}
	return a.size() <=> b.size();
}

static Powers mul_powers(const Powers &a, const Powers &b)
{
	Powers r;
	r.reserve(a.size() + b.size());
	size_t i = 0, j = 0;
	while (i < a.size() && j < b.size()) {
		auto c = compare(a[i].first, b[j].first);
		if (c < 0)
			r.push_back(a[i++]);
		else if (c > 0)
			r.push_back(b[j++]);
		else {
			r.emplace_back(a[i].first, a[i].second + b[j].second);
			i++, j++;
		}
	}
	r.insert(r.end(), a.begin() + i, a.end());
	r.insert(r.end(), b.begin() + j, b.end());
	return r;
}

// ---------------------------------------------------------------- polys

Poly::Poly(const Q &c)
{
	if (sgn(c) != 0)
		terms_.push_back({c, {}});
}

Poly Poly::var(const std::string &name) { return atom(Atom::var(name)); }
Poly Poly::constant(const std::string &name) { return atom(Atom::constant(name)); }
Poly Poly::fapp(const Poly &arg) { return atom(Atom::fapp(arg)); }

Poly Poly::atom(const Atom &a, unsigned exp)
{
	Poly p;
	if (exp == 0)
		return Poly(1);
	p.terms_.push_back({Q(1), {{a, exp}}});
	return p;
}

Poly Poly::from_monomials(std::vector<Monomial> ms)
{
	std::sort(ms.begin(), ms.end(), [](const Monomial &x, const Monomial &y) {
		return compare_powers(x.powers, y.powers) > 0;
	});
	Poly p;
	for (auto &m : ms) {
		if (!p.terms_.empty() && compare_powers(p.terms_.back().powers, m.powers) == 0) {
			p.terms_.back().coeff += m.coeff;
			if (sgn(p.terms_.back().coeff) == 0)
				p.terms_.pop_back();
		} else if (sgn(m.coeff) != 0) {
			p.terms_.push_back(std::move(m));
		}
	}
	return p;
}

bool Poly::is_constant() const
{
	return terms_.empty() || (terms_.size() == 1 && terms_[0].powers.empty());
}

std::optional<Q> Poly::constant_value() const
{
	if (terms_.empty())
		return Q(0);
	if (is_constant())
		return terms_[0].coeff;
	return std::nullopt;
}

Q Poly::leading_coefficient() const
{
	return terms_.empty() ? Q(0) : terms_.front().coeff;
}

unsigned Poly::degree() const
{
	return terms_.empty() ? 0 : total_degree(terms_.front().powers);
}

Poly Poly::operator-() const
{
	Poly r = *this;
	for (auto &m : r.terms_)
		m.coeff = -m.coeff;
	return r;
}

Poly &Poly::operator+=(const Poly &o)
{
	std::vector<Monomial> out;
	out.reserve(terms_.size() + o.terms_.size());
	size_t i = 0, j = 0;
	while (i < terms_.size() && j < o.terms_.size()) {
		auto c = compare_powers(terms_[i].powers, o.terms_[j].powers);
		if (c > 0)
			out.push_back(std::move(terms_[i++]));
		else if (c < 0)
			out.push_back(o.terms_[j++]);
		else {
			Q s = terms_[i].coeff + o.terms_[j].coeff;
			if (sgn(s) != 0)
				out.push_back({s, std::move(terms_[i].powers)});
			i++, j++;
		}
	}
	for (; i < terms_.size(); i++)
		out.push_back(std::move(terms_[i]));
	for (; j < o.terms_.size(); j++)
		out.push_back(o.terms_[j]);
	terms_ = std::move(out);
	return *this;
}

Poly &Poly::operator-=(const Poly &o)
{
	return *this += -o;
}

Poly operator*(const Poly &a, const Poly &b)
{
	if (a.is_zero() || b.is_zero())
		return {};
	std::vector<Monomial> ms;
	ms.reserve(a.terms_.size() * b.terms_.size());
	for (const auto &x : a.terms_)
		for (const auto &y : b.terms_)
			ms.push_back({x.coeff * y.coeff, mul_powers(x.powers, y.powers)});
	return Poly::from_monomials(std::move(ms));
}

Poly &Poly::operator*=(const Poly &o)
{
	return *this = *this * o;
}

Poly Poly::pow(unsigned n) const
{
	Poly r(1), base = *this;
	while (n) {
		if (n & 1)
			r *= base;
		n >>= 1;
		if (n)
			base *= base;
	}
	return r;
}

Poly Poly::scaled(const Q &k) const
{
	if (sgn(k) == 0)
		return {};
	Poly r = *this;
	for (auto &m : r.terms_)
		m.coeff *= k;
	return r;
}

std::strong_ordering compare(const Poly &a, const Poly &b)
{
	size_t n = std::min(a.terms_.size(), b.terms_.size());
	for (size_t i = 0; i < n; i++) {
		auto c = compare_powers(a.terms_[i].powers, b.terms_[i].powers);
		if (c != 0)
			return c;
		int k = cmp(a.terms_[i].coeff, b.terms_[i].coeff);
		if (k != 0)
			return k <=> 0;
	}
	return a.terms_.size() <=> b.terms_.size();
}

// ---------------------------------------------------------- rewriting

Poly map_atoms(const Poly &p, const std::function<Poly(const Atom &)> &fn)
{
	Poly r;
	for (const auto &m : p.terms()) {
		Poly t(m.coeff);
		for (const auto &[a, e] : m.powers)
			t *= fn(a).pow(e);
		r += t;
	}
	return r;
}

Poly substitute(const Poly &p, const Subst &sigma)
{
	if (sigma.empty())
		return p;
	return map_atoms(p, [&](const Atom &a) -> Poly {
		switch (a.kind()) {
		case Atom::Kind::Var: {
			auto it = sigma.find(a.name());
			return it == sigma.end() ? Poly::atom(a) : it->second;
		}
		case Atom::Kind::Const:
			return Poly::atom(a);
		case Atom::Kind::FApp:
			return Poly::fapp(substitute(a.arg(), sigma));
		}
		return Poly::atom(a);
	});
}

Poly replace_fapps(const Poly &p, const std::function<Poly(const Poly &)> &fn)
{
	return map_atoms(p, [&](const Atom &a) -> Poly {
		if (!a.is_fapp())
			return Poly::atom(a);
		return fn(replace_fapps(a.arg(), fn));
	});
}

Poly substitute_atom(const Poly &p, const Atom &target, const Poly &value)
{
	return map_atoms(p, [&](const Atom &a) {
		return a == target ? value : Poly::atom(a);
	});
}

Q evaluate(const Poly &p, const std::map<std::string, Q> &point, const FunctionInterp &f)
{
	Q sum(0);
	for (const auto &m : p.terms()) {
		Q t = m.coeff;
		for (const auto &[a, e] : m.powers) {
			Q v = a.is_fapp() ? f(evaluate(a.arg(), point, f)) : point.at(a.name());
			for (unsigned i = 0; i < e; i++)
				t *= v;
		}
		sum += t;
	}
	sum.canonicalize();
	return sum;
}

CoefficientMap coefficients_wrt(const Poly &p, const std::set<std::string> &vars)
{
	std::vector<std::string> order(vars.begin(), vars.end());
	std::map<std::vector<unsigned>, std::vector<Monomial>> parts;
	for (const auto &m : p.terms()) {
		std::vector<unsigned> exps(order.size(), 0);
		Powers rest;
		for (const auto &[a, e] : m.powers) {
			if (a.is_fapp()) {
				for (const auto &v : variables(a.arg()))
					if (vars.count(v))
						throw vars_under_f("variable " + v + " occurs inside " + to_string(a));
				rest.emplace_back(a, e);
			} else if (a.is_var() && vars.count(a.name())) {
				auto idx = std::lower_bound(order.begin(), order.end(), a.name()) - order.begin();
				exps[idx] = e;
			} else {
				rest.emplace_back(a, e);
			}
		}
		parts[exps].push_back({m.coeff, std::move(rest)});
	}
	CoefficientMap out;
	for (auto &[k, ms] : parts) {
		Poly c = Poly::from_monomials(std::move(ms));
		if (!c.is_zero())
			out.emplace(k, std::move(c));
	}
	return out;
}

Poly assemble(const CoefficientMap &coeffs, const std::set<std::string> &vars)
{
	std::vector<std::string> order(vars.begin(), vars.end());
	Poly r;
	for (const auto &[exps, c] : coeffs) {
		Poly t = c;
		for (size_t i = 0; i < order.size(); i++)
			t *= Poly::var(order[i]).pow(exps[i]);
		r += t;
	}
	return r;
}

// ------------------------------------------------------------ queries

std::set<Atom> top_atoms(const Poly &p)
{
	std::set<Atom> out;
	for (const auto &m : p.terms())
		for (const auto &[a, e] : m.powers)
			out.insert(a);
	return out;
}

static void walk_atoms(const Poly &p, const std::function<void(const Atom &)> &fn)
{
	for (const auto &m : p.terms())
		for (const auto &[a, e] : m.powers) {
			fn(a);
			if (a.is_fapp())
				walk_atoms(a.arg(), fn);
		}
}

std::set<std::string> variables(const Poly &p)
{
	std::set<std::string> out;
	walk_atoms(p, [&](const Atom &a) { if (a.is_var()) out.insert(a.name()); });
	return out;
}

std::set<std::string> constants(const Poly &p)
{
	std::set<std::string> out;
	walk_atoms(p, [&](const Atom &a) { if (a.is_const()) out.insert(a.name()); });
	return out;
}

bool contains_fapp(const Poly &p)
{
	for (const auto &m : p.terms())
		for (const auto &[a, e] : m.powers)
			if (a.is_fapp())
				return true;
	return false;
}

bool mentions_var(const Poly &p, const std::string &name)
{
	bool found = false;
	walk_atoms(p, [&](const Atom &a) { found |= a.is_var() && a.name() == name; });
	return found;
}

bool is_ground(const Poly &p)
{
	bool ground = true;
	walk_atoms(p, [&](const Atom &a) { ground &= !a.is_var(); });
	return ground;
}

unsigned degree_in(const Poly &p, const Atom &target)
{
	unsigned d = 0;
	for (const auto &m : p.terms())
		for (const auto &[a, e] : m.powers)
			if (a == target)
				d = std::max(d, e);
	return d;
}

static std::optional<Powers> div_powers(const Powers &num, const Powers &den)
{
	Powers r;
	size_t j = 0;
	for (const auto &[a, e] : num) {
		if (j < den.size() && den[j].first == a) {
			if (den[j].second > e)
				return std::nullopt;
			if (den[j].second < e)
				r.emplace_back(a, e - den[j].second);
			j++;
		} else {
			if (j < den.size() && compare(den[j].first, a) < 0)
				return std::nullopt;
			r.emplace_back(a, e);
		}
	}
	if (j != den.size())
		return std::nullopt;
	return r;
}

std::optional<Poly> divide_exact(const Poly &p, const Poly &d)
{
	if (d.is_zero())
		return std::nullopt;
	const Monomial &lead = d.terms().front();
	Poly r = p, q;
	while (!r.is_zero()) {
		const Monomial &lt = r.terms().front();
		auto pw = div_powers(lt.powers, lead.powers);
		if (!pw)
			return std::nullopt;
		Poly t = Poly::from_monomials({{lt.coeff / lead.coeff, *pw}});
		q += t;
		r -= t * d;
	}
	return q;
}

Poly monic(const Poly &p)
{
	if (p.is_zero())
		return p;
	Q lc = p.leading_coefficient();
	return p.scaled(1 / lc);
}

unsigned term_size(const Poly &p)
{
	if (p.is_zero())
		return 1;
	unsigned size = 0;
	for (const auto &m : p.terms()) {
		unsigned factors = 0, s = 0;
		for (const auto &[a, e] : m.powers) {
			unsigned as = a.is_fapp() ? 1 + term_size(a.arg()) : 1;
			s += as * e;
			factors += e;
		}
		bool unit = abs(m.coeff) == 1 && !m.powers.empty();
		if (!unit) {
			s += 1;
			factors += 1;
		} else if (sgn(m.coeff) < 0) {
			s += 1;
		}
		size += s + (factors > 1 ? factors - 1 : 0);
	}
	return size + static_cast<unsigned>(p.terms().size() - 1);
}

// ----------------------------------------------------------- printing

std::string to_string(const Atom &a)
{
	if (a.is_fapp())
		return "f(" + to_string(a.arg()) + ")";
	return a.name();
}

std::string to_string(const Poly &p)
{
	if (p.is_zero())
		return "0";
	std::ostringstream os;
	bool first = true;
	for (const auto &m : p.terms()) {
		Q c = m.coeff;
		if (first) {
			if (sgn(c) < 0) {
				os << "-";
				c = -c;
			}
		} else {
			os << (sgn(c) < 0 ? " - " : " + ");
			c = abs(c);
		}
		first = false;
		bool need_star = false;
		if (m.powers.empty() || c != 1) {
			os << to_string(c);
			need_star = true;
		}
		for (const auto &[a, e] : m.powers) {
			if (need_star)
				os << "*";
			os << to_string(a);
			if (e > 1)
				os << "^" << e;
			need_star = true;
		}
	}
	return os.str();
}

} // namespace feq
