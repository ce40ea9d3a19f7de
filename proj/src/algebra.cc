// SPDX-License-Identifier: Apache-2.0

#include "feq/algebra.hh"

#include <algorithm>

namespace feq {

Poly replace_atom(const Poly &p, const Atom &a, const Poly &value)
{
	return map_atoms(p, [&](const Atom &b) -> Poly {
		if (b == a)
			return value;
		if (b.is_fapp())
			return Poly::fapp(replace_atom(b.arg(), a, value));
		return Poly::atom(b);
	});
}

static bool occurs_in_args(const Poly &p, const Atom &u)
{
	for (const auto &a : top_atoms(p)) {
		if (!a.is_fapp())
			continue;
		const auto inner = top_atoms(a.arg());
		if (inner.count(u) || occurs_in_args(a.arg(), u))
			return true;
	}
	return false;
}

std::optional<Poly> solve_linear_for(const Poly &eq, const Atom &u)
{
	if (degree_in(eq, u) != 1 || occurs_in_args(eq, u))
		return std::nullopt;
	Q k = 0;
	std::vector<Monomial> rest;
	for (const auto &m : eq.terms()) {
		bool has = std::any_of(m.powers.begin(), m.powers.end(),
		                       [&](const auto &pe) { return pe.first == u; });
		if (!has) {
			rest.push_back(m);
			continue;
		}
		if (m.powers.size() != 1)
			return std::nullopt;
		k += m.coeff;
	}
	if (sgn(k) == 0)
		return std::nullopt;
	return Poly::from_monomials(std::move(rest)).scaled(-1 / k);
}

Poly Elimination::apply(const Poly &p) const
{
	Poly r = p;
	for (const auto &[a, v] : assignment)
		r = replace_atom(r, a, v);
	return r;
}

const Poly *Elimination::value_of(const Atom &a) const
{
	for (const auto &[b, v] : assignment)
		if (b == a)
			return &v;
	return nullptr;
}

Elimination eliminate_linear(std::vector<Poly> eqs, const AtomPredicate &is_unknown)
{
	Elimination r;
	for (;;) {
		std::erase_if(eqs, [](const Poly &p) { return p.is_zero(); });
		for (const auto &e : eqs)
			if (e.is_constant()) {
				r.inconsistent = true;
				r.remaining = eqs;
				return r;
			}
		std::optional<std::pair<size_t, std::pair<Atom, Poly>>> pick;
		for (size_t i = 0; i < eqs.size() && !pick; i++)
			for (const auto &a : top_atoms(eqs[i])) {
				if (!is_unknown(a))
					continue;
				if (auto v = solve_linear_for(eqs[i], a)) {
					pick = {i, {a, *v}};
					break;
				}
			}
		if (!pick) {
			r.remaining = std::move(eqs);
			return r;
		}
		const auto &[u, val] = pick->second;
		for (auto &[b, v] : r.assignment)
			v = replace_atom(v, u, val);
		eqs.erase(eqs.begin() + pick->first);
		for (auto &e : eqs)
			e = replace_atom(e, u, val);
		r.assignment.emplace_back(u, val);
	}
}

std::optional<UniPoly> as_univariate(const Poly &p, const Atom &v)
{
	UniPoly c;
	for (const auto &m : p.terms()) {
		unsigned d = 0;
		if (!m.powers.empty()) {
			if (m.powers.size() != 1 || !(m.powers[0].first == v))
				return std::nullopt;
			d = m.powers[0].second;
		}
		if (c.size() <= d)
			c.resize(d + 1);
		c[d] += m.coeff;
	}
	return c;
}

namespace {

void trim(UniPoly &p)
{
	while (!p.empty() && sgn(p.back()) == 0)
		p.pop_back();
}

UniPoly derivative(const UniPoly &p)
{
	UniPoly d;
	for (size_t i = 1; i < p.size(); i++)
		d.push_back(p[i] * Q(static_cast<long>(i)));
	trim(d);
	return d;
}

UniPoly remainder(UniPoly a, const UniPoly &b)
{
	trim(a);
	while (a.size() >= b.size() && !a.empty()) {
		Q f = a.back() / b.back();
		size_t shift = a.size() - b.size();
		for (size_t i = 0; i < b.size(); i++)
			a[i + shift] -= f * b[i];
		a.pop_back();
		trim(a);
	}
	return a;
}

int sign_at_infinity(const UniPoly &p, bool negative)
{
	int s = sgn(p.back());
	if (negative && (p.size() - 1) % 2 == 1)
		s = -s;
	return s;
}

Q eval(const UniPoly &p, const Q &x)
{
	Q r = 0;
	for (size_t i = p.size(); i-- > 0;)
		r = r * x + p[i];
	return r;
}

std::vector<mpz_class> divisors(mpz_class n)
{
	n = abs(n);
	std::vector<mpz_class> out;
	for (mpz_class d = 1; d * d <= n; d++)
		if (n % d == 0) {
			out.push_back(d);
			if (d * d != n)
				out.push_back(n / d);
		}
	return out;
}

} // namespace

unsigned count_real_roots(UniPoly p)
{
	trim(p);
	if (p.size() <= 1)
		return 0;
	std::vector<UniPoly> seq{p, derivative(p)};
	while (seq.back().size() > 1) {
		UniPoly r = remainder(seq[seq.size() - 2], seq.back());
		if (r.empty())
			break;
		for (auto &c : r)
			c = -c;
		seq.push_back(std::move(r));
	}
	auto changes = [&](bool negative) {
		unsigned n = 0;
		int last = 0;
		for (const auto &s : seq) {
			int v = sign_at_infinity(s, negative);
			if (v != 0 && last != 0 && v != last)
				n++;
			if (v != 0)
				last = v;
		}
		return n;
	};
	return changes(true) - changes(false);
}

std::vector<Q> rational_roots(const UniPoly &p0, bool &exhaustive)
{
	UniPoly p = p0;
	trim(p);
	exhaustive = true;
	std::vector<Q> roots;
	if (p.size() <= 1)
		return roots;
	mpz_class l = 1;
	for (const auto &c : p)
		l = lcm(l, c.get_den());
	std::vector<mpz_class> ic;
	for (const auto &c : p) {
		Q s = c * l;
		ic.push_back(s.get_num());
	}
	size_t low = 0;
	while (ic[low] == 0)
		low++;
	if (low > 0)
		roots.push_back(0);
	static const mpz_class limit("1000000000000");
	const mpz_class &a0 = ic[low], &ad = ic.back();
	if (abs(a0) > limit || abs(ad) > limit) {
		exhaustive = false;
	} else if (low + 1 < ic.size()) {
		for (const auto &num : divisors(a0))
			for (const auto &den : divisors(ad))
				for (int s : {1, -1}) {
					Q cand(num * s, den);
					cand.canonicalize();
					if (sgn(eval(p, cand)) == 0 &&
					    std::find(roots.begin(), roots.end(), cand) == roots.end())
						roots.push_back(cand);
				}
	}
	std::sort(roots.begin(), roots.end());
	if (count_real_roots(p) != roots.size())
		exhaustive = false;
	return roots;
}

} // namespace feq
