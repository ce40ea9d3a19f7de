// SPDX-License-Identifier: Apache-2.0

#include "feq/instantiation.hh"
#include "feq/algebra.hh"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

namespace feq {

const char *to_string(InstOrigin o)
{
	switch (o) {
	case InstOrigin::PartialInst: return "PI";
	case InstOrigin::TheoryUnif: return "TU";
	case InstOrigin::FullInstFI: return "FI";
	}
	return "?";
}

SmallTermSet small_terms(const ProofObligation &ob, TermLevel level)
{
	SmallTermSet s;
	s.level = level;
	auto push = [&](const Poly &p) {
		if (std::find(s.terms.begin(), s.terms.end(), p) == s.terms.end())
			s.terms.push_back(p);
	};
	push(Poly(0));
	push(Poly(1));
	for (const auto &k : ob.skolems)
		push(Poly::constant(k));
	if (level == TermLevel::Extended) {
		for (const auto &c : ob.constants)
			push(Poly::constant(c));
		std::set<Q> coeffs;
		for (const auto &a : ob.spec)
			for_each_poly(a, [&](const Poly &p) {
				std::function<void(const Poly &)> visit = [&](const Poly &q) {
					for (const auto &m : q.terms()) {
						coeffs.insert(abs(m.coeff));
						for (const auto &[at, e] : m.powers)
							if (at.is_fapp())
								visit(at.arg());
					}
				};
				visit(p);
			});
		for (const auto &q : coeffs)
			push(Poly(q));
	}
	return s;
}

bool InstantiationBatch::add(const Formula &source, const Subst &witness)
{
	Formula f = instantiate(source, witness);
	if (f.is_true())
		return false;
	auto key = canonical_key(f);
	for (const auto &g : formulas)
		if (canonical_key(g) == key)
			return false;
	formulas.push_back(f);
	sources.push_back(source);
	witnesses.push_back(witness);
	return true;
}

InstantiationBatch partial_instantiations(const Formula &phi, const SmallTermSet &s, bool keep_original)
{
	InstantiationBatch b;
	b.origin = InstOrigin::PartialInst;
	if (keep_original)
		b.add(phi, {});
	if (phi.kind() != Formula::Kind::Forall)
		return b;
	for (const auto &v : phi.vars())
		for (const auto &t : s.terms)
			b.add(phi, {{v, t}});
	return b;
}

std::vector<Poly> fi_terms(const SmallTermSet &s)
{
	std::vector<Poly> out;
	auto push = [&](const Poly &p) {
		if (std::find(out.begin(), out.end(), p) == out.end())
			out.push_back(p);
	};
	for (const auto &t : s.terms)
		push(t);
	for (const auto &u : s.terms)
		for (const auto &v : s.terms) {
			push(u + v);
			push(u - v);
			push(u * v);
		}
	for (const auto &u : s.terms)
		push(Poly::fapp(u));
	return out;
}

InstantiationBatch full_instantiations_fi(const Formula &phi, const SmallTermSet &s, size_t budget)
{
	InstantiationBatch b;
	b.origin = InstOrigin::FullInstFI;
	if (phi.kind() != Formula::Kind::Forall || budget == 0)
		return b;
	auto terms = fi_terms(s);
	const auto &vars = phi.vars();
	size_t n = vars.size();
	for (size_t k = 1; k <= std::min<size_t>(3, n); k++) {
		// subsets of size k in lexicographic order
		std::vector<size_t> idx(k);
		for (size_t i = 0; i < k; i++)
			idx[i] = i;
		for (;;) {
			std::vector<size_t> pick(k, 0);
			for (;;) {
				Subst sigma;
				for (size_t i = 0; i < k; i++)
					sigma[vars[idx[i]]] = terms[pick[i]];
				if (b.size() >= budget) {
					b.truncated = true;
					return b;
				}
				b.add(phi, sigma);
				size_t j = k;
				while (j > 0 && ++pick[j - 1] == terms.size())
					pick[--j] = 0;
				if (j == 0)
					break;
			}
			size_t i = k;
			while (i > 0 && idx[i - 1] == n - k + i - 1)
				i--;
			if (i == 0)
				break;
			idx[i - 1]++;
			for (size_t j = i; j < k; j++)
				idx[j] = idx[j - 1] + 1;
		}
	}
	return b;
}

namespace {

/// Solves eqs for `vars`: linear elimination, then single rational roots of
/// univariate remainders. Every variable must end up determined.
std::optional<Subst> solve_for(std::vector<Poly> eqs, const std::vector<std::string> &vars)
{
	std::set<std::string> unknown(vars.begin(), vars.end());
	auto is_unknown = [&](const Atom &a) { return a.is_var() && unknown.count(a.name()); };
	std::vector<std::pair<Atom, Poly>> assignment;
	auto bind = [&](const Atom &a, const Poly &v) {
		for (auto &[b, w] : assignment)
			w = replace_atom(w, a, v);
		for (auto &e : eqs)
			e = replace_atom(e, a, v);
		assignment.emplace_back(a, v);
	};
	for (;;) {
		auto el = eliminate_linear(eqs, is_unknown);
		if (el.inconsistent)
			return std::nullopt;
		eqs = el.remaining;
		for (const auto &[a, v] : el.assignment)
			bind(a, v);
		if (eqs.empty())
			break;
		bool progress = false;
		for (const auto &e : eqs) {
			auto atoms = top_atoms(e);
			if (atoms.size() != 1 || !is_unknown(*atoms.begin()) || contains_fapp(e))
				continue;
			bool exhaustive = true;
			auto roots = rational_roots(*as_univariate(e, *atoms.begin()), exhaustive);
			if (!exhaustive || roots.size() != 1)
				return std::nullopt;
			bind(*atoms.begin(), Poly(roots[0]));
			progress = true;
			break;
		}
		if (!progress)
			return std::nullopt;
	}
	Subst sigma;
	for (const auto &[a, v] : assignment)
		sigma[a.name()] = v;
	for (const auto &v : vars) {
		if (!sigma.count(v))
			return std::nullopt;
		for (const auto &w : vars)
			if (mentions_var(sigma[v], w))
				return std::nullopt;
	}
	return sigma;
}

std::string fresh_variable(const Formula &phi)
{
	std::set<std::string> used;
	for_each_poly(phi, [&](const Poly &p) {
		auto v = variables(p);
		used.insert(v.begin(), v.end());
	});
	if (phi.is_quantifier())
		used.insert(phi.vars().begin(), phi.vars().end());
	std::string z = "z";
	for (int k = 1; used.count(z); k++)
		z = "z" + std::to_string(k);
	return z;
}

} // namespace

std::vector<TuSolution> theory_unification_solutions(const Formula &phi, std::string *fresh)
{
	std::vector<TuSolution> out;
	if (phi.kind() != Formula::Kind::Forall)
		return out;
	auto args = collect_f_arguments(phi);
	std::sort(args.begin(), args.end(), [](const Poly &a, const Poly &b) { return b < a; });
	if (args.size() > tu_max_arguments) {
		spdlog::debug("theory unification: using {} of {} f-arguments", tu_max_arguments, args.size());
		args.resize(tu_max_arguments);
	}
	std::string z = fresh_variable(phi);
	if (fresh)
		*fresh = z;
	Poly zp = Poly::var(z);
	size_t n = args.size();
	size_t masks = size_t(1) << n;
	for (size_t i = 1; i <= masks; i++) {
		size_t mask = i % masks;
		TuSolution s;
		std::vector<Poly> eqs;
		for (size_t j = 0; j < n; j++) {
			if (mask >> j & 1) {
				s.to_z.push_back(args[j]);
				eqs.push_back(args[j] - zp);
			} else {
				s.to_zero.push_back(args[j]);
				eqs.push_back(args[j]);
			}
		}
		auto sigma = solve_for(eqs, phi.vars());
		if (!sigma) {
			spdlog::trace("theory unification: partition {} skipped", mask);
			continue;
		}
		s.sigma = std::move(*sigma);
		out.push_back(std::move(s));
	}
	return out;
}

InstantiationBatch theory_unification_instantiations(const Formula &phi)
{
	InstantiationBatch b;
	b.origin = InstOrigin::TheoryUnif;
	auto own = canonical_key(phi);
	for (const auto &s : theory_unification_solutions(phi)) {
		if (canonical_key(instantiate(phi, s.sigma)) == own)
			continue;
		b.add(phi, s.sigma);
	}
	return b;
}

ProofObligation enrich_obligation(const ProofObligation &ob, EnrichStage stage,
                                  const InstantiationOptions &opts)
{
	ProofObligation out = ob;
	std::set<std::string> have;
	for (const auto &f : out.instantiations)
		have.insert(canonical_key(f));
	for (const auto &f : out.spec)
		have.insert(canonical_key(f));
	auto absorb = [&](const InstantiationBatch &b) {
		for (const auto &f : b.formulas)
			if (have.insert(canonical_key(f)).second)
				out.instantiations.push_back(f);
	};
	std::vector<Formula> sources;
	for (const auto &a : ob.spec)
		if (a.kind() == Formula::Kind::Forall)
			sources.push_back(a);
	if (opts.tu)
		for (const auto &s : sources)
			absorb(theory_unification_instantiations(s));
	if (stage == EnrichStage::TU)
		return out;
	auto terms = small_terms(ob, opts.level);
	for (const auto &t : opts.extra_terms)
		if (std::find(terms.terms.begin(), terms.terms.end(), t) == terms.terms.end())
			terms.terms.push_back(t);
	for (const auto &s : sources)
		absorb(partial_instantiations(s, terms, false));
	if (stage == EnrichStage::TU_PI_FI)
		for (const auto &s : sources)
			absorb(full_instantiations_fi(s, terms, opts.fi_budget));
	if (!opts.keep_original)
		out.emit_spec = false;
	return out;
}

} // namespace feq
