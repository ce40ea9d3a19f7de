// SPDX-License-Identifier: Apache-2.0

#include "feq/lemmas.hh"
#include "feq/errors.hh"
#include "feq/smtlib.hh"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <thread>

namespace feq {

const char *to_string(LemmaStatus s)
{
	switch (s) {
	case LemmaStatus::Proven: return "proven";
	case LemmaStatus::Failed: return "failed";
	case LemmaStatus::Redundant: return "redundant";
	}
	return "?";
}

size_t default_lemma_workers()
{
	return std::clamp<size_t>(std::thread::hardware_concurrency(), 1, 4);
}

std::vector<Formula> LemmaLoopResult::proven() const
{
	std::vector<Formula> out;
	for (const auto &r : records)
		if (r.status == LemmaStatus::Proven)
			out.push_back(r.formula);
	return out;
}

std::vector<Poly> generate_ground_terms(const std::vector<Poly> &seeds, unsigned size_bound)
{
	std::vector<Poly> out;
	if (size_bound == 0)
		return out;
	std::set<Poly> seen;
	std::vector<std::vector<Poly>> level(size_bound + 1);
	auto push = [&](unsigned size, const Poly &p) {
		if (seen.insert(p).second) {
			level[size].push_back(p);
			out.push_back(p);
		}
	};
	for (const auto &s : seeds)
		push(1, s);
	for (unsigned s = 2; s <= size_bound; s++) {
		for (const auto &u : level[s - 1])
			push(s, Poly::fapp(u));
		for (unsigned a = 1; a + 1 < s; a++) {
			unsigned b = s - 1 - a;
			for (const auto &u : level[a])
				for (const auto &v : level[b]) {
					push(s, u + v);
					push(s, u - v);
					push(s, u * v);
				}
		}
	}
	return out;
}

namespace {

bool is_disjunction(const Formula &f)
{
	return f.kind() == Formula::Kind::Or;
}

/// Disjunction with duplicate disjuncts removed; a single survivor stands
/// alone.
Formula disjunction(const std::vector<Formula> &fs)
{
	std::vector<Formula> parts;
	std::set<std::string> keys;
	for (const auto &f : fs) {
		auto g = simplify(f);
		if (g.is_false())
			continue;
		if (keys.insert(canonical_key(g)).second)
			parts.push_back(g);
	}
	if (parts.empty())
		return Formula::bottom();
	if (parts.size() == 1)
		return parts[0];
	return simplify(Formula::disj(parts));
}

} // namespace

std::vector<Formula> generate_conjectures(const std::vector<Poly> &terms, const SolvedForm &sf,
                                          const std::vector<Poly> &seeds, size_t max_pairs,
                                          const std::set<std::string> &attempted)
{
	std::vector<Formula> out;
	std::set<std::string> keys = attempted;
	auto usable = [&](const Formula &f) {
		if (f.is_true() || f.is_false())
			return false;
		return keys.insert(canonical_key(f)).second;
	};

	std::vector<Formula> derived;
	for (const auto &s : seeds) {
		std::vector<Formula> parts;
		for (const auto &br : sf.branches) {
			if (br.gamma.is_false())
				continue;
			auto eq = Formula::eq(Poly::fapp(s), substitute(br.definition, {{"x", s}}));
			parts.push_back(simplify(Formula::conj({br.gamma, eq})));
		}
		if (parts.empty())
			continue;
		derived.push_back(disjunction(parts));
		for (const auto &p : parts)
			derived.push_back(p);
	}
	std::stable_sort(derived.begin(), derived.end(), [](const Formula &a, const Formula &b) {
		if (is_disjunction(a) != is_disjunction(b))
			return !is_disjunction(a);
		return formula_size(a) < formula_size(b);
	});
	for (const auto &f : derived)
		if (usable(f))
			out.push_back(f);

	// pairs in order of combined size
	std::map<unsigned, std::vector<Poly>> by_size;
	for (const auto &t : terms)
		by_size[term_size(t)].push_back(t);
	std::vector<unsigned> sizes;
	for (const auto &[k, _] : by_size)
		sizes.push_back(k);
	size_t taken = 0;
	if (sizes.empty())
		return out;
	for (unsigned total = 2 * sizes.front(); total <= 2 * sizes.back() && taken < max_pairs; total++) {
		for (unsigned a : sizes) {
			unsigned b = total - a;
			if (b < a)
				break;
			auto it = by_size.find(b);
			if (it == by_size.end())
				continue;
			const auto &A = by_size[a];
			const auto &B = it->second;
			for (size_t i = 0; i < A.size() && taken < max_pairs; i++)
				for (size_t j = a == b ? i + 1 : 0; j < B.size() && taken < max_pairs; j++) {
					if (!contains_fapp(A[i]) && !contains_fapp(B[j]))
						continue;
					auto f = simplify(Formula::eq(A[i], B[j]));
					if (usable(f)) {
						out.push_back(f);
						taken++;
					}
				}
		}
	}
	return out;
}

namespace {

std::vector<SolverConfig> lemma_solvers(const std::vector<SolverConfig> &configs)
{
	std::vector<SolverConfig> out;
	for (const auto &c : configs)
		if (c.enabled && c.lemmas)
			out.push_back(c);
	if (out.empty())
		out = configs;
	return out;
}

} // namespace

bool is_redundant(const Formula &conj, const std::vector<Formula> &known, const std::vector<SolverConfig> &configs,
                  double timeout, std::optional<Clock::time_point> deadline)
{
	auto key = canonical_key(conj);
	for (const auto &k : known)
		if (canonical_key(k) == key)
			return true;
	if (known.empty())
		return false;
	auto as = known;
	as.push_back(simplify(Formula::negate(conj)));
	PortfolioOptions o;
	o.timeout = timeout;
	o.deadline = deadline;
	o.parallelism = 2;
	o.obligation_id = "redundancy";
	auto r = run_portfolio(emit_script(as), lemma_solvers(configs), o);
	return r.verdict.status == Status::Unsat;
}

SolverVerdict prove_conjecture(const ProofObligation &ob, const Formula &conj, const std::vector<SolverConfig> &configs,
                               const PortfolioOptions &opts)
{
	ProofObligation ctx = ob;
	ctx.negation_constraints = {simplify(Formula::negate(conj))};
	return run_portfolio(emit_smtlib(ctx), lemma_solvers(configs), opts).verdict;
}

LemmaLoopResult lemma_loop(const ProofObligation &ob, const SolvedForm &sf, const std::vector<SolverConfig> &configs,
                           const PortfolioOptions &main_opts, const LemmaOptions &opts)
{
	LemmaLoopResult res;
	res.obligation = ob;
	auto expired = [&] { return opts.deadline && Clock::now() >= *opts.deadline; };

	std::ofstream trace;
	if (opts.trace_path)
		trace.open(*opts.trace_path, std::ios::app);
	auto commit = [&](LemmaRecord r) {
		if (r.status == LemmaStatus::Proven)
			res.obligation.lemmas.push_back(r.formula);
		spdlog::info("lemma {} [{}]: {}", to_string(r.status), r.prover, to_string(r.formula));
		if (trace.is_open()) {
			nlohmann::json j{{"formula", to_string(r.formula)},
			                 {"smt", smt_formula(r.formula)},
			                 {"status", to_string(r.status)},
			                 {"prover", r.prover},
			                 {"time", r.time},
			                 {"size_bound", r.size_bound},
			                 {"round", r.round}};
			trace << j.dump() << "\n" << std::flush;
		}
		res.records.push_back(std::move(r));
	};

	auto attempt_main = [&]() -> bool {
		PortfolioOptions o = main_opts;
		o.obligation_id = main_opts.obligation_id + "-lemmas-" + std::to_string(res.main_attempts);
		if (opts.deadline && (!o.deadline || *opts.deadline < *o.deadline))
			o.deadline = opts.deadline;
		res.main = run_portfolio(emit_smtlib(res.obligation), configs, o);
		res.main_attempts++;
		res.status = res.main->verdict.status;
		if (res.status == Status::Timeout)
			res.status = Status::Unknown;
		return res.main->verdict.definitive();
	};

	if (expired())
		return res;
	if (opts.precheck && attempt_main())
		return res;

	std::vector<Poly> seeds{Poly(0), Poly(1)};
	for (const auto &k : ob.skolems)
		seeds.push_back(Poly::constant(k));
	std::set<std::string> attempted;
	size_t conjecture_no = 0;
	for (const auto &l : ob.lemmas)
		attempted.insert(canonical_key(l));

	for (unsigned bound = opts.initial_size; bound <= opts.max_size && !expired(); bound++) {
		res.rounds++;
		auto terms = generate_ground_terms(seeds, bound);
		auto todo = generate_conjectures(terms, sf, seeds, opts.max_pairs, attempted);
		spdlog::info("lemma round {}: size bound {}, {} conjectures", res.rounds, bound, todo.size());

		size_t next = 0;
		while (next < todo.size() && !expired()) {
			// redundancy checks run against the lemmas committed so far
			std::vector<Formula> batch;
			while (next < todo.size() && batch.size() < std::max<size_t>(1, opts.workers) && !expired()) {
				const auto &c = todo[next++];
				attempted.insert(canonical_key(c));
				auto t0 = Clock::now();
				if (is_redundant(c, res.obligation.lemmas, configs, opts.redundancy_timeout, opts.deadline)) {
					LemmaRecord r;
					r.formula = c;
					r.status = LemmaStatus::Redundant;
					r.prover = "redundancy";
					r.time = std::chrono::duration<double>(Clock::now() - t0).count();
					r.size_bound = bound;
					r.round = res.rounds;
					commit(std::move(r));
					continue;
				}
				batch.push_back(c);
			}
			if (batch.empty())
				continue;
			const ProofObligation ctx = res.obligation;
			std::vector<std::future<SolverVerdict>> jobs;
			for (const auto &c : batch) {
				PortfolioOptions o;
				o.timeout = opts.lemma_timeout;
				o.deadline = opts.deadline;
				o.parallelism = opts.solver_parallelism;
				// proving scripts of lemmas are kept next to the main ones
				o.archive_dir = main_opts.archive_dir;
				o.obligation_id = main_opts.obligation_id + "-lemma-" + std::to_string(conjecture_no++);
				jobs.push_back(std::async(std::launch::async,
				                          [&ctx, &configs, c, o] { return prove_conjecture(ctx, c, configs, o); }));
			}
			bool fresh = false;
			for (size_t i = 0; i < batch.size(); i++) {
				auto v = jobs[i].get();
				LemmaRecord r;
				r.formula = batch[i];
				r.status = v.status == Status::Unsat ? LemmaStatus::Proven : LemmaStatus::Failed;
				r.prover = v.solver_id;
				r.time = v.wall_time;
				r.size_bound = bound;
				r.round = res.rounds;
				fresh |= r.status == LemmaStatus::Proven;
				commit(std::move(r));
			}
			if (fresh && !expired() && attempt_main())
				return res;
		}
	}
	if (res.status == Status::Unsat || res.status == Status::Sat)
		return res;
	res.status = Status::Unknown;
	return res;
}

} // namespace feq
