// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/obligation.hh"
#include "feq/portfolio.hh"
#include "feq/synthesis.hh"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace feq {

/// Closure of `seeds` under +, -, · and f, keeping terms whose construction
/// size (seeds count 1, each operation adds 1) is at most size_bound.
/// Ordered by construction size, then discovery; no two entries are equal
/// after normalisation.
std::vector<Poly> generate_ground_terms(const std::vector<Poly> &seeds, unsigned size_bound);

/// Candidate lemmas, most promising first:
///  - for each seed s, the solved form at s, ⋁ᵢ Γᵢ ∧ f(s) = tᵢ(s), and
///    then each of its disjuncts (equations before disjunctions, smaller
///    first);
///  - equations t = u between terms, at least one side containing f, by
///    increasing size. At most max_pairs of these.
/// Trivially true or false candidates, duplicates and anything whose
/// canonical_key is in `attempted` are dropped.
std::vector<Formula> generate_conjectures(const std::vector<Poly> &terms, const SolvedForm &sf,
                                          const std::vector<Poly> &seeds, size_t max_pairs = 64,
                                          const std::set<std::string> &attempted = {});

enum class LemmaStatus { Proven, Failed, Redundant };

const char *to_string(LemmaStatus s);

struct LemmaRecord {
	Formula formula = Formula::top();
	LemmaStatus status = LemmaStatus::Failed;
	/// Solver that settled it, or "redundancy" when implied by earlier lemmas.
	std::string prover;
	double time = 0;
	unsigned size_bound = 0;
	size_t round = 0;
};

size_t default_lemma_workers();

struct LemmaOptions {
	unsigned initial_size = 3;
	unsigned max_size = 5;
	/// Conjectures proved concurrently: 4, or fewer on machines with fewer
	/// cores so that concurrent proofs do not starve each other.
	size_t workers = default_lemma_workers();
	/// Solver processes per conjecture.
	size_t solver_parallelism = 2;
	double lemma_timeout = 5;
	double redundancy_timeout = 1;
	size_t max_pairs = 64;
	/// Try the main obligation once before generating anything.
	bool precheck = true;
	std::optional<Clock::time_point> deadline;
	/// Line-delimited JSON, one object per settled conjecture.
	std::optional<std::filesystem::path> trace_path;
};

struct LemmaLoopResult {
	/// Unsat when the obligation was closed; Sat if a solver found a model;
	/// Unknown otherwise.
	Status status = Status::Unknown;
	/// The input obligation with every proven lemma added.
	ProofObligation obligation;
	std::vector<LemmaRecord> records;
	/// Last attempt on the main obligation, if any.
	std::optional<PortfolioResult> main;
	size_t rounds = 0;
	size_t main_attempts = 0;

	std::vector<Formula> proven() const;
};

/// Is `conj` already implied by `known`? Ground check with a short timeout.
bool is_redundant(const Formula &conj, const std::vector<Formula> &known, const std::vector<SolverConfig> &configs,
                  double timeout, std::optional<Clock::time_point> deadline = std::nullopt);

/// Tries to refute ¬conj from the spec, the instantiations and the lemmas
/// of ob. The negation constraints are never part of the context. Only
/// configs marked for lemmas take part (all of them if none is).
SolverVerdict prove_conjecture(const ProofObligation &ob, const Formula &conj, const std::vector<SolverConfig> &configs,
                               const PortfolioOptions &opts);

/// Generates, proves and adds lemmas until the main obligation is refuted,
/// the size bound passes opts.max_size, or the deadline is reached. After
/// every batch with a new lemma the main obligation is retried with
/// `main_opts`. A failed round restarts generation with the bound raised
/// by one. Results are committed in generation order, so the lemma list
/// does not depend on which worker finishes first. With an archive in
/// main_opts, lemma scripts are kept as <obligation_id>-lemma-<n> and main
/// attempts as <obligation_id>-lemmas-<n>.
LemmaLoopResult lemma_loop(const ProofObligation &ob, const SolvedForm &sf, const std::vector<SolverConfig> &configs,
                           const PortfolioOptions &main_opts, const LemmaOptions &opts = {});

} // namespace feq
