// SPDX-License-Identifier: Apache-2.0

#include "feq/smtlib.hh"
#include "feq/errors.hh"
#include "feq/verdict.hh"

#include <sstream>

namespace feq {

std::vector<Formula> ProofObligation::assertions() const
{
	std::vector<Formula> out;
	if (emit_spec)
		out.insert(out.end(), spec.begin(), spec.end());
	else
		for (const auto &s : spec)
			if (!has_quantifier(s))
				out.push_back(s);
	out.insert(out.end(), instantiations.begin(), instantiations.end());
	out.insert(out.end(), lemmas.begin(), lemmas.end());
	out.insert(out.end(), negation_constraints.begin(), negation_constraints.end());
	return out;
}

namespace {

const std::set<std::string> reserved = {
	"_", "!", "as", "let", "exists", "forall", "match", "par", "assert", "f",
	"true", "false", "not", "and", "or", "ite", "distinct", "Real", "Int",
	"BINARY", "DECIMAL", "HEXADECIMAL", "NUMERAL", "STRING",
};

std::string symbol(const std::string &name)
{
	if (reserved.count(name))
		return "|" + name + "|";
	return name;
}

std::string numeral(const Q &q)
{
	if (q.get_den() == 1)
		return q.get_num().get_str();
	return "(/ " + q.get_num().get_str() + " " + q.get_den().get_str() + ")";
}

std::string monomial_term(const Q &abs_coeff, const Powers &powers)
{
	std::vector<std::string> factors;
	if (abs_coeff != 1 || powers.empty())
		factors.push_back(numeral(abs_coeff));
	for (const auto &[a, e] : powers) {
		std::string t = a.is_fapp() ? "(f " + smt_term(a.arg()) + ")" : symbol(a.name());
		for (unsigned i = 0; i < e; i++)
			factors.push_back(t);
	}
	if (factors.size() == 1)
		return factors[0];
	std::string s = "(*";
	for (const auto &f : factors)
		s += " " + f;
	return s + ")";
}

std::string sum(const std::vector<std::string> &ts)
{
	if (ts.empty())
		return "0";
	if (ts.size() == 1)
		return ts[0];
	std::string s = "(+";
	for (const auto &t : ts)
		s += " " + t;
	return s + ")";
}

void split(const Poly &p, std::vector<std::string> &pos, std::vector<std::string> &neg)
{
	for (const auto &m : p.terms())
		(sgn(m.coeff) > 0 ? pos : neg).push_back(monomial_term(abs(m.coeff), m.powers));
}

void emit(const Formula &f, std::ostringstream &os)
{
	using K = Formula::Kind;
	switch (f.kind()) {
	case K::True: os << "true"; return;
	case K::False: os << "false"; return;
	case K::Cmp: {
		std::vector<std::string> pos, neg;
		split(f.poly(), pos, neg);
		std::string l = sum(pos), r = sum(neg);
		switch (f.rel()) {
		case Rel::Eq: os << "(= " << l << " " << r << ")"; return;
		case Rel::Ne: os << "(not (= " << l << " " << r << "))"; return;
		case Rel::Le: os << "(<= " << l << " " << r << ")"; return;
		case Rel::Lt: os << "(< " << l << " " << r << ")"; return;
		}
		return;
	}
	case K::Forall:
	case K::Exists:
		os << (f.kind() == K::Forall ? "(forall (" : "(exists (");
		for (size_t i = 0; i < f.vars().size(); i++)
			os << (i ? " " : "") << "(" << symbol(f.vars()[i]) << " Real)";
		os << ") ";
		emit(f.body(), os);
		os << ")";
		return;
	case K::Not: os << "(not"; break;
	case K::And: os << "(and"; break;
	case K::Or: os << "(or"; break;
	case K::Implies: os << "(=>"; break;
	}
	for (const auto &k : f.children()) {
		os << " ";
		emit(k, os);
	}
	os << ")";
}

} // namespace

std::string smt_term(const Poly &p)
{
	std::vector<std::string> pos, neg;
	split(p, pos, neg);
	if (neg.empty())
		return sum(pos);
	std::string s = "(-";
	if (!pos.empty())
		s += " " + sum(pos);
	else if (neg.size() > 1)
		return "(- " + sum(neg) + ")";
	for (const auto &n : neg)
		s += " " + n;
	return s + ")";
}

std::string smt_formula(const Formula &f)
{
	std::ostringstream os;
	emit(f, os);
	return os.str();
}

static std::string render(const std::vector<Formula> &assertions, std::set<std::string> consts,
                          const EmitOptions &opts)
{
	for (const auto &a : assertions) {
		auto cs = constants(a);
		consts.insert(cs.begin(), cs.end());
	}
	std::ostringstream os;
	if (!opts.comment.empty()) {
		std::istringstream in(opts.comment);
		std::string line;
		while (std::getline(in, line))
			os << "; " << line << "\n";
	}
	os << "(set-logic UFNRA)\n";
	os << "(declare-fun f (Real) Real)\n";
	for (const auto &c : consts)
		os << "(declare-const " << symbol(c) << " Real)\n";
	for (const auto &a : assertions)
		os << "(assert " << smt_formula(a) << ")\n";
	os << "(check-sat)\n(exit)\n";
	return os.str();
}

std::string emit_script(const std::vector<Formula> &assertions, const EmitOptions &opts)
{
	return render(assertions, {}, opts);
}

std::string emit_smtlib(const ProofObligation &ob, const EmitOptions &opts)
{
	auto as = ob.assertions();
	for (const auto &a : as)
		if (has_existential(a))
			throw non_ground_existential("existential quantifier in proof obligation: " + to_string(a));
	std::set<std::string> declared = ob.skolems;
	declared.insert(ob.constants.begin(), ob.constants.end());
	return render(as, std::move(declared), opts);
}

// ------------------------------------------------------------- verdicts

const char *to_string(Status s)
{
	switch (s) {
	case Status::Sat: return "sat";
	case Status::Unsat: return "unsat";
	case Status::Unknown: return "unknown";
	case Status::Timeout: return "timeout";
	case Status::Crash: return "crash";
	}
	return "?";
}

Status status_from_string(std::string_view s)
{
	if (s == "sat") return Status::Sat;
	if (s == "unsat") return Status::Unsat;
	if (s == "timeout") return Status::Timeout;
	if (s == "crash") return Status::Crash;
	return Status::Unknown;
}

SolverVerdict parse_solver_output(std::string_view out, std::string_view err, const ExitInfo &exit)
{
	(void)err;
	SolverVerdict v;
	std::istringstream in{std::string(out)};
	std::string line;
	while (std::getline(in, line)) {
		auto b = line.find_first_not_of(" \t\r");
		auto e = line.find_last_not_of(" \t\r");
		if (b == std::string::npos)
			continue;
		std::string t = line.substr(b, e - b + 1);
		if (t == "sat" || t == "unsat" || t == "unknown") {
			v.status = status_from_string(t);
			return v;
		}
	}
	if (exit.timed_out)
		v.status = Status::Timeout;
	else if (exit.signaled || exit.code != 0)
		v.status = Status::Crash;
	else
		v.status = Status::Unknown;
	return v;
}

} // namespace feq
