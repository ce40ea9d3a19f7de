// SPDX-License-Identifier: Apache-2.0

#include "feq/problem.hh"
#include "feq/errors.hh"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace feq {

syntax_error::syntax_error(const std::string &msg, int line, int column)
: error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg)
, line(line), column(column) {}

Formula Problem::spec() const
{
	if (axioms.size() == 1)
		return axioms[0];
	return Formula::conj(axioms);
}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
	Tok kind;
	std::string text;
	int line, col;
};

std::vector<Token> lex(std::string_view s)
{
	std::vector<Token> out;
	int line = 1, col = 1;
	size_t i = 0;
	auto advance = [&](size_t n) {
		for (size_t k = 0; k < n; k++, i++) {
			if (s[i] == '\n') {
				line++;
				col = 1;
			} else {
				col++;
			}
		}
	};
	while (i < s.size()) {
		char c = s[i];
		if (std::isspace(static_cast<unsigned char>(c))) {
			advance(1);
			continue;
		}
		if (c == '#' || (c == '/' && i + 1 < s.size() && s[i + 1] == '/')) {
			while (i < s.size() && s[i] != '\n')
				advance(1);
			continue;
		}
		int l = line, cl = col;
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			size_t j = i;
			while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
				j++;
			out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cl});
			advance(j - i);
			continue;
		}
		if (std::isdigit(static_cast<unsigned char>(c)) ||
		    (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
			size_t j = i;
			while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
				j++;
			if (j < s.size() && s[j] == '.' && j + 1 < s.size() &&
			    std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
				j++;
				while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
					j++;
			}
			out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l, cl});
			advance(j - i);
			continue;
		}
		static const char *two[] = {"!=", "<=", ">=", "->", "<>"};
		bool matched = false;
		for (const char *t : two)
			if (s.substr(i, 2) == t) {
				out.push_back({Tok::Punct, t, l, cl});
				advance(2);
				matched = true;
				break;
			}
		if (matched)
			continue;
		if (std::string_view("()+-*/^=<>;.,").find(c) != std::string_view::npos) {
			out.push_back({Tok::Punct, std::string(1, c), l, cl});
			advance(1);
			continue;
		}
		throw syntax_error(std::string("unexpected character '") + c + "'", l, cl);
	}
	out.push_back({Tok::End, "", line, col});
	return out;
}

const std::set<std::string> keywords = {
	"find", "forall", "exists", "where", "domain", "and", "or", "not", "true", "false",
};

class Parser {
public:
	Parser(std::string_view text, std::set<std::string> preset_vars = {})
	: toks_(lex(text))
	{
		if (!preset_vars.empty())
			scopes_.push_back(std::move(preset_vars));
	}

	Problem problem(std::string name)
	{
		Problem p;
		p.name = std::move(name);
		while (!at_end()) {
			if (accept(";"))
				continue;
			statement(p);
			if (!at_end())
				expect(";");
		}
		p.declared_constants = constants_;
		return p;
	}

	Poly whole_term()
	{
		Poly t = term();
		if (!at_end())
			fail("unexpected '" + peek().text + "' after term");
		return t;
	}

private:
	std::vector<Token> toks_;
	size_t pos_ = 0;
	std::vector<std::set<std::string>> scopes_;
	std::set<std::string> constants_;

	const Token &peek(size_t ahead = 0) const
	{
		return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
	}
	bool at_end() const { return peek().kind == Tok::End; }
	bool is(const char *t) const
	{
		return peek().kind != Tok::Number && peek().kind != Tok::End && peek().text == t;
	}
	bool accept(const char *t)
	{
		if (!is(t))
			return false;
		pos_++;
		return true;
	}
	[[noreturn]] void fail(const std::string &msg) const
	{
		throw syntax_error(msg, peek().line, peek().col);
	}
	[[noreturn]] void unsupported(const std::string &msg) const
	{
		std::ostringstream os;
		os << peek().line << ":" << peek().col << ": " << msg;
		throw unsupported_feature(os.str());
	}
	void expect(const char *t)
	{
		if (!accept(t))
			fail(std::string("expected '") + t + "'" +
			     (at_end() ? " before end of input" : ", found '" + peek().text + "'"));
	}
	std::string identifier()
	{
		if (peek().kind != Tok::Ident || keywords.count(peek().text))
			fail("expected identifier");
		return toks_[pos_++].text;
	}
	bool bound(const std::string &v) const
	{
		for (const auto &s : scopes_)
			if (s.count(v))
				return true;
		return false;
	}

	void statement(Problem &p)
	{
		if (accept("find")) {
			std::string fn = identifier();
			if (fn != "f")
				unsupported("only the unknown function f is supported, not " + fn);
			return;
		}
		if (is("domain"))
			unsupported("domain restrictions are not supported");
		if (accept("where")) {
			Formula w = formula();
			if (!free_variables(w).empty() || has_quantifier(w))
				fail("'where' constraints must be ground");
			p.axioms.push_back(w);
			return;
		}
		p.axioms.push_back(formula());
	}

	Formula formula()
	{
		Formula lhs = disjunction();
		if (accept("->"))
			return Formula::implies(lhs, formula());
		return lhs;
	}

	Formula disjunction()
	{
		std::vector<Formula> ks{conjunction()};
		while (accept("or"))
			ks.push_back(conjunction());
		return ks.size() == 1 ? ks[0] : Formula::disj(std::move(ks));
	}

	Formula conjunction()
	{
		std::vector<Formula> ks{unary()};
		while (accept("and"))
			ks.push_back(unary());
		return ks.size() == 1 ? ks[0] : Formula::conj(std::move(ks));
	}

	Formula unary()
	{
		if (accept("not"))
			return Formula::negate(unary());
		if (accept("true"))
			return Formula::top();
		if (accept("false"))
			return Formula::bottom();
		if (is("exists"))
			unsupported("existential quantifiers are not supported in specifications");
		if (accept("forall")) {
			std::vector<std::string> vars;
			std::set<std::string> scope;
			do {
				std::string v = identifier();
				if (v == "f")
					fail("f cannot be used as a variable");
				if (!scope.insert(v).second)
					fail("variable " + v + " bound twice");
				if (bound(v))
					fail("variable " + v + " shadows an enclosing binding");
				vars.push_back(v);
			} while (peek().kind == Tok::Ident && !keywords.count(peek().text));
			expect(".");
			scopes_.push_back(std::move(scope));
			Formula body = formula();
			scopes_.pop_back();
			return Formula::forall(std::move(vars), body);
		}
		if (is("(")) {
			size_t save = pos_;
			auto saved_consts = constants_;
			try {
				return comparison();
			} catch (const syntax_error &) {
				pos_ = save;
				constants_ = saved_consts;
			}
			expect("(");
			Formula f = formula();
			expect(")");
			return f;
		}
		return comparison();
	}

	Formula comparison()
	{
		Poly lhs = term();
		if (accept("="))
			return Formula::cmp(lhs, Rel::Eq, term());
		if (accept("!=") || accept("<>"))
			return Formula::cmp(lhs, Rel::Ne, term());
		if (accept("<="))
			return Formula::cmp(lhs, Rel::Le, term());
		if (accept("<"))
			return Formula::cmp(lhs, Rel::Lt, term());
		if (accept(">="))
			return Formula::cmp(term(), Rel::Le, lhs);
		if (accept(">"))
			return Formula::cmp(term(), Rel::Lt, lhs);
		fail("expected a comparison operator");
	}

	Poly term()
	{
		Poly acc;
		bool neg = false;
		if (accept("-"))
			neg = true;
		else
			accept("+");
		acc = product();
		if (neg)
			acc = -acc;
		for (;;) {
			if (accept("+"))
				acc += product();
			else if (accept("-"))
				acc -= product();
			else
				return acc;
		}
	}

	Poly product()
	{
		Poly acc = power();
		for (;;) {
			if (accept("*")) {
				acc *= power();
			} else if (is("/")) {
				int line = peek().line, col = peek().col;
				pos_++;
				Poly d = power();
				auto v = d.constant_value();
				if (!v)
					throw unsupported_feature(std::to_string(line) + ":" + std::to_string(col) +
					                          ": division is only allowed by rational constants");
				if (sgn(*v) == 0)
					throw syntax_error("division by zero", line, col);
				acc = acc.scaled(1 / *v);
			} else {
				return acc;
			}
		}
	}

	Poly power()
	{
		Poly base = primary();
		if (accept("^")) {
			if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos)
				fail("exponent must be a non-negative integer literal");
			unsigned long e = std::stoul(toks_[pos_++].text);
			if (e > 64)
				fail("exponent too large");
			return base.pow(static_cast<unsigned>(e));
		}
		return base;
	}

	Poly primary()
	{
		if (peek().kind == Tok::Number)
			return Poly(parse_q(toks_[pos_++].text));
		if (accept("(")) {
			Poly t = term();
			expect(")");
			return t;
		}
		if (accept("-"))
			return -power();
		if (peek().kind == Tok::Ident && !keywords.count(peek().text)) {
			std::string id = toks_[pos_].text;
			if (peek(1).kind == Tok::Punct && peek(1).text == "(") {
				if (id != "f")
					unsupported("only the unary function f is supported, found " + id);
				pos_ += 2;
				Poly arg = term();
				if (is(","))
					unsupported("f must be unary");
				expect(")");
				return Poly::fapp(arg);
			}
			pos_++;
			if (id == "f")
				fail("f must be applied to an argument");
			if (bound(id))
				return Poly::var(id);
			constants_.insert(id);
			return Poly::constant(id);
		}
		fail(at_end() ? "unexpected end of input" : "unexpected '" + peek().text + "'");
	}
};

} // namespace

Problem parse_problem(std::string_view text, std::string name)
{
	Problem p = Parser(text).problem(std::move(name));
	std::istringstream in{std::string(text)};
	std::string line, note;
	while (std::getline(in, line) && !line.empty() && line[0] == '#') {
		auto body = line.substr(line.find_first_not_of("# ") == std::string::npos
		                                ? line.size() : line.find_first_not_of("# "));
		note += (note.empty() ? "" : "\n") + body;
	}
	if (!note.empty())
		p.source_note = note;
	return p;
}

Problem load_problem(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw error("cannot open " + path);
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_problem(ss.str(), std::filesystem::path(path).stem().string());
}

Poly parse_term(std::string_view text, const std::set<std::string> &vars)
{
	return Parser(text, vars).whole_term();
}

std::string pretty_print(const Problem &p)
{
	std::ostringstream os;
	if (p.source_note) {
		std::istringstream in(*p.source_note);
		std::string line;
		while (std::getline(in, line))
			os << "# " << line << "\n";
	}
	os << "find f;\n";
	for (const auto &a : p.axioms)
		os << to_string(a) << ";\n";
	return os.str();
}

} // namespace feq
