// SPDX-License-Identifier: Apache-2.0

#include "feq/fixtures.hh"
#include "feq/errors.hh"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace feq {

std::optional<Stage> stage_from_string(std::string_view s)
{
	for (auto st : {Stage::Plain, Stage::TU, Stage::PI, Stage::LemmaLoop, Stage::None})
		if (s == to_string(st))
			return st;
	return std::nullopt;
}

std::filesystem::path default_problems_dir()
{
	return FEQ_PROBLEMS_DIR;
}

std::vector<Fixture> load_fixtures(const std::filesystem::path &dir)
{
	namespace pt = boost::property_tree;
	pt::ptree tree;
	try {
		pt::read_ini((dir / "manifest.ini").string(), tree);
	} catch (const pt::ini_parser_error &e) {
		throw error("cannot read fixture manifest: " + std::string(e.what()));
	}
	std::vector<Fixture> out;
	for (const auto &[name, sec] : tree) {
		Fixture f;
		f.name = name;
		try {
			f.file = dir / sec.get<std::string>("file");
			std::string cand = sec.get<std::string>("candidate");
			for (size_t p; (p = cand.find(" | ")) != std::string::npos;)
				cand.replace(p, 3, "\n");
			f.candidate = cand;
			f.templ = sec.get<std::string>("template");
			auto st = stage_from_string(sec.get<std::string>("stage"));
			if (!st)
				throw error("unknown stage " + sec.get<std::string>("stage"));
			f.stage = *st;
			f.notes = sec.get<std::string>("notes", "");
		} catch (const pt::ptree_error &e) {
			throw error("fixture " + name + ": " + e.what());
		}
		out.push_back(std::move(f));
	}
	return out;
}

} // namespace feq
