// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "feq/pipeline.hh"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace feq {

/// A bundled problem with its expected outcome.
struct Fixture {
	std::string name;
	std::filesystem::path file;
	/// SolvedForm::describe() of the expected candidate.
	std::string candidate;
	std::string templ;
	/// Closing stage expected under the default options.
	Stage stage = Stage::None;
	std::string notes;
};

std::optional<Stage> stage_from_string(std::string_view s);

/// The bundled problems directory.
std::filesystem::path default_problems_dir();

/// Reads <dir>/manifest.ini: one section per problem with keys file,
/// candidate (branch lines separated by " | "), template, stage, notes.
/// Throws feq::error on a malformed manifest.
std::vector<Fixture> load_fixtures(const std::filesystem::path &dir = default_problems_dir());

} // namespace feq
