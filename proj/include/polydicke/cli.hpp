#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "polydicke/model.hpp"

namespace polydicke::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kBudgetError = 2 };

/// "1-2,2-3" -> {(1,2), (2,3)}.
std::vector<LevelPair> parse_axes(const std::string& text);
/// "lo:hi" applied to every axis, or one "lo:hi" per axis separated by commas.
std::vector<std::pair<double, double>> parse_ranges(const std::string& text, std::size_t axes);
/// A single cutoff for every mode or one per mode.
std::vector<int> parse_cutoffs(const std::string& text, std::size_t modes);

/// Entry point shared by the executable and the tests. Data goes to `out` when
/// no --out file is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polydicke::cli
