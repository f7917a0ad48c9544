#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "twophase/mesh.hpp"
#include "twophase/problems.hpp"

namespace twophase::cli {

enum ExitCode : int { kOk = 0, kArgumentError = 2, kSolverFailure = 3, kIoError = 4 };

/// First cells in index order, each added while the total stays <= V.
Indicator default_indicator(const Mesh& mesh, const ProblemParams& params);

/// Same greedy fill over a uniformly shuffled cell order.
Indicator random_indicator(const Mesh& mesh, const ProblemParams& params, std::uint64_t seed);

/// One 0/1 token per cell, whitespace separated. Throws ParseError.
Indicator load_indicator(std::istream& in, std::size_t num_cells);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twophase::cli
