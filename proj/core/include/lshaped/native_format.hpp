#pragma once

#include <string>
#include <variant>

#include "lshaped/parse_error.hpp"
#include "lshaped/problem.hpp"

namespace lshaped {

inline constexpr int kNativeFormatVersion = 1;

using NativeDocument = std::variant<StochasticTemplate, TwoStageProblem>;

/// JSON document with `version`, `name`, `first_stage` {c, A, b},
/// `recourse` {W, m} and either `scenarios` [{pi, q, T, h}] or
/// `nominal` {q, T, h} plus `random` [{target, row, col, outcomes}].
/// Matrices are arrays of rows. Throws ParseError; messages carry a JSON path.
NativeDocument parse_native(const std::string& text);

/// Pretty-printed JSON; numbers are written with round-trip precision.
std::string write_native(const TwoStageProblem& problem);
std::string write_native(const StochasticTemplate& tmpl);

/// Reads and parses a file; unreadable files throw ParseError.
NativeDocument read_native_file(const std::string& path);

}  // namespace lshaped
