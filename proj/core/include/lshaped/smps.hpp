#pragma once

#include <string>

#include "lshaped/parse_error.hpp"
#include "lshaped/problem.hpp"

namespace lshaped {

struct SmpsTriple {
  std::string core_text;
  std::string time_text;
  std::string stoch_text;
};

/// Reads the two-period SMPS subset: MPS core (ROWS, COLUMNS, RHS, RANGES,
/// BOUNDS), TIME in implicit or explicit form, STOCH with INDEP DISCRETE
/// sections. Fields are whitespace separated, so names may not contain
/// blanks. Inequalities, ranges and upper bounds become slack columns of the
/// owning stage; free columns are split into a positive and a negative part.
/// Throws ParseError.
StochasticTemplate parse_smps(const SmpsTriple& files);

/// Reads three files from disk; unreadable files throw ParseError.
SmpsTriple read_smps_files(const std::string& core, const std::string& time, const std::string& stoch);

}  // namespace lshaped
