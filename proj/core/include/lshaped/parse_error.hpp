#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lshaped {

struct ParseDiagnostic {
  std::string file;  ///< core, time, stoch or native
  std::size_t line = 1;
  std::string message;

  bool operator==(const ParseDiagnostic&) const = default;
};

std::string to_string(const ParseDiagnostic& d);

/// Thrown by the readers; what() joins all diagnostics, one per line.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<ParseDiagnostic> diagnostics);
  const std::vector<ParseDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<ParseDiagnostic> diagnostics_;
};

}  // namespace lshaped
