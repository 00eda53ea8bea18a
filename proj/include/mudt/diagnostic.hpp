// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#ifndef MUDT_DIAGNOSTIC_HPP
#define MUDT_DIAGNOSTIC_HPP

#include <string>
#include <vector>

namespace mudt {

enum class Severity { error, warning };

inline const char* severity_name(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

// One finding from a validation check. Codes are a stable public contract:
// P1..P9 (annotation principles), C1..C6 (construction checks), E_* (tag,
// label, and feature assignment checks).
struct Diagnostic {
  std::string code;
  Severity severity = Severity::error;
  std::vector<int> token_ids;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::string sent_id;
  std::vector<Diagnostic> diagnostics;
  bool passed = true;  // true iff no error-severity diagnostic

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& d : diagnostics) {
      if (d.severity == Severity::error) ++n;
    }
    return n;
  }

  bool has_code(std::string_view code) const {
    for (const auto& d : diagnostics) {
      if (d.code == code) return true;
    }
    return false;
  }
};

}  // namespace mudt

#endif  // MUDT_DIAGNOSTIC_HPP
