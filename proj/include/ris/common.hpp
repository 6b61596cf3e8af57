#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ris {

// Entry-count ceiling for configuration enumeration and table materialization.
// Guards against accidental exponential blowups; overridable per call.
inline constexpr std::uint64_t kDefaultEnumCap = std::uint64_t{1} << 26;

// CPT rows must sum to 1 within this tolerance after construction.
inline constexpr double kRowSumTolerance = 1e-9;

// Rows off by at most this much are renormalized on load (with a warning);
// larger violations are hard errors.
inline constexpr double kRowRenormBand = 1e-6;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph-shape problems: cycles, unknown vertices, mismatched parent lists.
struct StructuralError : Error {
  using Error::Error;
};

// Invariant violations in tables, configurations, or arguments.
struct ValidationError : Error {
  using Error::Error;
};

// Requested enumeration exceeds the configured cap.
struct CapacityError : Error {
  using Error::Error;
};

// Pr(e) = 0: posterior quantities and ln Pr(e) are undefined downstream.
struct ImpossibleEvidenceError : Error {
  using Error::Error;
};

// Every sample weight is zero; no posterior estimate can be formed.
struct DegenerateEstimateError : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line = 0;
  ParseError(int line_no, const std::string& msg)
      : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

}  // namespace ris
