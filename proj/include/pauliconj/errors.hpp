#pragma once

#include <stdexcept>
#include <string>

namespace pauliconj {

// Operand sizes disagree, or a qubit count is out of range.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed text (Pauli strings, angles, config files).
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Unknown registry name, unknown scheme, missing decoder entry.
struct LookupError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Code data violates the stabilizer-code invariants.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical check exceeded its tolerance (trace leak, non-rotation Kraus, fit residual).
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pauliconj
