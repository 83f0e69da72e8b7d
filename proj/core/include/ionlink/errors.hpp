#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ionlink {

// Trap drive outside the stable region, or a derived frequency lost its
// meaning (e.g. axial potential destabilizes the transverse confinement).
struct instability_error : std::domain_error {
  using std::domain_error::domain_error;
};

// An iterative solver failed to reach its tolerance.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A projective measurement with zero probability was requested (e.g. the
// herald on an input that can never produce a coincidence).
struct zero_probability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tomography input does not determine the state/process.
struct insufficient_data_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  std::size_t line_number;
};

}  // namespace ionlink
