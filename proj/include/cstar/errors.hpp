#pragma once

#include <stdexcept>
#include <string>

namespace cstar {

// Incompatible algebra shapes, module ranks or sequence lengths.
struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Inverse or square root requested outside its domain.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct singular_error : domain_error {
  using domain_error::domain_error;
};

struct not_positive_error : domain_error {
  using domain_error::domain_error;
};

struct not_central_error : domain_error {
  not_central_error(std::size_t index, const std::string& what)
      : domain_error(what), index(index) {}
  std::size_t index;
};

// The input sequence does not satisfy a structural precondition
// (frame, modular Riesz basis, dual pair).
struct structure_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cstar
