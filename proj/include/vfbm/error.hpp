#pragma once

#include <stdexcept>
#include <string>

namespace vfbm {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-integrable endpoint singularity in product quadrature.
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmbeddingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoContractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CatalogError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// A Theorem constraint on (H, alpha, beta, delta, mu) does not hold.
struct AdmissibilityError : std::domain_error {
  using std::domain_error::domain_error;
};

// File-system failures, message carries the OS error text.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace vfbm
