// Exception types shared across the library.

#ifndef HMMRD_ERRORS_HPP
#define HMMRD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hmmrd {

/// Invalid user input: bad configuration keys, malformed files, violated
/// preconditions. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: linear solver stall, fixed-point divergence, singular
/// systems. The CLI maps these to exit code 2.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Mesh construction failures
class DegenerateCell : public ValidationError {
public:
  explicit DegenerateCell(const std::string& what) : ValidationError(what) {}
};
class NonStarShaped : public ValidationError {
public:
  explicit NonStarShaped(const std::string& what) : ValidationError(what) {}
};
class NonConformingFace : public ValidationError {
public:
  explicit NonConformingFace(const std::string& what) : ValidationError(what) {}
};
class UnsupportedCellType : public ValidationError {
public:
  explicit UnsupportedCellType(const std::string& what) : ValidationError(what) {}
};

// Linear algebra failures
class SingularMatrix : public SolverError {
public:
  explicit SingularMatrix(const std::string& what) : SolverError(what) {}
};
class SingularBlock : public SolverError {
public:
  explicit SingularBlock(const std::string& what) : SolverError(what) {}
};
class NonConvergence : public SolverError {
public:
  explicit NonConvergence(const std::string& what) : SolverError(what) {}
};
class LinearSolverFailure : public SolverError {
public:
  explicit LinearSolverFailure(const std::string& what) : SolverError(what) {}
};
class FixedPointDivergence : public SolverError {
public:
  explicit FixedPointDivergence(const std::string& what) : SolverError(what) {}
};

}  // namespace hmmrd

#endif
