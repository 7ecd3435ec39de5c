// Sparse symmetric linear algebra for the hybrid solves and the diagnostic
// dual-norm computations: a symmetric matrix stored as its sorted upper
// triangle, preconditioned conjugate gradients, and a dense direct solve used
// as test oracle on small systems.

#ifndef HMMRD_LINSOLVE_HPP
#define HMMRD_LINSOLVE_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hmmrd::linsolve {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Symmetric sparse matrix. Construction folds every coordinate into the
/// upper triangle, sorts, and merges duplicates, so symmetry holds by
/// construction and the entry order is canonical.
class SparseSymMatrix {
public:
  SparseSymMatrix(int dim, std::vector<Triplet> entries);

  int dim() const { return dim_; }
  const std::vector<Triplet>& upper() const { return upper_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd dense() const;

private:
  int dim_;
  std::vector<Triplet> upper_;  // row <= col, sorted lexicographically
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

enum class Preconditioner { None, Jacobi };

/// Conjugate gradients on a symmetric positive (semi)definite system; stops
/// when ||Ax - b|| <= tol ||b||. Returns the last iterate and a report; the
/// caller decides whether a non-converged solve is an error.
std::pair<Eigen::VectorXd, SolveReport> cg_solve(const SparseSymMatrix& A,
                                                 const Eigen::VectorXd& b,
                                                 double tol, int max_iter,
                                                 Preconditioner precond = Preconditioner::Jacobi,
                                                 const Eigen::VectorXd* initial_guess = nullptr);

/// Dense factorization (test oracle for systems up to a few thousand dofs).
/// Throws SingularMatrix on rank deficiency.
Eigen::VectorXd dense_solve(const SparseSymMatrix& A, const Eigen::VectorXd& b);

/// Removes the mean from a vector; used to restrict singular pure-Neumann
/// systems to the complement of the constant kernel.
Eigen::VectorXd remove_mean(const Eigen::VectorXd& x);

}  // namespace hmmrd::linsolve

#endif
