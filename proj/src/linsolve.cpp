#include "hmmrd/linsolve.hpp"

#include <algorithm>
#include <cmath>

#include "hmmrd/errors.hpp"

namespace hmmrd::linsolve {

SparseSymMatrix::SparseSymMatrix(int dim, std::vector<Triplet> entries) : dim_(dim) {
  if (dim <= 0) throw ValidationError("matrix dimension must be positive");
  for (Triplet& t : entries) {
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim)
      throw ValidationError("triplet index out of range");
    if (!std::isfinite(t.value)) throw ValidationError("non-finite matrix entry");
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  upper_.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (!upper_.empty() && upper_.back().row == t.row && upper_.back().col == t.col)
      upper_.back().value += t.value;
    else
      upper_.push_back(t);
  }
}

Eigen::VectorXd SparseSymMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim_);
  for (const Triplet& t : upper_) {
    y[t.row] += t.value * x[t.col];
    if (t.row != t.col) y[t.col] += t.value * x[t.row];
  }
  return y;
}

Eigen::VectorXd SparseSymMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim_);
  for (const Triplet& t : upper_)
    if (t.row == t.col) d[t.row] = t.value;
  return d;
}

Eigen::MatrixXd SparseSymMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const Triplet& t : upper_) {
    m(t.row, t.col) = t.value;
    m(t.col, t.row) = t.value;
  }
  return m;
}

std::pair<Eigen::VectorXd, SolveReport> cg_solve(const SparseSymMatrix& A,
                                                 const Eigen::VectorXd& b,
                                                 double tol, int max_iter,
                                                 Preconditioner precond,
                                                 const Eigen::VectorXd* initial_guess) {
  if (b.size() != A.dim()) throw ValidationError("right-hand side size mismatch");
  SolveReport report;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    return {Eigen::VectorXd::Zero(A.dim()), report};
  }

  Eigen::VectorXd inv_diag;
  if (precond == Preconditioner::Jacobi) {
    inv_diag = A.diagonal();
    for (int i = 0; i < inv_diag.size(); ++i)
      inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;
  }
  auto apply_precond = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return precond == Preconditioner::Jacobi ? inv_diag.cwiseProduct(r).eval() : r;
  };

  Eigen::VectorXd x = initial_guess ? *initial_guess : Eigen::VectorXd::Zero(A.dim());
  Eigen::VectorXd r = b - A.multiply(x);
  Eigen::VectorXd z = apply_precond(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  for (int it = 0; it < max_iter; ++it) {
    report.relative_residual = r.norm() / bnorm;
    if (report.relative_residual <= tol) {
      report.converged = true;
      report.iterations = it;
      return {x, report};
    }
    const Eigen::VectorXd Ap = A.multiply(p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break;  // matrix not positive definite along p
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    z = apply_precond(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    report.iterations = it + 1;
  }
  report.relative_residual = (b - A.multiply(x)).norm() / bnorm;
  report.converged = report.relative_residual <= tol;
  return {x, report};
}

Eigen::VectorXd dense_solve(const SparseSymMatrix& A, const Eigen::VectorXd& b) {
  if (b.size() != A.dim()) throw ValidationError("right-hand side size mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A.dense());
  if (!lu.isInvertible())
    throw SingularMatrix("dense solve: matrix is rank deficient (rank " +
                         std::to_string(lu.rank()) + " of " + std::to_string(A.dim()) + ")");
  return lu.solve(b);
}

Eigen::VectorXd remove_mean(const Eigen::VectorXd& x) {
  return x.array() - x.mean();
}

}  // namespace hmmrd::linsolve
