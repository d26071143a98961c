#include "fermopt/pfaffian.hpp"

#include <cmath>

#include "fermopt/error.hpp"

namespace fermopt {

double pfaffian_unchecked(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  double result = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    // Pivot the largest entry of column k (below the diagonal) into row k+1.
    Eigen::Index kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      result = -result;
    }
    const double pivot = a(k, k + 1);
    if (pivot == 0.0) return 0.0;
    result *= pivot;
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / pivot;
      Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest).noalias() += tau * col.transpose() - col * tau.transpose();
    }
  }
  return result;
}

double pfaffian(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "Pfaffian needs a square matrix");
  }
  if (a.rows() % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "Pfaffian of odd-dimensional matrix");
  }
  if (a.rows() == 0) return 1.0;
  const double asym = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAntisymmetryTol) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not antisymmetric (max |A + A^T| = " +
                                                 std::to_string(asym) + ")");
  }
  Eigen::MatrixXd work = 0.5 * (a - a.transpose());
  return pfaffian_unchecked(work);
}

}  // namespace fermopt
