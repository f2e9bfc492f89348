#pragma once

#include <algorithm>
#include <string>

#include "fourbar/types.hpp"

namespace fourbar::linalg {

/// Numerical rank with singular values below `cutoff * sigma_max` treated as zero.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& a,
                            typename Derived::Scalar cutoff =
                                typename Derived::Scalar(tolerance::rank_cutoff)) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::JacobiSVD<Plain> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == Scalar(0)) return 0;
  return (sv.array() > cutoff * sv(0)).count();
}

/// Moore-Penrose pseudoinverse through the SVD. Singular values below
/// `cutoff * sigma_max` are dropped.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::ColsAtCompileTime, Derived::RowsAtCompileTime>
pseudo_inverse(const Eigen::MatrixBase<Derived>& a,
               typename Derived::Scalar cutoff = typename Derived::Scalar(tolerance::pinv_cutoff)) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::JacobiSVD<Plain> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv(sv.size());
  const Scalar floor = sv.size() > 0 ? cutoff * sv(0) : Scalar(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > floor ? Scalar(1) / sv(i) : Scalar(0);
  const Eigen::Index k = sv.size();
  return svd.matrixV().leftCols(k) * inv.asDiagonal() * svd.matrixU().leftCols(k).transpose();
}

/// Right inverse A^T (A A^T)^-1 of a wide matrix with full row rank.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::ColsAtCompileTime, Derived::RowsAtCompileTime>
right_inverse(const Eigen::MatrixBase<Derived>& a, const char* what = "matrix") {
  using Scalar = typename Derived::Scalar;
  if (numerical_rank(a) < a.rows())
    throw RankDeficient(std::string(what) + " is not full row rank");
  using Gram = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::RowsAtCompileTime>;
  const Gram gram = a * a.transpose();
  return a.transpose() * gram.ldlt().solve(Gram::Identity(a.rows(), a.rows()));
}

/// Left inverse (A^T A)^-1 A^T of a tall matrix. Falls back to the SVD
/// pseudoinverse when the Gram matrix is badly conditioned; throws if the
/// matrix does not have full column rank.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::ColsAtCompileTime, Derived::RowsAtCompileTime>
left_inverse(const Eigen::MatrixBase<Derived>& a, const char* what = "matrix") {
  using Scalar = typename Derived::Scalar;
  if (numerical_rank(a, Scalar(tolerance::pinv_cutoff)) < a.cols())
    throw RankDeficient(std::string(what) + " is not full column rank");
  using Gram = Eigen::Matrix<Scalar, Derived::ColsAtCompileTime, Derived::ColsAtCompileTime>;
  const Gram gram = a.transpose() * a;
  Eigen::LLT<Gram> llt(gram);
  if (llt.info() == Eigen::Success) {
    const Scalar rcond = llt.rcond();
    if (rcond > Scalar(1e3) * Eigen::NumTraits<Scalar>::epsilon())
      return llt.solve(a.transpose());
  }
  return pseudo_inverse(a);
}

}  // namespace fourbar::linalg
