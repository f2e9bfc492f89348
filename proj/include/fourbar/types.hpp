#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fourbar {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Vector7 = Eigen::Matrix<Scalar, 7, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;
template <typename Scalar>
using Matrix7 = Eigen::Matrix<Scalar, 7, 7>;
template <typename Scalar>
using Matrix27 = Eigen::Matrix<Scalar, 2, 7>;
template <typename Scalar>
using Matrix34 = Eigen::Matrix<Scalar, 3, 4>;
template <typename Scalar>
using Matrix36 = Eigen::Matrix<Scalar, 3, 6>;
template <typename Scalar>
using Matrix37 = Eigen::Matrix<Scalar, 3, 7>;
template <typename Scalar>
using Matrix43 = Eigen::Matrix<Scalar, 4, 3>;
template <typename Scalar>
using Matrix67 = Eigen::Matrix<Scalar, 6, 7>;
template <typename Scalar>
using Matrix74 = Eigen::Matrix<Scalar, 7, 4>;

// Errors. Every failure the library reports derives from fourbar::Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct SingularTransform : Error {
  using Error::Error;
};
struct Hypothesis3Violated : Error {
  using Error::Error;
};
struct Singularity : Error {
  using Error::Error;
};
struct Unbounded : Error {
  using Error::Error;
};

namespace tolerance {
/// Singular values below rank_cutoff * sigma_max count as zero for rank checks.
inline constexpr double rank_cutoff = 1e-10;
/// Relative cutoff used when forming Moore-Penrose pseudoinverses.
inline constexpr double pinv_cutoff = 1e-12;
/// Guard on |sin xi| for anything containing 1/sin(xi).
inline constexpr double sin_guard = 1e-9;
/// A normal force below this fraction of m g makes a CoP unbounded.
inline constexpr double normal_force_floor = 1e-9;
}  // namespace tolerance

template <typename Scalar>
inline const Scalar kPi = Scalar(3.141592653589793238462643383279502884L);

/// Planar rotation generator [[0, -1], [1, 0]].
template <typename Scalar>
Matrix2<Scalar> rotation_generator() {
  Matrix2<Scalar> s;
  s << Scalar(0), Scalar(-1), Scalar(1), Scalar(0);
  return s;
}

template <typename Scalar>
Matrix2<Scalar> rotation(Scalar angle) {
  using std::cos;
  using std::sin;
  Matrix2<Scalar> r;
  r << cos(angle), -sin(angle), sin(angle), cos(angle);
  return r;
}

}  // namespace fourbar
