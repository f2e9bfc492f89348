#pragma once

// Centroidal wrench transport and the velocity change of coordinates that
// puts the base at the center of mass with inertial orientation, which
// block-diagonalises the mass matrix.

#include "fourbar/model.hpp"

namespace fourbar {

/// Transport of a planar wrench (fx, fy, tz) applied at a point offset by
/// `r` from the CoM to the CoM: [[1, 0, 0], [0, 1, 0], [(S r)^T, 1]].
template <typename Scalar>
Matrix3<Scalar> wrench_transport(const Vector2<Scalar>& r) {
  Matrix3<Scalar> x = Matrix3<Scalar>::Identity();
  x.template block<1, 2>(2, 0) = (rotation_generator<Scalar>() * r).transpose();
  return x;
}

template <typename Scalar>
struct CentroidalFrame {
  Vector2<Scalar> p_com;
  Vector2<Scalar> lambda;  // p_L - p_com
  Vector2<Scalar> rho;     // p_R - p_com
  Matrix3<Scalar> X_L;
  Matrix3<Scalar> X_R;

  /// [X_L X_R], maps the stacked foot wrenches to the resultant at the CoM.
  Matrix36<Scalar> X() const {
    Matrix36<Scalar> x;
    x << X_L, X_R;
    return x;
  }
};

template <typename Scalar>
CentroidalFrame<Scalar> centroidal_transforms(const Configuration<Scalar>& q,
                                              const ModelParams<Scalar>& p) {
  const auto k = forward_kinematics(q, p);
  CentroidalFrame<Scalar> f;
  f.p_com = k.com;
  f.lambda = k.p_L - k.com;
  f.rho = k.p_R - k.com;
  f.X_L = wrench_transport(f.lambda);
  f.X_R = wrench_transport(f.rho);
  return f;
}

/// Velocity change nu = T nu_bar.
///
/// With r = p_com - p_B, cXb = [[1, 0, -r_y], [0, 1, r_x], [0, 0, 1]] and
/// T = [[cXb, cXb M_b^-1 M_bj], [0, 1_4]]. Lambda = 1 - P (1 + cXb^-1 P)^-1
/// cXb^-1 with P = [[0, 0, 0], [0, 0, 0], [-r_y, r_x, I_B / m - 1]].
///
/// The rotational entry of P uses I_B, the rotational inertia about the base
/// origin (the (theta, theta) entry of M_b). That is the value for which
/// Lambda = m cXb M_b^-1, i.e. for which the transformed foot Jacobian takes
/// the form [X^T, J_j - X^T Lambda M_bj / m].
template <typename Scalar>
struct DecouplingTransform {
  Matrix7<Scalar> T;
  Matrix3<Scalar> cXb;
  Matrix3<Scalar> Lambda;
  Matrix3<Scalar> P;
  Scalar inertia_base;  // I_B

  Matrix7<Scalar> T_inverse() const {
    Matrix7<Scalar> inv = Matrix7<Scalar>::Identity();
    const Matrix3<Scalar> cxb_inv = cXb.inverse();
    inv.template topLeftCorner<3, 3>() = cxb_inv;
    inv.template topRightCorner<3, 4>() = -cxb_inv * T.template topRightCorner<3, 4>();
    return inv;
  }

  /// T^-T M_bar T^-1.
  Matrix7<Scalar> transformed_mass(const MassModel<Scalar>& mass) const {
    const Matrix7<Scalar> ti = T_inverse();
    return ti.transpose() * mass.full() * ti;
  }

  /// T^-T G_bar.
  Vector7<Scalar> transformed_gravity(const MassModel<Scalar>& mass) const {
    return T_inverse().transpose() * mass.G;
  }
};

template <typename Scalar>
DecouplingTransform<Scalar> decoupling_transform(const Configuration<Scalar>& q,
                                                 const ModelParams<Scalar>& p,
                                                 const MassModel<Scalar>& mass) {
  const auto k = forward_kinematics(q, p);
  const Vector2<Scalar> r = k.com - q.p_B;

  DecouplingTransform<Scalar> out;
  out.cXb.setIdentity();
  out.cXb(0, 2) = -r.y();
  out.cXb(1, 2) = r.x();
  out.inertia_base = mass.M_b(2, 2);

  out.P.setZero();
  out.P(2, 0) = -r.y();
  out.P(2, 1) = r.x();
  out.P(2, 2) = out.inertia_base / mass.m - Scalar(1);

  const Matrix3<Scalar> cxb_inv = out.cXb.inverse();
  Eigen::FullPivLU<Matrix3<Scalar>> lu(Matrix3<Scalar>::Identity() + cxb_inv * out.P);
  if (!lu.isInvertible()) throw SingularTransform("1 + cXb^-1 P is singular");
  out.Lambda = Matrix3<Scalar>::Identity() - out.P * lu.inverse() * cxb_inv;

  Eigen::LDLT<Matrix3<Scalar>> mb(mass.M_b);
  if (mb.info() != Eigen::Success || !mb.isPositive())
    throw SingularTransform("base block of the mass matrix is not invertible");
  out.T.setIdentity();
  out.T.template topLeftCorner<3, 3>() = out.cXb;
  out.T.template topRightCorner<3, 4>() = out.cXb * mb.solve(mass.M_bj);
  return out;
}

template <typename Scalar>
struct TransformedFootJacobians {
  Matrix3<Scalar> base_L;
  Matrix34<Scalar> joint_L;
  Matrix3<Scalar> base_R;
  Matrix34<Scalar> joint_R;

  Matrix37<Scalar> J_L() const {
    Matrix37<Scalar> j;
    j << base_L, joint_L;
    return j;
  }
  Matrix37<Scalar> J_R() const {
    Matrix37<Scalar> j;
    j << base_R, joint_R;
    return j;
  }
};

/// J_bar = J T^-1, evaluated numerically.
template <typename Scalar>
TransformedFootJacobians<Scalar> transformed_foot_jacobians(const Configuration<Scalar>& q,
                                                            const ModelParams<Scalar>& p,
                                                            const MassModel<Scalar>& mass) {
  const auto jac = contact_jacobians(q, p);
  const Matrix7<Scalar> ti = decoupling_transform(q, p, mass).T_inverse();
  const Matrix37<Scalar> jl = jac.J_L * ti;
  const Matrix37<Scalar> jr = jac.J_R * ti;
  return {jl.template leftCols<3>(), jl.template rightCols<4>(), jr.template leftCols<3>(),
          jr.template rightCols<4>()};
}

/// The same Jacobians through the closed form [X^T, J_j - X^T Lambda M_bj / m].
template <typename Scalar>
TransformedFootJacobians<Scalar> transformed_foot_jacobians_closed_form(
    const Configuration<Scalar>& q, const ModelParams<Scalar>& p, const MassModel<Scalar>& mass,
    const CentroidalFrame<Scalar>& frame) {
  const auto jac = contact_jacobians(q, p);
  const Matrix3<Scalar> lambda = decoupling_transform(q, p, mass).Lambda;
  const Matrix34<Scalar> shift = lambda * mass.M_bj / mass.m;
  return {frame.X_L.transpose(), jac.J_L.template rightCols<4>() - frame.X_L.transpose() * shift,
          frame.X_R.transpose(), jac.J_R.template rightCols<4>() - frame.X_R.transpose() * shift};
}

}  // namespace fourbar
