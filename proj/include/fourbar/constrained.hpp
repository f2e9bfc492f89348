#pragma once

#include "fourbar/centroidal.hpp"
#include "fourbar/linalg.hpp"

namespace fourbar {

template <typename Scalar>
struct PlanarWrench {
  Scalar fx{0};     // tangential force [N]
  Scalar fy{0};     // normal force [N]
  Scalar tau_z{0};  // contact torque [N m]

  Vector3<Scalar> vector() const { return {fx, fy, tau_z}; }
  static PlanarWrench from_vector(const Vector3<Scalar>& v) { return {v(0), v(1), v(2)}; }
};

/// Foot wrenches stacked as (f_L, f_R), matching the row order of the constraint stack.
template <typename Scalar>
struct WrenchPair {
  PlanarWrench<Scalar> f_L;
  PlanarWrench<Scalar> f_R;

  Vector6<Scalar> vector() const {
    Vector6<Scalar> v;
    v << f_L.vector(), f_R.vector();
    return v;
  }
  static WrenchPair from_vector(const Vector6<Scalar>& v) {
    return {PlanarWrench<Scalar>::from_vector(v.template head<3>()),
            PlanarWrench<Scalar>::from_vector(v.template tail<3>())};
  }
  WrenchPair exchanged() const { return {f_R, f_L}; }
};

template <typename Scalar>
struct ConstraintStack {
  Matrix67<Scalar> J;
};

/// Stacks J_L over J_R; throws RankDeficient when rank(J) < 6.
template <typename Scalar>
ConstraintStack<Scalar> stack(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const auto jac = contact_jacobians(q, p);
  ConstraintStack<Scalar> s;
  s.J << jac.J_L, jac.J_R;
  if (linalg::numerical_rank(s.J) < 6)
    throw RankDeficient("stacked contact Jacobian lost rank");
  return s;
}

/// Joint selector B = [0_{4x3} | 1_4]^T.
template <typename Scalar>
Matrix74<Scalar> joint_selector() {
  Matrix74<Scalar> b = Matrix74<Scalar>::Zero();
  b.template bottomRows<4>().setIdentity();
  return b;
}

namespace detail {

template <typename Scalar>
struct ConstrainedOperators {
  Matrix67<Scalar> J;
  Eigen::LLT<Matrix7<Scalar>> mass;
  Matrix67<Scalar> JMinv;                         // J M^-1
  Eigen::ColPivHouseholderQR<Matrix6<Scalar>> gram;  // J M^-1 J^T
  Vector7<Scalar> G;
};

template <typename Scalar>
ConstrainedOperators<Scalar> constrained_operators(const Configuration<Scalar>& q,
                                                   const ModelParams<Scalar>& p,
                                                   Scalar armature) {
  ConstrainedOperators<Scalar> ops;
  ops.J = stack(q, p).J;
  const auto mm = mass_matrix(q, p, armature);
  ops.G = mm.G;
  ops.mass.compute(mm.full());
  if (ops.mass.info() != Eigen::Success)
    throw NotPositiveDefinite("mass matrix is not positive definite");
  ops.JMinv = ops.mass.solve(ops.J.transpose()).transpose();
  ops.gram.compute(ops.JMinv * ops.J.transpose());
  if (ops.gram.rank() < 6) throw RankDeficient("J M^-1 J^T is singular");
  return ops;
}

}  // namespace detail

/// Contact wrenches that hold the mechanism still under joint torques tau:
/// f = (J M^-1 J^T)^-1 J M^-1 (G - B tau).
template <typename Scalar>
WrenchPair<Scalar> equilibrium_contact_forces(const Configuration<Scalar>& q,
                                              const ModelParams<Scalar>& p,
                                              const Vector4<Scalar>& tau,
                                              Scalar armature = Scalar(kDefaultArmature)) {
  const auto ops = detail::constrained_operators(q, p, armature);
  const Vector7<Scalar> rhs = ops.G - joint_selector<Scalar>() * tau;
  return WrenchPair<Scalar>::from_vector(ops.gram.solve(ops.JMinv * rhs));
}

/// N = 1 - J^T (J M^-1 J^T)^-1 J M^-1.
template <typename Scalar>
Matrix7<Scalar> nullspace_projector(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                                    Scalar armature = Scalar(kDefaultArmature)) {
  const auto ops = detail::constrained_operators(q, p, armature);
  const Matrix67<Scalar> solved = ops.gram.solve(ops.JMinv);
  return Matrix7<Scalar>::Identity() - ops.J.transpose() * solved;
}

/// N (B tau - G); vanishes iff tau keeps (nu, nu_dot) = (0, 0) consistent.
template <typename Scalar>
Vector7<Scalar> equilibrium_residual(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                                     const Vector4<Scalar>& tau,
                                     Scalar armature = Scalar(kDefaultArmature)) {
  const Matrix7<Scalar> n = nullspace_projector(q, p, armature);
  return n * (joint_selector<Scalar>() * tau - gravity_vector(q, p));
}

/// Joint torques that realise the foot wrenches f at equilibrium, computed in
/// the decoupled coordinates:
///   tau = (J_j M_j^-1)^+ J M^-1 (G - J^T f).
/// In those coordinates G = m g e_y, so for a balanced f the base rows of
/// G - J^T f vanish and the map is exact for the four-bar.
template <typename Scalar>
Vector4<Scalar> torque_from_wrench(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                                   const WrenchPair<Scalar>& f,
                                   Scalar armature = Scalar(kDefaultArmature)) {
  const auto mass = mass_matrix(q, p, armature);
  const auto dt = decoupling_transform(q, p, mass);
  const Matrix7<Scalar> ti = dt.T_inverse();
  const Matrix7<Scalar> m_dec = ti.transpose() * mass.full() * ti;
  const Vector7<Scalar> g_dec = ti.transpose() * mass.G;
  const Matrix67<Scalar> j_dec = stack(q, p).J * ti;

  Eigen::LLT<Matrix7<Scalar>> llt(m_dec);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("decoupled mass matrix is not positive definite");
  const Matrix67<Scalar> jminv = llt.solve(j_dec.transpose()).transpose();
  const Eigen::Matrix<Scalar, 6, 4> jj_minv = jminv.template rightCols<4>();
  const Vector7<Scalar> residual = g_dec - j_dec.transpose() * f.vector();
  return linalg::left_inverse(jj_minv, "J_j M_j^-1") * (jminv * residual);
}

}  // namespace fourbar
