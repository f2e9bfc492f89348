#pragma once

// Planar free-floating four-bar linkage: an upper rod of length d carrying
// the base frame B at its center, two legs of length l hinged at the rod ends
// (q1, q3) and two foot joints (q2, q4). Each link is a point mass at its
// center; the foot links beyond q2 and q4 are massless.
//
// Coordinates q = (x_B, y_B, theta, q1, q2, q3, q4). The "L" chain (q1, q2)
// is the one whose contact Jacobian has unit rotation entries in columns
// theta, q1, q2; standing at chi(xi) its foot is at (d, 0) and the "R" foot
// (q3, q4) is at the origin.

#include <array>
#include <cmath>
#include <string>

#include "fourbar/types.hpp"

namespace fourbar {

template <typename Scalar>
struct ModelParams {
  Scalar l{1};      // leg length [m]
  Scalar d{0.2};    // upper-rod length and foot spacing [m]
  Scalar m_l{1};    // single-leg mass [kg]
  Scalar m_b{2};    // upper-rod mass [kg]
  Scalar g{9.81};   // gravitational acceleration [m/s^2]

  Scalar total_mass() const { return m_b + Scalar(2) * m_l; }
  Scalar weight() const { return total_mass() * g; }

  /// m_b == 2 m_l up to 1e-12 relative to the total mass.
  bool holds_hyp3() const {
    using std::abs;
    return abs(m_b - Scalar(2) * m_l) <= Scalar(1e-12) * total_mass();
  }

  void validate() const {
    if (!(l > 0) || !(d > 0) || !(m_l > 0) || !(m_b > 0) || !(g > 0))
      throw DomainError("model parameters l, d, m_l, m_b, g must all be positive");
  }

  bool operator==(const ModelParams&) const = default;
};

template <typename Scalar>
struct Configuration {
  Vector2<Scalar> p_B = Vector2<Scalar>::Zero();
  Scalar theta{0};
  Vector4<Scalar> q_j = Vector4<Scalar>::Zero();

  static constexpr int kSize = 7;

  Vector7<Scalar> to_vector() const {
    Vector7<Scalar> v;
    v << p_B, theta, q_j;
    return v;
  }

  static Configuration from_vector(const Vector7<Scalar>& v) {
    return {v.template head<2>(), v(2), v.template tail<4>()};
  }
};

/// The single coordinate left once both feet are on the ground: the angle
/// between the upper rod and a leg.
template <typename Scalar>
class MinimalCoordinate {
 public:
  explicit MinimalCoordinate(Scalar xi) : xi_(xi) {
    using std::isfinite;
    if (!isfinite(static_cast<double>(xi)) || !(xi > Scalar(0)) || !(xi < kPi<Scalar>))
      throw DomainError("minimal coordinate xi must lie in (0, pi), got " +
                        std::to_string(static_cast<double>(xi)));
  }
  Scalar value() const { return xi_; }

 private:
  Scalar xi_;
};

/// Throws Singularity when |sin xi| is below the guard.
template <typename Scalar>
void require_regular(Scalar xi) {
  using std::abs;
  using std::sin;
  if (abs(sin(xi)) < Scalar(tolerance::sin_guard))
    throw Singularity("configuration too close to the collinear-leg singularity (|sin xi| < 1e-9)");
}

/// Embedding of the minimal coordinate into the configuration space.
template <typename Scalar>
Configuration<Scalar> chi(const MinimalCoordinate<Scalar>& xi, const ModelParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar a = xi.value();
  Configuration<Scalar> q;
  q.p_B << p.d / Scalar(2) + p.l * cos(a), p.l * sin(a);
  q.theta = Scalar(0);
  q.q_j << a, kPi<Scalar> - a, a, kPi<Scalar> - a;
  return q;
}

template <typename Scalar>
Configuration<Scalar> chi(Scalar xi, const ModelParams<Scalar>& p) {
  return chi(MinimalCoordinate<Scalar>(xi), p);
}

/// d chi / d xi.
template <typename Scalar>
Vector7<Scalar> chi_tangent(Scalar xi, const ModelParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  Vector7<Scalar> t;
  t << -p.l * sin(xi), p.l * cos(xi), Scalar(0), Scalar(1), Scalar(-1), Scalar(1), Scalar(-1);
  return t;
}

namespace detail {

// Offsets in the base frame of the foot and leg-midpoint of each chain.
template <typename Scalar>
Vector2<Scalar> chain_point(const ModelParams<Scalar>& p, int side, Scalar hip, Scalar along) {
  using std::cos;
  using std::sin;
  const Scalar half = p.d / Scalar(2);
  const Scalar hip_x = side == 0 ? half : -half;
  return {hip_x - along * cos(hip), -along * sin(hip)};
}

template <typename Scalar>
Vector2<Scalar> chain_point_derivative(Scalar hip, Scalar along) {
  using std::cos;
  using std::sin;
  return {along * sin(hip), -along * cos(hip)};
}

}  // namespace detail

template <typename Scalar>
struct PointMass {
  Scalar mass;
  Vector2<Scalar> position;
  Matrix27<Scalar> jacobian;  // d position / d q
};

template <typename Scalar>
struct Kinematics {
  Vector2<Scalar> p_L;
  Vector2<Scalar> p_R;
  Scalar angle_L;  // absolute orientation of the foot frames
  Scalar angle_R;
  std::array<PointMass<Scalar>, 3> masses;  // upper rod, leg L, leg R
  Vector2<Scalar> com;
};

template <typename Scalar>
Kinematics<Scalar> forward_kinematics(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const Matrix2<Scalar> rot = rotation(q.theta);
  const Matrix2<Scalar> rot_s = rot * rotation_generator<Scalar>();
  const Scalar q1 = q.q_j(0), q3 = q.q_j(2);
  const Scalar half_leg = p.l / Scalar(2);

  Kinematics<Scalar> k;
  k.p_L = q.p_B + rot * detail::chain_point(p, 0, q1, p.l);
  k.p_R = q.p_B + rot * detail::chain_point(p, 1, q3, p.l);
  k.angle_L = q.theta + q.q_j(0) + q.q_j(1);
  k.angle_R = q.theta + q.q_j(2) + q.q_j(3);

  auto point = [&](Scalar mass, const Vector2<Scalar>& offset, int joint_col,
                   const Vector2<Scalar>& joint_dir) {
    PointMass<Scalar> pm{mass, q.p_B + rot * offset, Matrix27<Scalar>::Zero()};
    pm.jacobian.template leftCols<2>().setIdentity();
    pm.jacobian.col(2) = rot_s * offset;
    if (joint_col >= 0) pm.jacobian.col(joint_col) = rot * joint_dir;
    return pm;
  };
  k.masses[0] = point(p.m_b, Vector2<Scalar>::Zero(), -1, Vector2<Scalar>::Zero());
  k.masses[1] = point(p.m_l, detail::chain_point(p, 0, q1, half_leg), 3,
                      detail::chain_point_derivative(q1, half_leg));
  k.masses[2] = point(p.m_l, detail::chain_point(p, 1, q3, half_leg), 5,
                      detail::chain_point_derivative(q3, half_leg));

  k.com.setZero();
  for (const auto& pm : k.masses) k.com += pm.mass * pm.position;
  k.com /= p.total_mass();
  return k;
}

template <typename Scalar>
Scalar potential_energy(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const auto k = forward_kinematics(q, p);
  Scalar v(0);
  for (const auto& pm : k.masses) v += pm.mass * p.g * pm.position.y();
  return v;
}

/// Joint rotor inertia added to the diagonal of M_j. The foot joints move no
/// mass, so without it the point-mass inertia is only semidefinite.
inline constexpr double kDefaultArmature = 1e-2;

template <typename Scalar>
struct MassModel {
  Matrix3<Scalar> M_b;
  Matrix34<Scalar> M_bj;
  Matrix4<Scalar> M_j;
  Vector7<Scalar> G;
  Scalar m;

  Matrix7<Scalar> full() const {
    Matrix7<Scalar> out;
    out << M_b, M_bj, M_bj.transpose(), M_j;
    return out;
  }
};

/// Generalised gravity force G = dV/dq; enters the dynamics on the left-hand side.
template <typename Scalar>
Vector7<Scalar> gravity_vector(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const auto k = forward_kinematics(q, p);
  Vector7<Scalar> G = Vector7<Scalar>::Zero();
  for (const auto& pm : k.masses) G += pm.mass * p.g * pm.jacobian.row(1).transpose();
  return G;
}

/// Point-mass Gram composition sum_k m_k Jp_k^T Jp_k, plus `armature` on the
/// joint diagonal.
template <typename Scalar>
MassModel<Scalar> mass_matrix(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                              Scalar armature = Scalar(kDefaultArmature)) {
  const auto k = forward_kinematics(q, p);
  Matrix7<Scalar> M = Matrix7<Scalar>::Zero();
  for (const auto& pm : k.masses) M.noalias() += pm.mass * pm.jacobian.transpose() * pm.jacobian;
  M.template bottomRightCorner<4, 4>().diagonal().array() += armature;

  MassModel<Scalar> out;
  out.M_b = M.template topLeftCorner<3, 3>();
  out.M_bj = M.template topRightCorner<3, 4>();
  out.M_j = M.template bottomRightCorner<4, 4>();
  out.G = gravity_vector(q, p);
  out.m = p.total_mass();
  return out;
}

/// Closed form of the base/joint coupling block at theta = 0.
template <typename Scalar>
Matrix34<Scalar> coupling_block_closed_form(const Vector4<Scalar>& q_j, const ModelParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar s1 = sin(q_j(0)), c1 = cos(q_j(0));
  const Scalar s3 = sin(q_j(2)), c3 = cos(q_j(2));
  const Scalar l = p.l, d = p.d;
  Matrix34<Scalar> m;
  m << l * s1, 0, l * s3, 0,
      -l * c1, 0, -l * c3, 0,
      (l * l * s1 * s1 - l * c1 * (d - l * c1)) / Scalar(2), 0,
      (l * l * s3 * s3 + l * c3 * (d + l * c3)) / Scalar(2), 0;
  return (p.m_l / Scalar(2)) * m;
}

template <typename Scalar>
struct ContactJacobians {
  Matrix37<Scalar> J_L;
  Matrix37<Scalar> J_R;
};

/// Foot-frame Jacobians: rows (vx, vy, omega) in the inertial orientation.
template <typename Scalar>
ContactJacobians<Scalar> contact_jacobians(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const Matrix2<Scalar> rot = rotation(q.theta);
  const Matrix2<Scalar> rot_s = rot * rotation_generator<Scalar>();
  const Scalar q1 = q.q_j(0), q3 = q.q_j(2);

  ContactJacobians<Scalar> out;
  out.J_L.setZero();
  out.J_R.setZero();
  out.J_L.template topLeftCorner<2, 2>().setIdentity();
  out.J_R.template topLeftCorner<2, 2>().setIdentity();
  out.J_L.template block<2, 1>(0, 2) = rot_s * detail::chain_point(p, 0, q1, p.l);
  out.J_R.template block<2, 1>(0, 2) = rot_s * detail::chain_point(p, 1, q3, p.l);
  out.J_L.template block<2, 1>(0, 3) = rot * detail::chain_point_derivative(q1, p.l);
  out.J_R.template block<2, 1>(0, 5) = rot * detail::chain_point_derivative(q3, p.l);
  out.J_L.row(2) << 0, 0, 1, 1, 1, 0, 0;
  out.J_R.row(2) << 0, 0, 1, 0, 0, 1, 1;
  return out;
}

/// The foot Jacobians exactly as typeset in the reference derivation. The
/// theta column of J_R carries a sign slip on l*c3 there; this form agrees
/// with contact_jacobians() only where cos(q3) = 0.
template <typename Scalar>
ContactJacobians<Scalar> printed_contact_jacobians(const Configuration<Scalar>& q,
                                                   const ModelParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Matrix2<Scalar> rot = rotation(q.theta);
  const Scalar s1 = sin(q.q_j(0)), c1 = cos(q.q_j(0));
  const Scalar s3 = sin(q.q_j(2)), c3 = cos(q.q_j(2));
  const Scalar l = p.l, half = p.d / Scalar(2);

  ContactJacobians<Scalar> out;
  out.J_L.setZero();
  out.J_R.setZero();
  out.J_L.template topLeftCorner<2, 2>().setIdentity();
  out.J_R.template topLeftCorner<2, 2>().setIdentity();
  out.J_L.template block<2, 1>(0, 2) = rot * Vector2<Scalar>(l * s1, half - l * c1);
  out.J_L.template block<2, 1>(0, 3) = rot * Vector2<Scalar>(l * s1, -l * c1);
  out.J_R.template block<2, 1>(0, 2) = rot * Vector2<Scalar>(l * s3, -half + l * c3);
  out.J_R.template block<2, 1>(0, 5) = rot * Vector2<Scalar>(l * s3, -l * c3);
  out.J_L.row(2) << 0, 0, 1, 1, 1, 0, 0;
  out.J_R.row(2) << 0, 0, 1, 0, 0, 1, 1;
  return out;
}

}  // namespace fourbar
