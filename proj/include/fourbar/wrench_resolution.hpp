#pragma once

// Redundancy resolution of the two foot wrenches. The centroidal balance
// X f = m g e_y fixes three of the six components; the criteria below pick
// the remaining three.

#include <optional>
#include <string_view>

#include "fourbar/constrained.hpp"

namespace fourbar {

enum class Criterion { MinWrenchNorm, MinJointTorqueNorm, MinTangential };

inline constexpr std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::MinWrenchNorm: return "min-wrench";
    case Criterion::MinJointTorqueNorm: return "min-torque";
    case Criterion::MinTangential: return "min-tangential";
  }
  return "unknown";
}

inline std::optional<Criterion> parse_criterion(std::string_view s) {
  for (auto c : {Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm, Criterion::MinTangential})
    if (s == criterion_name(c)) return c;
  return std::nullopt;
}

/// Redundancy shared antisymmetrically between the feet:
/// f_L = X_L^-1 (m g / 2 e_y + delta), f_R = X_R^-1 (m g / 2 e_y - delta).
template <typename Scalar>
struct DeltaRedundancy {
  Vector3<Scalar> delta = Vector3<Scalar>::Zero();
};

template <typename Scalar>
WrenchPair<Scalar> wrenches_from_delta(const CentroidalFrame<Scalar>& frame, Scalar weight,
                                       const DeltaRedundancy<Scalar>& r) {
  const Vector3<Scalar> half = Vector3<Scalar>(0, weight / Scalar(2), 0);
  return {PlanarWrench<Scalar>::from_vector(frame.X_L.inverse() * (half + r.delta)),
          PlanarWrench<Scalar>::from_vector(frame.X_R.inverse() * (half - r.delta))};
}

// ---------------------------------------------------------------------------
// Minimum wrench norm

/// X^+ m g e_y with X^+ = X^T (X X^T)^-1.
template <typename Scalar>
WrenchPair<Scalar> solve_min_wrench(const CentroidalFrame<Scalar>& frame, Scalar weight) {
  const Vector3<Scalar> b(0, weight, 0);
  return WrenchPair<Scalar>::from_vector(linalg::right_inverse(frame.X(), "X") * b);
}

template <typename Scalar>
WrenchPair<Scalar> solve_min_wrench(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  return solve_min_wrench(centroidal_transforms(q, p), p.weight());
}

/// Minimises f^T W f with W = diag(weights) subject to the balance.
template <typename Scalar>
WrenchPair<Scalar> solve_min_wrench(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                                    const Vector6<Scalar>& weights) {
  if (!(weights.array() > Scalar(0)).all()) throw DomainError("wrench weights must be positive");
  const Matrix36<Scalar> x = centroidal_transforms(q, p).X();
  const Matrix36<Scalar> xw = x * weights.cwiseInverse().asDiagonal();
  const Matrix3<Scalar> gram = xw * x.transpose();
  const Vector3<Scalar> b(0, p.weight(), 0);
  return WrenchPair<Scalar>::from_vector(xw.transpose() * gram.ldlt().solve(b));
}

/// Projector 1 - X^+ X onto the wrenches that leave the balance untouched.
template <typename Scalar>
Matrix6<Scalar> wrench_nullspace_projector(const CentroidalFrame<Scalar>& frame) {
  const Matrix36<Scalar> x = frame.X();
  return Matrix6<Scalar>::Identity() - linalg::right_inverse(x, "X") * x;
}

/// Printed closed form for the minimum-norm wrenches. Needs m_b = 2 m_l.
template <typename Scalar>
WrenchPair<Scalar> closed_form_min_wrench(Scalar xi, const ModelParams<Scalar>& p) {
  using std::cos;
  if (!p.holds_hyp3()) throw Hypothesis3Violated("closed-form minimum-norm wrenches need m_b = 2 m_l");
  const Scalar c = cos(MinimalCoordinate<Scalar>(xi).value());
  const Scalar l = p.l, d = p.d, mg = p.weight();
  const Scalar d2 = d * d;
  const Scalar base = Scalar(1) / (Scalar(2) * (Scalar(1) + d2 / Scalar(4)));
  const Scalar torque = Scalar(6) * l * c / (Scalar(5) * (d2 + Scalar(4)));
  PlanarWrench<Scalar> f_L{0, mg * (base + d * (Scalar(5) * d - Scalar(6) * l * c) / (Scalar(10) * (d2 + Scalar(4)))),
                           mg * torque};
  PlanarWrench<Scalar> f_R{0, mg * (base + d * (Scalar(5) * d + Scalar(6) * l * c) / (Scalar(10) * (d2 + Scalar(4)))),
                           mg * torque};
  return {f_L, f_R};
}

// ---------------------------------------------------------------------------
// Minimum joint-torque norm

template <typename Scalar>
struct MinTorqueSolution {
  WrenchPair<Scalar> f;
  DeltaRedundancy<Scalar> delta;
  Vector4<Scalar> tau;
};

namespace detail {

template <typename Scalar>
struct TorqueMaps {
  Matrix43<Scalar> sum;   // J_Lj^T X_L^-1 + J_Rj^T X_R^-1 - 2 M_bj^T / m
  Matrix43<Scalar> diff;  // J_Lj^T X_L^-1 - J_Rj^T X_R^-1
};

template <typename Scalar>
TorqueMaps<Scalar> torque_maps(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                               const CentroidalFrame<Scalar>& frame) {
  const auto jac = contact_jacobians(q, p);
  const auto mass = mass_matrix(q, p, Scalar(0));
  const Matrix43<Scalar> left = jac.J_L.template rightCols<4>().transpose() * frame.X_L.inverse();
  const Matrix43<Scalar> right = jac.J_R.template rightCols<4>().transpose() * frame.X_R.inverse();
  return {left + right - Scalar(2) * mass.M_bj.transpose() / mass.m, left - right};
}

template <typename Scalar>
void require_regular_legs(const Configuration<Scalar>& q) {
  require_regular(q.q_j(0));
  require_regular(q.q_j(2));
}

}  // namespace detail

/// Delta = -(m g / 2) (J_Lj^T X_L^-1 - J_Rj^T X_R^-1)^+ (J_Lj^T X_L^-1 + J_Rj^T X_R^-1 - 2 M_bj^T / m) e_y.
template <typename Scalar>
DeltaRedundancy<Scalar> min_torque_delta(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                                         const CentroidalFrame<Scalar>& frame) {
  detail::require_regular_legs(q);
  const auto maps = detail::torque_maps(q, p, frame);
  const Eigen::Matrix<Scalar, 3, 4> pinv = linalg::left_inverse(maps.diff, "torque difference map");
  return {-(p.weight() / Scalar(2)) * pinv * maps.sum.col(1)};
}

template <typename Scalar>
WrenchPair<Scalar> min_torque_wrenches(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const auto frame = centroidal_transforms(q, p);
  return wrenches_from_delta(frame, p.weight(), min_torque_delta(q, p, frame));
}

template <typename Scalar>
MinTorqueSolution<Scalar> solve_min_torque(const Configuration<Scalar>& q, const ModelParams<Scalar>& p) {
  const auto frame = centroidal_transforms(q, p);
  MinTorqueSolution<Scalar> s;
  s.delta = min_torque_delta(q, p, frame);
  s.f = wrenches_from_delta(frame, p.weight(), s.delta);
  s.tau = torque_from_wrench(q, p, s.f);
  return s;
}

/// Printed closed form for the minimum-torque wrenches. With m_b = 2 m_l the
/// coefficient is written 3 l / (8 d); otherwise the general-mass form with
/// (m_b + m_l) / m * l / (2 d) is used.
template <typename Scalar>
WrenchPair<Scalar> closed_form_min_torque(Scalar xi, const ModelParams<Scalar>& p,
                                          const CentroidalFrame<Scalar>& frame) {
  using std::cos;
  using std::sin;
  require_regular(xi);
  const Scalar c = cos(xi), s = sin(xi);
  const Scalar l = p.l, d = p.d, mg = p.weight();
  const Scalar k = p.holds_hyp3() ? Scalar(3) * l * c / (Scalar(8) * d)
                                  : (p.m_b + p.m_l) / p.total_mass() * l * c / (Scalar(2) * d);
  const Scalar l1 = frame.lambda.x(), l2 = frame.lambda.y();
  const Scalar r1 = frame.rho.x(), r2 = frame.rho.y();
  const Scalar fx = k * c / s;
  PlanarWrench<Scalar> f_L{mg * fx, mg * (Scalar(0.5) + k),
                           mg * (-l1 / Scalar(2) + k * (l2 * c / s - l1) + d / Scalar(4))};
  PlanarWrench<Scalar> f_R{-mg * fx, mg * (Scalar(0.5) - k),
                           mg * (-r1 / Scalar(2) - k * (r2 * c / s - r1) - d / Scalar(4))};
  return {f_L, f_R};
}

template <typename Scalar>
WrenchPair<Scalar> closed_form_min_torque(Scalar xi, const ModelParams<Scalar>& p) {
  return closed_form_min_torque(xi, p, centroidal_transforms(chi(xi, p), p));
}

// ---------------------------------------------------------------------------
// Minimum tangential force

template <typename Scalar>
struct MinTangentialSolution {
  WrenchPair<Scalar> f;
  Vector6<Scalar> f0;  // free nullspace parameter
};

/// f = X^+ b + N_f f0 with f0 the least-norm solution of e_1^T f = e_4^T f = 0.
template <typename Scalar>
MinTangentialSolution<Scalar> solve_min_tangential(const Configuration<Scalar>& q,
                                                   const ModelParams<Scalar>& p) {
  const auto frame = centroidal_transforms(q, p);
  const Matrix36<Scalar> x = frame.X();
  const Eigen::Matrix<Scalar, 6, 3> x_pinv = linalg::right_inverse(x, "X");
  const Vector6<Scalar> particular = x_pinv * Vector3<Scalar>(0, p.weight(), 0);
  const Matrix6<Scalar> n_f = Matrix6<Scalar>::Identity() - x_pinv * x;

  Eigen::Matrix<Scalar, 2, 6> sel = Eigen::Matrix<Scalar, 2, 6>::Zero();
  sel(0, 0) = 1;
  sel(1, 3) = 1;
  const Eigen::Matrix<Scalar, 2, 6> cn = sel * n_f;
  MinTangentialSolution<Scalar> s;
  // The minimum-norm solution already has zero tangential forces; a
  // correction at round-off level would only perturb the last bits.
  const Vector2<Scalar> tangential = sel * particular;
  if (tangential.cwiseAbs().maxCoeff() <= Scalar(tolerance::pinv_cutoff) * p.weight()) {
    s.f0.setZero();
    s.f = WrenchPair<Scalar>::from_vector(particular);
    return s;
  }
  s.f0 = -linalg::pseudo_inverse(cn) * tangential;
  s.f = WrenchPair<Scalar>::from_vector(particular + n_f * s.f0);
  return s;
}

// ---------------------------------------------------------------------------

/// Wrench pair selected by `criterion`, without the joint torques.
template <typename Scalar>
WrenchPair<Scalar> resolve_wrenches(const Configuration<Scalar>& q, const ModelParams<Scalar>& p,
                                    Criterion criterion) {
  switch (criterion) {
    case Criterion::MinWrenchNorm: return solve_min_wrench(q, p);
    case Criterion::MinJointTorqueNorm: return min_torque_wrenches(q, p);
    case Criterion::MinTangential: return solve_min_tangential(q, p).f;
  }
  throw DomainError("unknown criterion");
}

}  // namespace fourbar
