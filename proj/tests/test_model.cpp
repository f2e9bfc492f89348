#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace fourbar;
using namespace oracle;

namespace {

const ModelParams<double> P{};

std::vector<double> random_xis(int n, double lo, double hi, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Configuration<double> random_configuration(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1), a(0.3, 2.8);
  Configuration<double> q;
  q.p_B << u(rng), 1 + 0.5 * u(rng);
  q.theta = 0.6 * u(rng);
  for (int i = 0; i < 4; ++i) q.q_j(i) = a(rng);
  return q;
}

}  // namespace

TEST(Chi, SymmetricConfiguration) {
  const auto q = chi(kPiD / 2, P);
  EXPECT_NEAR(q.p_B.x(), 0.1, 1e-15);
  EXPECT_NEAR(q.p_B.y(), 1.0, 1e-15);
  EXPECT_EQ(q.theta, 0.0);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(q.q_j(i), kPiD / 2, 1e-15);
}

TEST(Chi, SixtyDegrees) {
  const auto q = chi(kPiD / 3, P);
  EXPECT_NEAR(q.p_B.x(), 0.6, 1e-15);
  EXPECT_NEAR(q.p_B.y(), 0.86602540378443865, 1e-15);
  EXPECT_NEAR(q.q_j(1), 2 * kPiD / 3, 1e-15);
  EXPECT_NEAR(q.q_j(3), 2 * kPiD / 3, 1e-15);
}

TEST(Chi, JointPairsSumToPi) {
  for (double xi : random_xis(20, 0.05, kPiD - 0.05, 1)) {
    const auto q = chi(xi, P);
    EXPECT_NEAR(q.q_j(0) + q.q_j(1), kPiD, 1e-15);
    EXPECT_NEAR(q.q_j(2) + q.q_j(3), kPiD, 1e-15);
  }
}

TEST(Chi, RejectsOutsideOpenInterval) {
  EXPECT_THROW(chi(0.0, P), DomainError);
  EXPECT_THROW(chi(kPiD, P), DomainError);
  EXPECT_THROW(chi(-0.3, P), DomainError);
  EXPECT_THROW(chi(std::nan(""), P), DomainError);
  EXPECT_THROW(require_regular(1e-12), Singularity);
  EXPECT_NO_THROW(require_regular(0.1));
}

TEST(ForwardKinematics, FeetOnGroundWithSpacingD) {
  for (double xi : random_xis(100, 0.1, kPiD - 0.1, 2)) {
    const auto k = forward_kinematics(chi(xi, P), P);
    EXPECT_LT(std::abs(k.p_L.y()), 1e-12);
    EXPECT_LT(std::abs(k.p_R.y()), 1e-12);
    EXPECT_NEAR((k.p_L - k.p_R).norm(), P.d, 1e-12);
    EXPECT_NEAR(k.p_L.x(), P.d, 1e-12);
    EXPECT_NEAR(k.p_R.x(), 0.0, 1e-12);
  }
}

TEST(ForwardKinematics, CenterOfMass) {
  EXPECT_NEAR(forward_kinematics(chi(kPiD / 2, P), P).com.x(), 0.1, 1e-15);
  const auto k = forward_kinematics(chi(kPiD / 3, P), P);
  EXPECT_NEAR(k.com.y(), frozen::com_y_pi3, 1e-15);
  EXPECT_NEAR(k.com.x(), frozen::com_x_pi3, 1e-15);

  Vector2<double> weighted = Vector2<double>::Zero();
  for (const auto& pm : k.masses) weighted += pm.mass * pm.position;
  EXPECT_LT((weighted / P.total_mass() - k.com).norm(), 1e-15);
}

TEST(MassMatrix, CouplingBlockAtSymmetry) {
  const auto m = mass_matrix(chi(kPiD / 2, P), P);
  Matrix34<double> expected;
  expected << 0.5, 0, 0.5, 0, 0, 0, 0, 0, 0.25, 0, 0.25, 0;
  EXPECT_LT((m.M_bj - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MassMatrix, CouplingBlockAtSixtyDegrees) {
  const auto m = mass_matrix(chi(kPiD / 3, P), P);
  Matrix34<double> expected;
  expected << 0.43301270189221932, 0, 0.43301270189221932, 0, -0.25, 0, -0.25, 0, 0.225, 0, 0.275, 0;
  EXPECT_LT((m.M_bj - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MassMatrix, CouplingBlockMatchesClosedForm) {
  for (double xi : random_xis(100, 0.05, kPiD - 0.05, 3)) {
    const auto q = chi(xi, P);
    EXPECT_LT((mass_matrix(q, P).M_bj - coupling_block_closed_form(q.q_j, P)).cwiseAbs().maxCoeff(), 1e-12);
  }
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) {
    auto q = random_configuration(rng);
    q.theta = 0;
    EXPECT_LT((mass_matrix(q, P).M_bj - coupling_block_closed_form(q.q_j, P)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MassMatrix, TranslationalBlockIsTotalMass) {
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto m = mass_matrix(random_configuration(rng), P);
    EXPECT_NEAR(m.M_b(0, 0), 4.0, 1e-14);
    EXPECT_NEAR(m.M_b(1, 1), 4.0, 1e-14);
    EXPECT_NEAR(m.M_b(0, 1), 0.0, 1e-14);
  }
}

TEST(MassMatrix, SymmetricPositiveDefinite) {
  std::mt19937 rng(6);
  for (int i = 0; i < 50; ++i) {
    const Matrix7<double> m = mass_matrix(random_configuration(rng), P).full();
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix7<double>>(m).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(MassMatrix, ArmatureOnlyTouchesJointDiagonal) {
  const auto q = chi(1.2, P);
  const auto a = mass_matrix(q, P, 0.0);
  const auto b = mass_matrix(q, P, 0.5);
  EXPECT_EQ(a.M_b, b.M_b);
  EXPECT_EQ(a.M_bj, b.M_bj);
  EXPECT_LT((b.M_j - a.M_j - 0.5 * Matrix4<double>::Identity()).norm(), 1e-15);
  // Foot joints move no mass: the pure Gram matrix is singular there.
  EXPECT_EQ(a.M_j(1, 1), 0.0);
  EXPECT_EQ(a.M_j(3, 3), 0.0);
}

TEST(ContactJacobians, MatchFiniteDifferences) {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_configuration(rng);
    EXPECT_LT((stacked_jacobian(q, P) - fd_contact_jacobian(q, P)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(ContactJacobians, StructureAtSymmetry) {
  const auto jac = contact_jacobians(chi(kPiD / 2, P), P);
  EXPECT_NEAR(jac.J_L(0, 3), 1.0, 1e-15);
  EXPECT_NEAR(jac.J_L(1, 3), 0.0, 1e-15);
  Eigen::Matrix<double, 1, 7> rot_l, rot_r;
  rot_l << 0, 0, 1, 1, 1, 0, 0;
  rot_r << 0, 0, 1, 0, 0, 1, 1;
  EXPECT_EQ(jac.J_L.row(2), rot_l);
  EXPECT_EQ(jac.J_R.row(2), rot_r);
  EXPECT_EQ((jac.J_L.topLeftCorner<2, 2>()), Matrix2<double>::Identity());
  EXPECT_EQ((jac.J_R.topLeftCorner<2, 2>()), Matrix2<double>::Identity());
}

TEST(ContactJacobians, TypesetFormAgreement) {
  // The typeset J_L agrees everywhere; the typeset J_R differs in its theta
  // column unless cos q3 = 0.
  std::mt19937 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto q = random_configuration(rng);
    EXPECT_LT((printed_contact_jacobians(q, P).J_L - contact_jacobians(q, P).J_L).norm(), 1e-14);
  }
  const auto q = chi(kPiD / 2, P);
  EXPECT_LT((printed_contact_jacobians(q, P).J_R - contact_jacobians(q, P).J_R).norm(), 1e-14);
  const auto q3 = chi(kPiD / 3, P);
  EXPECT_GT((printed_contact_jacobians(q3, P).J_R - contact_jacobians(q3, P).J_R).norm(), 0.5);
}

TEST(ContactJacobians, EmbeddingTangentIsInNullspace) {
  for (double xi : random_xis(100, 0.05, kPiD - 0.05, 9)) {
    const Vector7<double> t = chi_tangent(xi, P);
    EXPECT_LT((stacked_jacobian(chi(xi, P), P) * t).cwiseAbs().maxCoeff(), 1e-8);

    const double h = 1e-6;
    const Vector7<double> fd = (chi(xi + h, P).to_vector() - chi(xi - h, P).to_vector()) / (2 * h);
    EXPECT_LT((fd - t).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Gravity, BaseComponentsCarryTotalWeight) {
  std::mt19937 rng(10);
  for (int i = 0; i < 10; ++i) {
    const auto g = gravity_vector(random_configuration(rng), P);
    EXPECT_NEAR(g(0), 0.0, 1e-14);
    EXPECT_NEAR(g(1), 39.24, 1e-12);
  }
}

TEST(Gravity, FrozenValuesAndSymmetry) {
  const auto g = gravity_vector(chi(kPiD / 3, P), P);
  Vector7<double> expected;
  expected << 0, 39.24, -4.905, -2.4525, 0, -2.4525, 0;
  EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), 1e-12);

  const auto s = gravity_vector(chi(kPiD / 2, P), P);
  EXPECT_NEAR(s(3), s(5), 1e-14);
}

TEST(Gravity, IsGradientOfPotential) {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto q = random_configuration(rng);
    EXPECT_LT((gravity_vector(q, P) - fd_gravity(q, P)).cwiseAbs().maxCoeff(), 1e-7);
  }
  const auto q = chi(kPiD / 3, P);
  EXPECT_LT((gravity_vector(q, P) - fd_gravity(q, P)).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(ModelParams, Hypothesis) {
  EXPECT_TRUE(P.holds_hyp3());
  ModelParams<double> q;
  q.m_b = 3;
  EXPECT_FALSE(q.holds_hyp3());
  q.d = -1;
  EXPECT_THROW(q.validate(), DomainError);
}

TEST(LongDouble, MassModelInstantiates) {
  const ModelParams<long double> p{};
  const auto q = chi<long double>(kPi<long double> / 3, p);
  const auto m = mass_matrix(q, p);
  EXPECT_LT(static_cast<double>((m.M_bj - coupling_block_closed_form(q.q_j, p)).cwiseAbs().maxCoeff()), 1e-17);
}
