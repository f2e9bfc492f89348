#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fourbar/analysis.hpp"
#include "fourbar/cli/commands.hpp"
#include "fourbar/cli/output.hpp"

namespace fourbar::cli {

namespace {

using P = ModelParams<double>;
using Q = Configuration<double>;
using Vec2 = Vector2<double>;
using Vec3 = Vector3<double>;
using Vec6 = Vector6<double>;
using Vec7 = Vector7<double>;

constexpr double kHalfPi = 1.5707963267948966;

class Suite {
 public:
  void check(std::string name, double worst, double tol, std::string note = {}) {
    const bool ok = std::isfinite(worst) && worst <= tol;
    results_.push_back({std::move(name), ok ? Status::Pass : Status::Fail, worst, tol, ok ? std::string() : note});
  }
  void skip(std::string name, std::string why) {
    results_.push_back({std::move(name), Status::Skipped, 0.0, 0.0, std::move(why)});
  }
  std::vector<InvariantResult> take() { return std::move(results_); }

 private:
  std::vector<InvariantResult> results_;
};

struct Sampler {
  std::mt19937_64 rng{0x5eed2024};
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  std::vector<double> xis(int n, double a, double b) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = uniform(a, b);
    return v;
  }
  Q configuration() {
    Q q;
    q.p_B << uniform(-1, 1), uniform(0.2, 1.5);
    q.theta = uniform(-0.6, 0.6);
    for (int i = 0; i < 4; ++i) q.q_j(i) = uniform(0.3, 2.8);
    return q;
  }
};

// Foot pose (x, y, angle) stacked for both feet.
Vec6 foot_poses(const Q& q, const P& p) {
  const auto k = forward_kinematics(q, p);
  Vec6 v;
  v << k.p_L, k.angle_L, k.p_R, k.angle_R;
  return v;
}

double min_normal_force(const WrenchPair<double>& f) { return std::min(std::abs(f.f_L.fy), std::abs(f.f_R.fy)); }

double relative_gap(const Vec6& a, const Vec6& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// Printed closed forms against the pipeline after label calibration; rows
// near a vanishing normal force are excluded.
double worst_closed_form_wrench_gap(const Analysis<double>& a, Criterion c, const std::vector<double>& xis) {
  double worst = 0;
  for (double xi : xis) {
    const auto f = a.wrenches(xi, c);
    if (min_normal_force(f) <= 0.02 * a.params().weight()) continue;
    worst = std::max(worst, relative_gap(a.closed_form_wrenches(xi, c).vector(), f.vector()));
  }
  return worst;
}

void model_checks(Suite& s, const P& p, Sampler& rng, const VerifyOptions& options) {
  double worst = 0;
  for (double xi : rng.xis(100, 0.1, kPi<double> - 0.1)) {
    const auto k = forward_kinematics(chi(xi, p), p);
    worst = std::max({worst, std::abs(k.p_L.y()), std::abs(k.p_R.y()), std::abs((k.p_L - k.p_R).norm() - p.d)});
  }
  s.check("model.embedding_satisfies_contacts", worst, 1e-12);

  worst = 0;
  for (double xi : rng.xis(100, 0.1, kPi<double> - 0.1)) {
    const auto q = chi(xi, p);
    Matrix34<double> gram = mass_matrix(q, p, 0.0).M_bj;
    if (options.corrupt_coupling_block) gram(0, 0) += 1e-3;
    worst = std::max(worst, (gram - coupling_block_closed_form(q.q_j, p)).cwiseAbs().maxCoeff());
  }
  s.check("mass.coupling_block_matches_closed_form", worst, 1e-12, "Gram coupling block differs from closed form");

  double asym = 0, min_eig = std::numeric_limits<double>::infinity(), trans = 0;
  for (int i = 0; i < 100; ++i) {
    const auto mm = mass_matrix(rng.configuration(), p);
    const Matrix7<double> m = mm.full();
    asym = std::max(asym, (m - m.transpose()).cwiseAbs().maxCoeff());
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Matrix7<double>>(m).eigenvalues().minCoeff());
    trans = std::max(trans, (mm.M_b.topLeftCorner<2, 2>() - mm.m * Matrix2<double>::Identity()).cwiseAbs().maxCoeff());
  }
  s.check("mass.symmetric_positive_definite", min_eig > 0 ? asym : std::numeric_limits<double>::infinity(), 1e-12,
          "mass matrix not symmetric positive definite");
  s.check("mass.translational_block_is_total_mass", trans, 1e-12);

  worst = 0;
  double grav = 0;
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Q q = rng.configuration();
    const auto jac = contact_jacobians(q, p);
    Matrix67<double> analytic;
    analytic << jac.J_L, jac.J_R;
    const Vec7 x = q.to_vector();
    const Vec7 g = gravity_vector(q, p);
    for (int j = 0; j < 7; ++j) {
      Vec7 xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const Vec6 col = (foot_poses(Q::from_vector(xp), p) - foot_poses(Q::from_vector(xm), p)) / (2 * h);
      worst = std::max(worst, (col - analytic.col(j)).cwiseAbs().maxCoeff());
      const double dv = (potential_energy(Q::from_vector(xp), p) - potential_energy(Q::from_vector(xm), p)) / (2 * h);
      grav = std::max(grav, std::abs(dv - g(j)));
    }
  }
  s.check("model.jacobians_match_finite_differences", worst, 1e-6);
  s.check("model.gravity_is_potential_gradient", grav, 1e-7);

  worst = 0;
  for (double xi : rng.xis(100, 0.1, kPi<double> - 0.1)) {
    const auto jac = contact_jacobians(chi(xi, p), p);
    const Vec7 t = chi_tangent(xi, p);
    worst = std::max({worst, (jac.J_L * t).cwiseAbs().maxCoeff(), (jac.J_R * t).cwiseAbs().maxCoeff()});
  }
  s.check("model.embedding_tangent_in_constraint_nullspace", worst, 1e-8);
}

void constrained_checks(Suite& s, const P& p, Sampler& rng) {
  const double mg = p.weight();
  double balance = 0, idem = 0, annihilate = 0, residual = 0, round_trip = 0;
  double rank_gap = 0;
  for (double xi : rng.xis(100, kHalfPi - 0.4, kHalfPi + 0.4)) {
    const auto q = chi(xi, p);
    const auto frame = centroidal_transforms(q, p);
    const Matrix7<double> n = nullspace_projector(q, p);
    idem = std::max(idem, (n * n - n).norm());
    rank_gap = std::max(rank_gap, std::abs(static_cast<double>(linalg::numerical_rank(n, 1e-8)) - 1.0));

    const auto mm = mass_matrix(q, p);
    const Matrix67<double> j = stack(q, p).J;
    const Matrix67<double> jminv = mm.full().llt().solve(j.transpose()).transpose();
    annihilate = std::max(annihilate, (jminv * n).norm());

    for (auto c : {Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm}) {
      const auto f = resolve_wrenches(q, p, c);
      balance = std::max(balance, (frame.X() * f.vector() - Vec3(0, mg, 0)).norm() / mg);
      const Vector4<double> tau = torque_from_wrench(q, p, f);
      residual = std::max(residual, equilibrium_residual(q, p, tau).norm() / mg);
      const auto f_again = equilibrium_contact_forces(q, p, tau);
      round_trip = std::max(round_trip, (torque_from_wrench(q, p, f_again) - tau).norm());
    }
  }
  s.check("constrained.projector_rank_one", rank_gap, 0.0);
  s.check("constrained.centroidal_balance", balance, 1e-9);
  s.check("constrained.projector_idempotent", idem, 1e-10);
  s.check("constrained.projector_annihilates_constraint_map", annihilate, 1e-9);
  s.check("constrained.equilibrium_residual_vanishes", residual, 1e-9);
  s.check("constrained.torque_round_trip", round_trip, 1e-8);
}

void centroidal_checks(Suite& s, const P& p, Sampler& rng) {
  const double mg = p.weight();
  double block = 0, lambda = 0, gravity = 0, identities = 0;
  Vec7 expected = Vec7::Zero();
  expected(1) = mg;
  for (double xi : rng.xis(100, 0.2, kPi<double> - 0.2)) {
    const auto q = chi(xi, p);
    const auto mm = mass_matrix(q, p);
    const auto dt = decoupling_transform(q, p, mm);
    block = std::max(block, dt.transformed_mass(mm).topRightCorner<3, 4>().norm());
    lambda = std::max(lambda, (dt.Lambda.transpose() * Vec3::UnitY() - Vec3::UnitY()).norm());
    gravity = std::max(gravity, (dt.transformed_gravity(mm) - expected).norm() / mg);

    const auto frame = centroidal_transforms(q, p);
    const auto num = transformed_foot_jacobians(q, p, mm);
    const auto closed = transformed_foot_jacobians_closed_form(q, p, mm, frame);
    const Eigen::Matrix<double, 7, 3> sum =
        num.J_L().transpose() * frame.X_L.inverse() + num.J_R().transpose() * frame.X_R.inverse();
    const Eigen::Matrix<double, 7, 3> diff =
        num.J_L().transpose() * frame.X_L.inverse() - num.J_R().transpose() * frame.X_R.inverse();
    identities = std::max({identities, (num.base_L - frame.X_L.transpose()).norm(),
                           (num.base_R - frame.X_R.transpose()).norm(), (num.J_L() - closed.J_L()).norm(),
                           (num.J_R() - closed.J_R()).norm(),
                           (sum.topRows<3>() - 2 * Matrix3<double>::Identity()).norm(), diff.topRows<3>().norm()});
  }
  s.check("centroidal.mass_block_diagonal", block, 1e-9);
  s.check("centroidal.lambda_preserves_gravity_axis", lambda, 1e-12);
  s.check("centroidal.transformed_gravity_constant", gravity, 1e-12);
  s.check("centroidal.transformed_jacobian_identities", identities, 1e-10);
}

void wrench_checks(Suite& s, const Analysis<double>& a, Sampler& rng) {
  const P& p = a.params();
  const double mg = p.weight();
  const auto grid = rng.xis(200, kHalfPi - 0.35, kHalfPi + 0.35);

  double balance = 0, tangential = 0, f0 = 0;
  for (double xi : grid) {
    const auto q = chi(xi, p);
    const auto frame = centroidal_transforms(q, p);
    for (auto c : {Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm, Criterion::MinTangential})
      balance = std::max(balance, (frame.X() * resolve_wrenches(q, p, c).vector() - Vec3(0, mg, 0)).norm() / mg);
    const auto t = solve_min_tangential(q, p);
    tangential = std::max(tangential, (t.f.vector() - solve_min_wrench(q, p).vector()).cwiseAbs().maxCoeff());
    f0 = std::max(f0, t.f0.norm());
  }
  s.check("wrench.balance_all_criteria", balance, 1e-9);
  s.check("wrench.min_tangential_equals_min_norm", std::max(tangential, f0), 1e-12);

  double norm_drop = 0, torque_drop = 0, gradient = 0, antisym = 0;
  for (int i = 0; i < 10; ++i) {
    const double xi = rng.uniform(kHalfPi - 0.35, kHalfPi + 0.35);
    const auto q = chi(xi, p);
    const auto frame = centroidal_transforms(q, p);
    const Vec6 f = solve_min_wrench(q, p).vector();
    const Matrix6<double> n_f = wrench_nullspace_projector(frame);
    for (int k = 0; k < 5; ++k) {
      Vec6 r;
      for (int j = 0; j < 6; ++j) r(j) = rng.uniform(-mg, mg);
      norm_drop = std::max(norm_drop, f.norm() - (f + n_f * r).norm());
    }

    const auto best = min_torque_delta(q, p, frame);
    auto torque_norm2 = [&](const Vec3& delta) {
      return torque_from_wrench(q, p, wrenches_from_delta(frame, mg, DeltaRedundancy<double>{delta})).squaredNorm();
    };
    const double base = torque_norm2(best.delta);
    for (int k = 0; k < 5; ++k) {
      const Vec3 d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.1, 0.1));
      torque_drop = std::max(torque_drop, std::sqrt(base) - std::sqrt(torque_norm2(best.delta + d)));
    }
    const double h = 1e-3;
    for (int j = 0; j < 3; ++j) {
      const Vec3 e = h * Vec3::Unit(j);
      gradient = std::max(gradient, std::abs(torque_norm2(best.delta + e) - torque_norm2(best.delta - e)) / (2 * h));
    }

    const Vec3 eps(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-1, 1));
    const auto f1 = wrenches_from_delta(frame, mg, best);
    const auto f2 = wrenches_from_delta(frame, mg, DeltaRedundancy<double>{best.delta + eps});
    antisym = std::max({antisym, (f2.f_L.vector() - f1.f_L.vector() - frame.X_L.inverse() * eps).norm(),
                        (f2.f_R.vector() - f1.f_R.vector() + frame.X_R.inverse() * eps).norm(),
                        (frame.X() * (f2.vector() - f1.vector())).norm()});
  }
  s.check("wrench.min_norm_optimal", norm_drop / mg, 1e-12);
  s.check("wrench.min_torque_optimal", torque_drop, 1e-9);
  s.check("wrench.min_torque_gradient_vanishes", gradient, 1e-7);
  s.check("wrench.delta_antisymmetry", antisym / mg, 1e-12);

  const auto roots = min_torque_asymptotes_closed_form(p);
  if (roots.empty()) {
    s.skip("wrench.min_torque_load_transfer", "no root of the normal forces for these parameters");
  } else {
    double worst = 0;
    for (double xi : roots) {
      const auto f = min_torque_wrenches(chi(xi, p), p);
      const double lo = std::min(f.f_L.fy, f.f_R.fy) / mg, hi = std::max(f.f_L.fy, f.f_R.fy) / mg;
      worst = std::max({worst, std::abs(lo), std::abs(hi - 1.0)});
    }
    s.check("wrench.min_torque_load_transfer", worst, 1e-9);
  }

  s.check("wrench.min_torque_closed_form_matches", worst_closed_form_wrench_gap(a, Criterion::MinJointTorqueNorm, grid),
          1e-9, "printed minimum-torque wrenches differ from the pipeline");
  if (p.holds_hyp3())
    s.check("wrench.min_norm_closed_form_matches", worst_closed_form_wrench_gap(a, Criterion::MinWrenchNorm, grid),
            1e-9, "printed minimum-norm wrenches differ from the pipeline");
  else
    s.skip("wrench.min_norm_closed_form_matches", "closed form needs m_b = 2 m_l");
}

void scop_checks(Suite& s, const Analysis<double>& a, const RunConfig& config, Sampler& rng) {
  const P& p = a.params();
  const double mg = p.weight();
  const auto grid = rng.xis(200, kHalfPi - 0.35, kHalfPi + 0.35);
  const Criterion both[] = {Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm};

  for (auto c : both) {
    const std::string tag = c == Criterion::MinWrenchNorm ? "min_norm" : "min_torque";
    if (!p.holds_hyp3()) {
      s.skip("scop." + tag + "_closed_form_matches", "closed form needs m_b = 2 m_l");
      s.skip("scop." + tag + "_sensitivity_closed_form_matches", "closed form needs m_b = 2 m_l");
      continue;
    }
    double scop_gap = 0, eta_gap = 0;
    for (double xi : grid) {
      if (min_normal_force(a.wrenches(xi, c)) <= 0.02 * mg) continue;
      const auto numeric = a.scop(xi, c);
      const auto closed = a.closed_form_scop(xi, c);
      const auto en = a.sensitivity(xi, c);
      const auto ec = a.closed_form_sensitivity(xi, c);
      for (int k = 0; k < 2; ++k) {
        scop_gap = std::max(scop_gap, std::abs(numeric[k].value - closed[k].value));
        eta_gap = std::max(eta_gap, std::abs(en[k] - ec[k]));
      }
    }
    s.check("scop." + tag + "_closed_form_matches", scop_gap, 1e-9, "printed SCoP differs from the pipeline");
    s.check("scop." + tag + "_sensitivity_closed_form_matches", eta_gap, 1e-5,
            "printed sensitivity differs from the finite difference");
  }

  double positive = -std::numeric_limits<double>::infinity(), mirror = 0;
  for (auto c : both) {
    for (double xi : grid) {
      if (min_normal_force(a.wrenches(xi, c)) <= 0.02 * mg ||
          min_normal_force(a.wrenches(kPi<double> - xi, c)) <= 0.02 * mg)
        continue;
      const auto e = a.sensitivity(xi, c);
      const auto m = a.sensitivity(kPi<double> - xi, c);
      positive = std::max({positive, e[0], e[1]});
      mirror = std::max(mirror, std::abs(e[0] - m[1]) / std::max(1.0, std::abs(e[0])));
      if (p.holds_hyp3()) {
        const auto ce = a.closed_form_sensitivity(xi, c);
        const auto cm = a.closed_form_sensitivity(kPi<double> - xi, c);
        mirror = std::max(mirror, std::abs(ce[0] - cm[1]) / std::max(1.0, std::abs(ce[0])));
      }
    }
  }
  s.check("scop.sensitivity_negative", positive, 0.0);
  s.check("scop.sensitivity_mirror_symmetry", mirror, 1e-10);

  const auto ew = a.sensitivity(kHalfPi, Criterion::MinWrenchNorm);
  const auto et = a.sensitivity(kHalfPi, Criterion::MinJointTorqueNorm);
  s.check("scop.min_torque_less_sensitive_at_symmetry", std::abs(et[1]) - std::abs(ew[1]), 0.0,
          "minimum-torque sensitivity is not smaller at xi = pi/2");

  const auto roots = min_torque_asymptotes_closed_form(p);
  if (roots.empty()) {
    s.skip("scop.support_foot_sensitivity_decreasing", "no load-transfer configuration for these parameters");
    s.skip("scop.asymptotes_match_closed_form", "no root of the normal forces for these parameters");
  } else {
    const double target = roots.front();
    const auto at_root = min_torque_wrenches(chi(target, p), p);
    const int support = at_root.f_L.fy > at_root.f_R.fy ? 0 : 1;
    double increase = -std::numeric_limits<double>::infinity();
    double previous = std::numeric_limits<double>::infinity();
    const int n = 100;
    for (int i = 0; i <= n; ++i) {
      const double xi = kHalfPi + (target + 1e-3 - kHalfPi) * i / n;
      const double now = std::abs(a.sensitivity(xi, Criterion::MinJointTorqueNorm)[support]);
      if (i > 0) increase = std::max(increase, now - previous);
      previous = now;
    }
    s.check("scop.support_foot_sensitivity_decreasing", increase, 0.0,
            "support-foot sensitivity grows while the weight transfers onto it");

    const auto located = asymptote_locator(p, Criterion::MinJointTorqueNorm);
    double gap = located.size() == roots.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(located.size(), roots.size()); ++i)
      gap = std::max(gap, std::abs(located[i].xi - roots[i]));
    s.check("scop.asymptotes_match_closed_form", gap, 1e-8);
  }

  const auto rows = sweep(config.xi_min(), config.xi_max(), config.steps, p, Criterion::MinJointTorqueNorm);
  const auto located = asymptote_locator(p, Criterion::MinJointTorqueNorm);
  const double step = (config.xi_max() - config.xi_min()) / (config.steps - 1);
  double distance = 0, support_gap = 0;
  for (const auto& r : rows) {
    for (int k = 0; k < 2; ++k) {
      if (r.scop[k].bounded) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& root : located)
        if (root.foot == k) nearest = std::min(nearest, std::abs(r.xi - root.xi));
      distance = std::max(distance, nearest / step);
      const double other = (k == 0 ? r.wrenches.f_R.fy : r.wrenches.f_L.fy) / mg;
      support_gap = std::max(support_gap, std::abs(1.0 - other));
    }
  }
  s.check("scop.unbounded_rows_adjacent_to_roots", distance, 1.0, "unbounded row farther than one grid step from a root");
  s.check("scop.diverging_foot_is_non_supporting", support_gap, 0.1, "the other foot is not carrying the weight");

  double sweep_mirror = 0;
  for (auto c : both) {
    const auto sym = sweep(kHalfPi - 0.35, kHalfPi + 0.35, 201, p, c);
    for (std::size_t i = 0; i < sym.size(); ++i) {
      const auto& x = sym[i];
      const auto& y = sym[sym.size() - 1 - i];
      if (!x.scop[0].bounded || !y.scop[1].bounded) continue;
      // Reflection about the rod midpoint flips the sign of the SCoP offset.
      sweep_mirror = std::max(sweep_mirror, std::abs(x.scop[0].value + y.scop[1].value) / std::max(1.0, std::abs(x.scop[0].value)));
    }
  }
  s.check("scop.sweep_mirror_symmetry", sweep_mirror, 1e-9);
}

void cli_checks(Suite& s, const RunConfig& config) {
  s.check("cli.config_round_trip", parse_config(emit_config(config)) == config ? 0.0 : 1.0, 0.0);
  const auto a = sweep_csv(sweep(config.xi_min(), config.xi_max(), 41, config.model, config.criterion));
  const auto b = sweep_csv(sweep(config.xi_min(), config.xi_max(), 41, config.model, config.criterion));
  s.check("cli.sweep_csv_deterministic", a == b ? 0.0 : 1.0, 0.0);
}

}  // namespace

std::vector<InvariantResult> verify_invariants(const RunConfig& config, const VerifyOptions& options) {
  const Analysis<double> analysis(config.model);
  Sampler rng;
  Suite suite;
  model_checks(suite, config.model, rng, options);
  constrained_checks(suite, config.model, rng);
  centroidal_checks(suite, config.model, rng);
  wrench_checks(suite, analysis, rng);
  scop_checks(suite, analysis, config, rng);
  cli_checks(suite, config);
  return suite.take();
}

}  // namespace fourbar::cli
