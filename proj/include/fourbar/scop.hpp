#pragma once

// Static center of pressure along the ground line, its derivative with
// respect to the minimal coordinate, sweeps and asymptote search.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fourbar/wrench_resolution.hpp"

namespace fourbar {

template <typename Scalar>
struct ScopValue {
  Scalar value{0};  // [m]
  bool bounded{true};
};

/// tau_z / fy. Unbounded when |fy| <= floor.
template <typename Scalar>
ScopValue<Scalar> static_cop_planar(const PlanarWrench<Scalar>& f, Scalar floor) {
  using std::abs;
  return {f.tau_z / f.fy, abs(f.fy) > floor};
}

/// Spatial wrench (f, mu) for a planar one, with planar (x, y, z-out)
/// mapped to spatial (x, -z, y): (fx, 0, fy, 0, -tau_z, 0).
template <typename Scalar>
Vector6<Scalar> planar_to_spatial(const PlanarWrench<Scalar>& f) {
  Vector6<Scalar> w;
  w << f.fx, 0, f.fy, 0, -f.tau_z, 0;
  return w;
}

/// (-mu_y, mu_x) / f_z for a spatial wrench (f_x, f_y, f_z, mu_x, mu_y, mu_z).
template <typename Scalar>
Vector2<Scalar> static_cop_3d(const Vector6<Scalar>& w, Scalar floor = Scalar(0)) {
  using std::abs;
  if (!(abs(w(2)) > floor)) throw Unbounded("normal force vanishes; center of pressure is unbounded");
  return Vector2<Scalar>(-w(4), w(3)) / w(2);
}

template <typename Scalar>
Scalar normal_force_floor(const ModelParams<Scalar>& p) {
  return Scalar(tolerance::normal_force_floor) * p.weight();
}

/// Per-foot values, indexed 0 = L, 1 = R.
template <typename Scalar>
using FootPair = std::array<Scalar, 2>;

// ---------------------------------------------------------------------------
// Printed closed forms (labels as printed; see LabelCalibration for mapping).

namespace detail {

template <typename Scalar>
void require_closed_form(Scalar xi, const ModelParams<Scalar>& p, Criterion c) {
  MinimalCoordinate<Scalar> checked(xi);
  if (!p.holds_hyp3()) throw Hypothesis3Violated("closed-form SCoP needs m_b = 2 m_l");
  if (c == Criterion::MinJointTorqueNorm) require_regular(xi);
}

}  // namespace detail

template <typename Scalar>
std::array<ScopValue<Scalar>, 2> scop_closed_form(Scalar xi, const ModelParams<Scalar>& p,
                                                  Criterion criterion) {
  using std::abs;
  using std::cos;
  detail::require_closed_form(xi, p, criterion);
  const Scalar c = cos(xi), l = p.l, d = p.d;
  const Scalar eps = Scalar(tolerance::normal_force_floor);
  std::array<ScopValue<Scalar>, 2> out;
  if (criterion == Criterion::MinJointTorqueNorm) {
    const Scalar num = Scalar(9) * l * d * c;
    const Scalar den[2] = {Scalar(20) * d + Scalar(6) * l * c, Scalar(20) * d - Scalar(6) * l * c};
    for (int i = 0; i < 2; ++i) out[i] = {num / den[i], abs(den[i]) > eps * Scalar(20) * d};
  } else {
    const Scalar num = Scalar(12) * l * c;
    const Scalar base = Scalar(5) * d * d + Scalar(20);
    const Scalar den[2] = {base + Scalar(6) * l * d * c, base - Scalar(6) * l * d * c};
    for (int i = 0; i < 2; ++i) out[i] = {num / den[i], abs(den[i]) > eps * base};
  }
  return out;
}

template <typename Scalar>
FootPair<Scalar> sensitivity_closed_form(Scalar xi, const ModelParams<Scalar>& p, Criterion criterion) {
  using std::cos;
  using std::sin;
  detail::require_closed_form(xi, p, criterion);
  const Scalar c = cos(xi), s = sin(xi), l = p.l, d = p.d;
  if (criterion == Criterion::MinJointTorqueNorm) {
    const Scalar num = -Scalar(45) * d * d * l * s;
    const Scalar a = Scalar(10) * d + Scalar(3) * l * c;
    const Scalar b = Scalar(10) * d - Scalar(3) * l * c;
    return {num / (a * a), num / (b * b)};
  }
  const Scalar num = -Scalar(60) * l * s * (d * d + Scalar(4));
  const Scalar a = Scalar(5) * d * d + Scalar(6) * l * d * c + Scalar(20);
  const Scalar b = Scalar(5) * d * d - Scalar(6) * l * d * c + Scalar(20);
  return {num / (a * a), num / (b * b)};
}

// ---------------------------------------------------------------------------
// Numeric pipeline: chi -> wrench criterion -> SCoP.

template <typename Scalar>
std::array<ScopValue<Scalar>, 2> scop_of(const WrenchPair<Scalar>& f, const ModelParams<Scalar>& p) {
  const Scalar floor = normal_force_floor(p);
  return {static_cop_planar(f.f_L, floor), static_cop_planar(f.f_R, floor)};
}

template <typename Scalar>
std::array<ScopValue<Scalar>, 2> scop_numeric(Scalar xi, const ModelParams<Scalar>& p, Criterion criterion) {
  return scop_of(resolve_wrenches(chi(xi, p), p, criterion), p);
}

namespace detail {

template <typename Scalar>
struct CentralDifference {
  FootPair<Scalar> eta{};
  std::array<bool, 2> valid{};
};

// A foot's difference is invalid when a probe is unbounded or its normal
// force changes sign between the probes.
template <typename Scalar>
CentralDifference<Scalar> central_difference(Scalar xi, const ModelParams<Scalar>& p,
                                             Criterion criterion, Scalar h) {
  const auto fp = resolve_wrenches(chi(xi + h, p), p, criterion);
  const auto fm = resolve_wrenches(chi(xi - h, p), p, criterion);
  const auto sp = scop_of(fp, p);
  const auto sm = scop_of(fm, p);
  const std::array<Scalar, 2> yp = {fp.f_L.fy, fp.f_R.fy};
  const std::array<Scalar, 2> ym = {fm.f_L.fy, fm.f_R.fy};
  CentralDifference<Scalar> out;
  for (int i = 0; i < 2; ++i) {
    out.valid[i] = sp[i].bounded && sm[i].bounded && (yp[i] > 0) == (ym[i] > 0);
    out.eta[i] = (sp[i].value - sm[i].value) / (Scalar(2) * h);
  }
  return out;
}

}  // namespace detail

/// (SCoP(xi + h) - SCoP(xi - h)) / 2h through the full pipeline.
template <typename Scalar>
FootPair<Scalar> sensitivity_numeric(Scalar xi, const ModelParams<Scalar>& p, Criterion criterion,
                                     Scalar h = Scalar(1e-5)) {
  if (!(h > 0)) throw DomainError("finite-difference step must be positive");
  MinimalCoordinate<Scalar> lo(xi - h), hi(xi + h);
  const auto cd = detail::central_difference(xi, p, criterion, h);
  if (!cd.valid[0] || !cd.valid[1])
    throw Unbounded("a finite-difference probe crosses a vanishing normal force");
  return cd.eta;
}

template <typename Scalar>
struct ScopSample {
  Scalar xi{0};       // [rad]
  Scalar dxi_deg{0};  // xi - pi/2 [deg]
  std::array<ScopValue<Scalar>, 2> scop{};
  FootPair<Scalar> eta{};  // NaN where the difference is not defined
  WrenchPair<Scalar> wrenches;
  Vector4<Scalar> tau = Vector4<Scalar>::Zero();
  Scalar com_x{0};
};

template <typename Scalar>
ScopSample<Scalar> sample_at(Scalar xi, const ModelParams<Scalar>& p, Criterion criterion,
                             Scalar h = Scalar(1e-5)) {
  constexpr Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  ScopSample<Scalar> s;
  s.xi = xi;
  s.dxi_deg = (xi - kPi<Scalar> / Scalar(2)) * Scalar(180) / kPi<Scalar>;
  const auto q = chi(xi, p);
  s.com_x = forward_kinematics(q, p).com.x();
  s.wrenches = resolve_wrenches(q, p, criterion);
  s.tau = torque_from_wrench(q, p, s.wrenches);
  s.scop = scop_of(s.wrenches, p);
  const auto cd = detail::central_difference(xi, p, criterion, h);
  for (int i = 0; i < 2; ++i) s.eta[i] = cd.valid[i] ? cd.eta[i] : nan;
  return s;
}

/// Uniform grid of `steps` rows on [xi_min, xi_max]. A foot's SCoP is marked
/// unbounded on both rows that bracket a sign change of its normal force.
/// Rows that cannot be evaluated are kept with NaN entries.
template <typename Scalar>
std::vector<ScopSample<Scalar>> sweep(Scalar xi_min, Scalar xi_max, int steps, const ModelParams<Scalar>& p,
                                      Criterion criterion) {
  constexpr Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  if (steps < 2) throw DomainError("a sweep needs at least two steps");
  if (!(xi_min < xi_max)) throw DomainError("sweep range must satisfy xi_min < xi_max");
  MinimalCoordinate<Scalar> lo(xi_min), hi(xi_max);
  p.validate();

  std::vector<ScopSample<Scalar>> rows(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const Scalar xi = xi_min + (xi_max - xi_min) * Scalar(i) / Scalar(steps - 1);
    auto& row = rows[static_cast<std::size_t>(i)];
    try {
      row = sample_at(xi, p, criterion);
    } catch (const Error&) {
      row = ScopSample<Scalar>{};
      row.xi = xi;
      row.dxi_deg = (xi - kPi<Scalar> / Scalar(2)) * Scalar(180) / kPi<Scalar>;
      row.scop = {ScopValue<Scalar>{nan, false}, ScopValue<Scalar>{nan, false}};
      row.eta = {nan, nan};
      row.wrenches = WrenchPair<Scalar>::from_vector(Vector6<Scalar>::Constant(nan));
      row.tau.setConstant(nan);
      row.com_x = nan;
    }
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const std::array<Scalar, 2> a = {rows[i].wrenches.f_L.fy, rows[i].wrenches.f_R.fy};
    const std::array<Scalar, 2> b = {rows[i + 1].wrenches.f_L.fy, rows[i + 1].wrenches.f_R.fy};
    for (int k = 0; k < 2; ++k) {
      if ((a[k] > 0) != (b[k] > 0)) {
        rows[i].scop[k].bounded = false;
        rows[i + 1].scop[k].bounded = false;
      }
    }
  }
  return rows;
}

template <typename Scalar>
struct Asymptote {
  Scalar xi;  // [rad]
  int foot;   // 0 = L, 1 = R; the foot whose normal force vanishes
};

/// Zeros of each foot's normal force on (0, pi): sign changes on a uniform
/// grid, refined by bisection to `tol`.
template <typename Scalar>
std::vector<Asymptote<Scalar>> asymptote_locator(const ModelParams<Scalar>& p, Criterion criterion,
                                                 int grid = 2000, Scalar tol = Scalar(1e-10)) {
  const Scalar margin = Scalar(1e-3);
  const Scalar lo = margin, hi = kPi<Scalar> - margin;
  auto normal = [&](Scalar xi, int foot) {
    const auto f = resolve_wrenches(chi(xi, p), p, criterion);
    return foot == 0 ? f.f_L.fy : f.f_R.fy;
  };

  std::vector<Asymptote<Scalar>> roots;
  for (int foot = 0; foot < 2; ++foot) {
    Scalar x0 = lo, y0 = normal(lo, foot);
    for (int i = 1; i <= grid; ++i) {
      const Scalar x1 = lo + (hi - lo) * Scalar(i) / Scalar(grid);
      const Scalar y1 = normal(x1, foot);
      if ((y0 > 0) != (y1 > 0)) {
        Scalar a = x0, b = x1, ya = y0;
        while (b - a > tol) {
          const Scalar mid = (a + b) / Scalar(2);
          const Scalar ym = normal(mid, foot);
          if ((ym > 0) == (ya > 0)) {
            a = mid;
            ya = ym;
          } else {
            b = mid;
          }
        }
        roots.push_back({(a + b) / Scalar(2), foot});
      }
      x0 = x1;
      y0 = y1;
    }
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.xi < b.xi; });
  return roots;
}

/// Roots of the minimum-torque normal forces, cos xi = +-d m / ((m_b + m_l) l).
/// Empty when that ratio exceeds one.
template <typename Scalar>
std::vector<Scalar> min_torque_asymptotes_closed_form(const ModelParams<Scalar>& p) {
  using std::acos;
  const Scalar ratio = p.d * p.total_mass() / ((p.m_b + p.m_l) * p.l);
  if (ratio > Scalar(1)) return {};
  return {acos(ratio), acos(-ratio)};
}

}  // namespace fourbar
