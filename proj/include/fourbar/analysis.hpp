#pragma once

// Mapping between the foot labels of the printed closed forms and the
// pipeline's labels (pipeline foot 0 is the q1/q2 chain). The printed
// expressions are only defined up to an L/R exchange, so each family is
// matched once against the pipeline at xi = pi/3 and the choice is frozen.

#include "fourbar/scop.hpp"

namespace fourbar {

struct LabelCalibration {
  bool available = false;                // false when m_b != 2 m_l
  bool min_wrench_exchanged = false;     // printed minimum-norm wrenches
  bool min_wrench_scop_exchanged = false;  // printed minimum-norm SCoP and eta
  bool min_torque_exchanged = false;     // printed minimum-torque wrenches
  bool min_torque_scop_exchanged = false;  // printed minimum-torque SCoP and eta
};

namespace detail {

template <typename Scalar>
Scalar pair_distance(const Vector6<Scalar>& a, const Vector6<Scalar>& b) {
  return (a - b).norm();
}

template <typename Scalar>
bool wrenches_exchanged(const WrenchPair<Scalar>& pipeline, const WrenchPair<Scalar>& printed) {
  return pair_distance(pipeline.vector(), printed.exchanged().vector()) <
         pair_distance(pipeline.vector(), printed.vector());
}

template <typename Scalar>
bool scop_exchanged(const std::array<ScopValue<Scalar>, 2>& pipeline,
                    const std::array<ScopValue<Scalar>, 2>& printed) {
  using std::abs;
  const Scalar straight = abs(pipeline[0].value - printed[0].value) + abs(pipeline[1].value - printed[1].value);
  const Scalar swapped = abs(pipeline[0].value - printed[1].value) + abs(pipeline[1].value - printed[0].value);
  return swapped < straight;
}

}  // namespace detail

template <typename Scalar>
LabelCalibration calibrate_labels(const ModelParams<Scalar>& p) {
  LabelCalibration cal;
  const Scalar probe = kPi<Scalar> / Scalar(3);
  const auto q = chi(probe, p);

  cal.min_torque_exchanged =
      detail::wrenches_exchanged(min_torque_wrenches(q, p), closed_form_min_torque(probe, p));
  if (!p.holds_hyp3()) return cal;

  cal.available = true;
  cal.min_wrench_exchanged = detail::wrenches_exchanged(solve_min_wrench(q, p), closed_form_min_wrench(probe, p));
  cal.min_wrench_scop_exchanged = detail::scop_exchanged(
      scop_numeric(probe, p, Criterion::MinWrenchNorm), scop_closed_form(probe, p, Criterion::MinWrenchNorm));
  cal.min_torque_scop_exchanged =
      detail::scop_exchanged(scop_numeric(probe, p, Criterion::MinJointTorqueNorm),
                             scop_closed_form(probe, p, Criterion::MinJointTorqueNorm));
  return cal;
}

/// Model parameters plus the frozen label calibration. Immutable after
/// construction; every member function is const.
template <typename Scalar>
class Analysis {
 public:
  explicit Analysis(const ModelParams<Scalar>& p) : params_(validated(p)), calibration_(calibrate_labels(p)) {}

  const ModelParams<Scalar>& params() const { return params_; }
  const LabelCalibration& calibration() const { return calibration_; }

  WrenchPair<Scalar> wrenches(Scalar xi, Criterion c) const { return resolve_wrenches(chi(xi, params_), params_, c); }

  /// Printed closed-form wrenches, relabelled to pipeline order.
  WrenchPair<Scalar> closed_form_wrenches(Scalar xi, Criterion c) const {
    if (c == Criterion::MinJointTorqueNorm) {
      const auto f = closed_form_min_torque(xi, params_);
      return calibration_.min_torque_exchanged ? f.exchanged() : f;
    }
    const auto f = closed_form_min_wrench(xi, params_);
    return calibration_.min_wrench_exchanged ? f.exchanged() : f;
  }

  std::array<ScopValue<Scalar>, 2> closed_form_scop(Scalar xi, Criterion c) const {
    auto s = scop_closed_form(xi, params_, c);
    if (scop_exchanged(c)) std::swap(s[0], s[1]);
    return s;
  }

  FootPair<Scalar> closed_form_sensitivity(Scalar xi, Criterion c) const {
    auto e = sensitivity_closed_form(xi, params_, c);
    if (scop_exchanged(c)) std::swap(e[0], e[1]);
    return e;
  }

  std::array<ScopValue<Scalar>, 2> scop(Scalar xi, Criterion c) const { return scop_numeric(xi, params_, c); }

  FootPair<Scalar> sensitivity(Scalar xi, Criterion c, Scalar h = Scalar(1e-5)) const {
    return sensitivity_numeric(xi, params_, c, h);
  }

 private:
  static const ModelParams<Scalar>& validated(const ModelParams<Scalar>& p) {
    p.validate();
    return p;
  }
  bool scop_exchanged(Criterion c) const {
    return c == Criterion::MinJointTorqueNorm ? calibration_.min_torque_scop_exchanged
                                              : calibration_.min_wrench_scop_exchanged;
  }

  ModelParams<Scalar> params_;
  LabelCalibration calibration_;
};

}  // namespace fourbar
