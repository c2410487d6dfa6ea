#pragma once

// Interaction-free-measurement figures of merit for the LLL interferometer.

#include <optional>

#include "xifm/lll.hpp"

namespace xifm::ifm {

struct IfmMetrics {
  double p_det = 0.0;
  double p_abs = 0.0;
  // Empty when p_det + p_abs == 0.
  std::optional<double> eta;
};

/// eta = P(detection) / (P(detection) + P(absorption)).
IfmMetrics efficiency(double p_det, double p_abs);

/// R~ = T~ = tau/2, phi = 0: p_det = tau^3/8, p_abs = tau^2/4.
IfmMetrics symmetric_metrics(double tau);

/// phi = pi. Input Port1 watches port #2, input Port2 watches port #1; both
/// give p_det = R~^2 T~, with p_abs = R~ T~ (input 1) or R~^2 (input 2), so
/// eta_1 = R~/(1 + R~) and eta_2 = T~/(1 + T~).
IfmMetrics asymmetric_metrics(double r_tilde, double t_tilde, lll::InputPort input);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Region where input-Port1 asymmetric operation beats the symmetric
/// configuration in both efficiency and detection probability.
struct SweetSpot {
  Interval ratio;  // R~/T~
  Interval eta;    // eta_1
};

SweetSpot sweet_spot(double tau);

/// Reflectance that maximises the asymmetric detection probability at fixed
/// tau, found by a grid scan followed by bisection on dP_det/dR.
struct DetectionOptimum {
  double reflectance = 0.0;
  double p_det = 0.0;
};

DetectionOptimum max_detection(double tau, lll::InputPort input);

/// Metrics read off the generic pipeline: the dark port is the interferometer
/// output (#1 or #2) with the smaller object-free mean, p_det is that port's
/// mean with the object in place and p_abs the object's absorption.
/// Leakages within kDarkPortTie of each other count as equal; the port with
/// the larger p_det then wins, and a full tie goes to the port that is dark
/// for this input at the nearer of phi = 0 and phi = pi.
inline constexpr double kDarkPortTie = 1e-12;

struct DarkPortMetrics {
  lll::OutputPort dark_port = lll::OutputPort::Port1;
  double leakage = 0.0;  // object-free mean at the dark port
  IfmMetrics metrics;
};

DarkPortMetrics dark_port_metrics(const lll::LllSpec& spec);

struct Characterization {
  double r_tilde = 0.0;
  double t_tilde = 0.0;
  double cos2_half_phi = 0.0;
  // Set when the raw cos^2(phi/2) left [0, 1] by more than 1e-6 and was clamped.
  bool clamped = false;
  // Largest mismatch between the measured means and the model re-evaluated
  // at the recovered parameters (port #1 of input 1, plus the input-2 column
  // when it was supplied).
  double residual = 0.0;
};

/// Object-free means for one input, indexed by lll::OutputPort.
using PortMeans = std::array<double, 4>;

/// Inverts the object-free input-Port1 means: T~ = sqrt(<N4>),
/// R~ = <N3>/T~, cos^2(phi/2) = <N2>/(4 R~^2 T~).
Characterization characterize(const PortMeans& input1,
                              const std::optional<PortMeans>& input2 = std::nullopt);

}  // namespace xifm::ifm
