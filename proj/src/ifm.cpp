#include "xifm/ifm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "xifm/error.hpp"

namespace xifm::ifm {

namespace {

using lll::InputPort;
using lll::OutputPort;

constexpr double kGolden = 2.0 + 2.2360679774997896964;  // 2 + sqrt(5)
constexpr double kClampFlag = 1e-6;

void require_unit(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    fail(ErrorCode::Domain,
         std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

}  // namespace

IfmMetrics efficiency(double p_det, double p_abs) {
  require_unit(p_det, "p_det");
  require_unit(p_abs, "p_abs");
  IfmMetrics m{p_det, p_abs, std::nullopt};
  if (p_det + p_abs > 0.0) m.eta = p_det / (p_det + p_abs);
  return m;
}

IfmMetrics symmetric_metrics(double tau) {
  require_unit(tau, "tau");
  return efficiency(tau * tau * tau / 8.0, tau * tau / 4.0);
}

IfmMetrics asymmetric_metrics(double r_tilde, double t_tilde, InputPort input) {
  require_unit(r_tilde, "R~");
  require_unit(t_tilde, "T~");
  if (r_tilde + t_tilde > 1.0 + 1e-12) {
    fail(ErrorCode::Domain, "R~ + T~ = tau must not exceed 1");
  }
  // Both dark ports see R~^2 T~ once the object blocks the M2 arm.
  const double p_det = r_tilde * r_tilde * t_tilde;
  return efficiency(p_det, input == InputPort::Port1 ? r_tilde * t_tilde : r_tilde * r_tilde);
}

SweetSpot sweet_spot(double tau) {
  if (tau == 0.0) {
    fail(ErrorCode::DegenerateInterval, "sweet spot collapses to a point at tau = 0");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    fail(ErrorCode::Domain, "tau must lie in (0, 1], got " + std::to_string(tau));
  }
  SweetSpot s;
  s.ratio = {1.0, kGolden};
  s.eta = {tau / (2.0 + tau), kGolden * tau / (1.0 + kGolden + kGolden * tau)};
  return s;
}

DetectionOptimum max_detection(double tau, InputPort input) {
  require_unit(tau, "tau");
  const auto p_det = [&](double reflectance) {
    return asymmetric_metrics(tau * reflectance, tau * (1.0 - reflectance), input).p_det;
  };
  // d/dR of tau^3 R^2 (1 - R).
  const auto slope = [&](double reflectance) {
    return tau * tau * tau * reflectance * (2.0 - 3.0 * reflectance);
  };

  constexpr int kGrid = 1000;
  int best = 0;
  for (int i = 1; i <= kGrid; ++i) {
    if (p_det(double(i) / kGrid) > p_det(double(best) / kGrid)) best = i;
  }
  double lo = double(std::max(best - 1, 0)) / kGrid;
  double hi = double(std::min(best + 1, kGrid)) / kGrid;
  double arg = double(best) / kGrid;
  if (tau > 0.0 && slope(lo) > 0.0 && slope(hi) < 0.0) {
    const auto bracket = boost::math::tools::bisect(
        slope, lo, hi, boost::math::tools::eps_tolerance<double>(52));
    arg = 0.5 * (bracket.first + bracket.second);
  }
  return {arg, p_det(arg)};
}

DarkPortMetrics dark_port_metrics(const lll::LllSpec& spec) {
  const auto open = lll::port_statistics_engine(spec.with_object(false));
  const auto blocked = lll::port_statistics_engine(spec.with_object(true));

  const double c = std::cos(0.5 * spec.phase());
  const bool near_zero_phase = c * c >= 0.5;
  const bool first_input = spec.input_port() == lll::InputPort::Port1;
  const OutputPort preferred = near_zero_phase == first_input ? OutputPort::Port1 : OutputPort::Port2;
  const OutputPort other = preferred == OutputPort::Port1 ? OutputPort::Port2 : OutputPort::Port1;

  DarkPortMetrics out;
  out.dark_port = preferred;
  const double gap = open.at(other) - open.at(preferred);
  if (gap < -kDarkPortTie || (std::abs(gap) <= kDarkPortTie && blocked.at(other) > blocked.at(preferred))) {
    out.dark_port = other;
  }
  out.leakage = open.at(out.dark_port);
  out.metrics = efficiency(blocked.at(out.dark_port), blocked.p_abs_object);
  return out;
}

Characterization characterize(const PortMeans& input1, const std::optional<PortMeans>& input2) {
  const auto mean = [](const PortMeans& m, OutputPort port) {
    return m[static_cast<std::size_t>(port)];
  };
  for (double m : input1) require_unit(m, "port mean");

  const double n3 = mean(input1, OutputPort::Port3);
  const double n1 = mean(input1, OutputPort::Port1);
  const double n2 = mean(input1, OutputPort::Port2);
  const double n4 = mean(input1, OutputPort::Port4);
  if (n4 <= 0.0) fail(ErrorCode::NonInvertible, "<N4> = 0 leaves T~ = 0; cannot invert");

  Characterization c;
  c.t_tilde = std::sqrt(n4);
  c.r_tilde = n3 / c.t_tilde;
  if (c.r_tilde <= 0.0) {
    fail(ErrorCode::NonInvertible, "<N3> = 0 leaves R~ = 0 and the phase undetermined");
  }
  if (c.r_tilde + c.t_tilde > 1.0 + 1e-9) {
    fail(ErrorCode::Domain, "recovered R~ + T~ exceeds 1; measurements are unphysical");
  }
  const double raw = n2 / (4.0 * c.r_tilde * c.r_tilde * c.t_tilde);
  c.cos2_half_phi = std::clamp(raw, 0.0, 1.0);
  c.clamped = raw < -kClampFlag || raw > 1.0 + kClampFlag;

  // Re-evaluate the unused rows with cos(phi) = 2 cos^2(phi/2) - 1.
  const double r = c.r_tilde, t = c.t_tilde;
  const double cos_phi = 2.0 * c.cos2_half_phi - 1.0;
  const double fringe = r * r * r - 2.0 * r * r * t * cos_phi + r * t * t;
  const double bright = 4.0 * r * r * t * c.cos2_half_phi;
  c.residual = std::abs(fringe - n1);
  if (input2) {
    for (double m : *input2) require_unit(m, "port mean");
    const PortMeans predicted{t * t, bright, fringe, r * t};
    for (std::size_t k = 0; k < 4; ++k) {
      c.residual = std::max(c.residual, std::abs(predicted[k] - (*input2)[k]));
    }
  }
  return c;
}

}  // namespace xifm::ifm
