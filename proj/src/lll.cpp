#include "xifm/lll.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xifm/error.hpp"

namespace xifm::lll {

namespace {

using linops::LossyComponent;
using linops::Matrix;

double reduce_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double reduced = std::fmod(phi, two_pi);
  if (reduced < 0.0) reduced += two_pi;
  if (reduced >= two_pi) reduced = 0.0;
  return reduced;
}

PortStatistics finish(std::array<double, 4> mean, double p_abs_object) {
  PortStatistics stats;
  stats.mean = mean;
  double sum = p_abs_object;
  for (std::size_t k = 0; k < 4; ++k) {
    stats.variance[k] = linops::bernoulli_variance(mean[k]);
    sum += mean[k];
  }
  stats.p_abs_object = p_abs_object;
  stats.p_loss_env = std::max(0.0, 1.0 - sum);
  return stats;
}

Matrix swap_modes() {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 1) = 1.0;
  u(1, 0) = 1.0;
  return u;
}

}  // namespace

const char* port_label(OutputPort port) noexcept {
  switch (port) {
    case OutputPort::Port3: return "port3";
    case OutputPort::Port1: return "port1";
    case OutputPort::Port2: return "port2";
    case OutputPort::Port4: return "port4";
  }
  return "?";
}

LllSpec::LllSpec(double reflectance, double tau, double phase, bool object_present,
                 InputPort input)
    : reflectance_(reflectance),
      tau_(tau),
      phase_(0.0),
      object_present_(object_present),
      input_(input) {
  if (!(reflectance >= 0.0 && reflectance <= 1.0)) {
    fail(ErrorCode::Domain, "reflectance R must lie in [0, 1], got " + std::to_string(reflectance));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    fail(ErrorCode::Domain, "tau must lie in [0, 1], got " + std::to_string(tau));
  }
  if (!std::isfinite(phase)) fail(ErrorCode::Domain, "phase must be finite");
  phase_ = reduce_phase(phase);
}

LllSpec LllSpec::with_object(bool present) const {
  LllSpec copy = *this;
  copy.object_present_ = present;
  return copy;
}

LllSpec LllSpec::with_input(InputPort input) const {
  LllSpec copy = *this;
  copy.input_ = input;
  return copy;
}

double PortStatistics::total() const {
  double sum = p_abs_object + p_loss_env;
  for (double m : mean) sum += m;
  return sum;
}

std::size_t input_mode(InputPort input) noexcept { return input == InputPort::Port1 ? 1 : 2; }

std::size_t output_mode(OutputPort port) noexcept {
  switch (port) {
    case OutputPort::Port3: return 2;
    case OutputPort::Port1: return 3;
    case OutputPort::Port2: return 0;
    case OutputPort::Port4: return 1;
  }
  return 0;
}

std::size_t network_modes(const LllSpec& spec) noexcept { return spec.object_present() ? 5 : 4; }

std::vector<LossyComponent> build_network(const LllSpec& spec) {
  const double tau = spec.tau();
  const Matrix bs = linops::splitter(spec.reflectance());

  std::vector<LossyComponent> network;
  network.reserve(6);
  network.emplace_back(bs, tau, std::vector<std::size_t>{1, 2});  // BS1
  network.emplace_back(bs, tau, std::vector<std::size_t>{2, 0});  // M1
  network.emplace_back(bs, tau, std::vector<std::size_t>{1, 3});  // M2
  network.emplace_back(linops::phase_shift(spec.phase()), 1.0, std::vector<std::size_t>{0});
  if (spec.object_present()) {
    network.emplace_back(swap_modes(), 1.0, std::vector<std::size_t>{3, kSinkMode});
  }
  network.emplace_back(bs, tau, std::vector<std::size_t>{0, 3});  // BS2
  return network;
}

linops::TransferMatrix transfer_matrix(const LllSpec& spec) {
  const auto network = build_network(spec);
  return linops::compose(network, network_modes(spec));
}

PortStatistics port_statistics_closed_form(const LllSpec& spec) {
  const double r = spec.r_tilde();
  const double t = spec.t_tilde();
  const double c = std::cos(spec.phase());
  const double half = std::cos(0.5 * spec.phase());
  const bool first = spec.input_port() == InputPort::Port1;

  // Table order: port3, port1, port2, port4.
  std::array<double, 4> mean{};
  double p_abs = 0.0;
  if (!spec.object_present()) {
    const double fringe = r * r * r - 2.0 * r * r * t * c + r * t * t;
    const double bright = 4.0 * r * r * t * half * half;
    mean = first ? std::array<double, 4>{r * t, fringe, bright, t * t}
                 : std::array<double, 4>{t * t, bright, fringe, r * t};
  } else {
    mean = first ? std::array<double, 4>{r * t, r * r * r, r * r * t, t * t}
                 : std::array<double, 4>{t * t, r * r * t, r * t * t, r * t};
    p_abs = first ? r * t : r * r;
  }
  // The fringe expression can round a hair below zero at a dark port.
  for (double& m : mean) m = std::clamp(m, 0.0, 1.0);
  return finish(mean, p_abs);
}

PortStatistics port_statistics_engine(const LllSpec& spec) {
  const linops::TransferMatrix m = transfer_matrix(spec);
  const auto photon = linops::propagate_single_photon(m, input_mode(spec.input_port()));

  std::array<double, 4> mean{};
  for (OutputPort port : kOutputPorts) {
    mean[static_cast<std::size_t>(port)] =
        std::min(1.0, photon.port_probabilities[output_mode(port)]);
  }
  const double p_abs = spec.object_present() ? photon.port_probabilities[kSinkMode] : 0.0;
  return finish(mean, p_abs);
}

}  // namespace xifm::lll
