#include "xifm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace xifm::oracle {

namespace {

using Complex = std::complex<double>;
using Dense = Eigen::MatrixXcd;

// Rails follow the plate geometry: rail 0 carries input a1, rail 1 input a2,
// rail 2 is the M1 vacuum port a3, rail 3 the M2 vacuum port a4.
enum Rail : std::size_t { kA1 = 0, kA2 = 1, kA3 = 2, kA4 = 3, kSink = 4, kFirstEnv = 5 };

// out = U in, with U the 2x2 block placed on rows/columns (i, j).
void apply_two_mode(Dense& w, std::size_t i, std::size_t j, const Complex (&u)[2][2]) {
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  for (Eigen::Index col = 0; col < w.cols(); ++col) {
    const Complex wi = w(ii, col);
    const Complex wj = w(jj, col);
    w(ii, col) = u[0][0] * wi + u[0][1] * wj;
    w(jj, col) = u[1][0] * wi + u[1][1] * wj;
  }
}

void apply_loss(Dense& w, std::size_t rail, std::size_t env, double tau) {
  // A corrupted tau > 1 keeps sqrt(tau) on the diagonal and loses the
  // coupling, which the unitarity check then reports.
  const double keep = std::sqrt(tau);
  const double leak = std::sqrt(std::max(0.0, 1.0 - tau));
  const Complex u[2][2] = {{keep, -leak}, {leak, keep}};
  apply_two_mode(w, rail, env, u);
}

}  // namespace

Circuit circuit_for(const lll::LllSpec& spec) {
  Circuit c;
  c.n_modes = kFirstEnv + 8;
  c.input = spec.input_port() == lll::InputPort::Port1 ? kA1 : kA2;
  c.sink = kSink;
  for (std::size_t e = 0; e < 8; ++e) c.environment.push_back(kFirstEnv + e);

  const double R = spec.reflectance();
  const double tau = spec.tau();
  std::size_t env = kFirstEnv;
  const auto plate = [&](std::size_t a, std::size_t b) {
    Stage s;
    s.kind = Stage::Kind::Plate;
    s.a = a;
    s.b = b;
    s.env_a = env++;
    s.env_b = env++;
    s.reflectance = R;
    s.tau = tau;
    c.stages.push_back(s);
  };

  // BS1: a1 reflected lands on rail a2 heading for M1, a1 transmitted stays
  // on rail a1 heading for M2.
  plate(kA1, kA2);
  // M1 diffracts the a2 rail onto a3; the transmitted part exits to D_M1 on
  // rail a2.
  plate(kA2, kA3);
  // M2 diffracts the a1 rail onto a4; D_M2 reads rail a1.
  plate(kA1, kA4);

  Stage phase;
  phase.kind = Stage::Kind::Phase;
  phase.a = kA3;
  phase.phase = spec.phase();
  c.stages.push_back(phase);

  if (spec.object_present()) {
    Stage object;
    object.kind = Stage::Kind::Absorber;
    object.a = kA4;
    c.stages.push_back(object);
  }

  // BS2 recombines rails a3 (from M1) and a4 (from M2). Transmission of the
  // M1 beam stays on a3, which D_2 reads; D_1 reads rail a4.
  plate(kA3, kA4);

  c.detectors[static_cast<std::size_t>(lll::OutputPort::Port3)] = kA2;
  c.detectors[static_cast<std::size_t>(lll::OutputPort::Port1)] = kA4;
  c.detectors[static_cast<std::size_t>(lll::OutputPort::Port2)] = kA3;
  c.detectors[static_cast<std::size_t>(lll::OutputPort::Port4)] = kA1;
  return c;
}

Dense full_unitary(const Circuit& circuit) {
  const auto n = static_cast<Eigen::Index>(circuit.n_modes);
  Dense w = Dense::Identity(n, n);
  for (const Stage& s : circuit.stages) {
    switch (s.kind) {
      case Stage::Kind::Plate: {
        const Complex t{std::sqrt(1.0 - s.reflectance), 0.0};
        const Complex r{0.0, std::sqrt(s.reflectance)};
        const Complex u[2][2] = {{t, r}, {r, t}};
        apply_two_mode(w, s.a, s.b, u);
        apply_loss(w, s.a, s.env_a, s.tau);
        apply_loss(w, s.b, s.env_b, s.tau);
        break;
      }
      case Stage::Kind::Phase:
        w.row(static_cast<Eigen::Index>(s.a)) *= std::polar(1.0, s.phase);
        break;
      case Stage::Kind::Absorber: {
        const Complex u[2][2] = {{0.0, 1.0}, {1.0, 0.0}};
        apply_two_mode(w, s.a, circuit.sink, u);
        break;
      }
    }
  }
  return w;
}

double OutcomeDistribution::environment_total() const {
  double sum = 0.0;
  for (double p : environment) sum += p;
  return sum;
}

double OutcomeDistribution::total() const {
  double sum = object + environment_total();
  for (double p : ports) sum += p;
  return sum;
}

OutcomeDistribution simulate(const lll::LllSpec& spec) {
  const Circuit circuit = circuit_for(spec);
  const Dense w = full_unitary(circuit);
  const Eigen::VectorXcd amplitude = w.col(static_cast<Eigen::Index>(circuit.input));

  const auto prob = [&](std::size_t mode) {
    return std::norm(amplitude(static_cast<Eigen::Index>(mode)));
  };
  OutcomeDistribution out;
  for (std::size_t k = 0; k < 4; ++k) out.ports[k] = prob(circuit.detectors[k]);
  out.object = prob(circuit.sink);
  for (std::size_t e : circuit.environment) out.environment.push_back(prob(e));
  return out;
}

double unitarity_residual(const Circuit& circuit) {
  const Dense w = full_unitary(circuit);
  const Dense defect = w * w.adjoint() - Dense::Identity(w.rows(), w.cols());
  return defect.cwiseAbs().maxCoeff();
}

double verify_unitarity(const lll::LllSpec& spec) {
  return unitarity_residual(circuit_for(spec));
}

}  // namespace xifm::oracle
