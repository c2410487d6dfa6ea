#include "xifm/laue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "xifm/error.hpp"

namespace xifm::laue {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) fail(ErrorCode::Domain, std::string(name) + " must be finite");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::Domain, std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

}  // namespace

void MaterialParams::validate() const {
  require_finite(rho_0, "rho_0");
  require_finite(rho_G.real(), "rho_G");
  require_finite(rho_G.imag(), "rho_G");
  require_positive(g_magnitude, "|G|");
  require_finite(omega_0, "omega_0");
  if (omega_0 < 0.0) fail(ErrorCode::Domain, "omega_0 must be non-negative");
  require_finite(gamma_damping, "gamma");
  if (gamma_damping < 0.0) fail(ErrorCode::Domain, "gamma must be non-negative");
  require_positive(refraction_n, "refraction index");
  if (!(bragg_theta > 0.0 && bragg_theta < 0.5 * std::numbers::pi)) {
    fail(ErrorCode::Domain, "Bragg angle must lie in (0, pi/2)");
  }
}

double LaueParams::tilt() const { return std::asinh(-delta_kz / (2.0 * kappa)); }

void LaueParams::validate(bool require_coupling) const {
  require_finite(alpha, "alpha");
  if (alpha < 0.0) fail(ErrorCode::Domain, "alpha must be non-negative");
  require_finite(kappa, "kappa");
  require_finite(delta_kz, "delta_kz");
  require_positive(z0, "crystal thickness z0");
  if (!require_coupling) return;
  if (kappa == 0.0) fail(ErrorCode::Domain, "kappa must be nonzero");
  if (!std::isfinite(tilt())) fail(ErrorCode::Domain, "tilt parameter is not finite");
}

Coefficients coefficients(const MaterialParams& material, double omega, double delta) {
  material.validate();
  require_positive(omega, "omega");
  require_finite(delta, "delta");
  using namespace constants;

  const double w2 = omega * omega;
  const double drive = w2 * (1.0 + material.gamma_damping * material.gamma_damping);
  const double resonance = drive - material.omega_0 * material.omega_0;
  const double scale = drive + material.omega_0 * material.omega_0;
  if (std::abs(resonance) < 1e-30 * scale) {
    fail(ErrorCode::Singularity, "omega sits on the Lorentz resonance");
  }
  const double sigma = -(kElementaryCharge * kVacuumPermeability * kSpeedOfLight) /
                       (2.0 * kElectronMass * material.refraction_n *
                        std::cos(material.bragg_theta)) *
                       omega / resonance;

  Coefficients c;
  c.alpha = sigma * omega * material.gamma_damping * material.rho_0;
  c.kappa = sigma * (w2 - material.omega_0 * material.omega_0) * std::abs(material.rho_G);
  c.delta_kz = material.g_magnitude * delta;
  c.small_angle = std::abs(delta) <= kMaxMismatchAngle;
  if (c.alpha < 0.0) {
    fail(ErrorCode::Domain,
         "material gives alpha < 0; rho_0 is a charge density and is negative for electrons");
  }
  return c;
}

double omega_from_energy_kev(double energy_kev) {
  require_positive(energy_kev, "photon energy");
  return energy_kev * 1e3 / constants::kHbarEv;
}

Amplitudes amplitudes(const LaueParams& p) {
  p.validate();
  const double xi = p.tilt();
  const double sech = 1.0 / std::cosh(xi);
  const double phase = std::cosh(xi) * p.kappa * p.z0;
  return {sech * std::cos(Complex{phase, xi}), sech * std::sin(phase)};
}

Matrix2 splitter_matrix(const LaueParams& p) {
  const Amplitudes a = amplitudes(p);
  Matrix2 bs;
  bs << kI * a.r, a.t, std::conj(a.t), kI * a.r;
  return bs;
}

linops::LossyComponent transfer(const LaueParams& p) {
  const double tau = std::exp(-2.0 * p.alpha * p.z0);
  return linops::LossyComponent(linops::Matrix(splitter_matrix(p)), tau, {0, 1});
}

Matrix2 closed_form_propagator(const LaueParams& p) {
  const Amplitudes a = amplitudes(p);
  Matrix2 m;
  m << std::conj(a.t), kI * a.r, kI * a.r, a.t;
  return std::exp(-p.alpha * p.z0) * m;
}

Matrix2 to_output_order(const Matrix2& propagator) {
  Matrix2 out;
  out.row(0) = propagator.row(1);
  out.row(1) = propagator.row(0);
  return out;
}

std::size_t recommended_steps(const LaueParams& p) {
  p.validate(false);
  const double rate = std::hypot(p.kappa, 0.5 * p.delta_kz) + p.alpha;
  return std::max(kDefaultIntegrationSteps, static_cast<std::size_t>(std::ceil(200.0 * rate * p.z0)));
}

IntegrationResult integrate_takagi_taupin(const LaueParams& p, std::size_t steps) {
  p.validate(false);
  if (steps < kMinIntegrationSteps) {
    fail(ErrorCode::Resolution, "at least " + std::to_string(kMinIntegrationSteps) +
                                    " RK4 steps are required, got " + std::to_string(steps));
  }
  // Row-major 2x2 propagator, evolved as dP/dz = A P.
  using State = std::array<Complex, 4>;
  const Complex a11 = -(p.alpha + 0.5 * kI * p.delta_kz);
  const Complex a22 = -(p.alpha - 0.5 * kI * p.delta_kz);
  const Complex a12 = kI * p.kappa;
  const auto rhs = [&](const State& x, State& dxdz, double /*z*/) {
    dxdz[0] = a11 * x[0] + a12 * x[2];
    dxdz[1] = a11 * x[1] + a12 * x[3];
    dxdz[2] = a12 * x[0] + a22 * x[2];
    dxdz[3] = a12 * x[1] + a22 * x[3];
  };

  boost::numeric::odeint::runge_kutta4<State> stepper;
  State x{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};
  const double h = p.z0 / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    stepper.do_step(rhs, x, static_cast<double>(i) * h, h);
  }

  IntegrationResult out;
  out.propagator << x[0], x[1], x[2], x[3];
  const double gain = std::exp(p.alpha * p.z0);
  out.t = std::conj(x[0]) * gain;
  out.r = -kI * x[1] * gain;
  return out;
}

double calibrate_alpha(double z0, double target_tau) {
  require_positive(z0, "crystal thickness z0");
  if (!(target_tau > 0.0 && target_tau <= 1.0)) {
    fail(ErrorCode::Domain, "target tau must lie in (0, 1], got " + std::to_string(target_tau));
  }
  return -std::log(target_tau) / (2.0 * z0);
}

CrystalModel::CrystalModel(double alpha, double kappa, double g_magnitude, double z0)
    : alpha_(alpha), kappa_(kappa), g_magnitude_(g_magnitude), z0_(z0) {
  at(0.0).validate();
  require_positive(g_magnitude_, "|G|");
}

CrystalModel CrystalModel::from_material(const MaterialParams& material, double omega,
                                         double z0) {
  const Coefficients c = coefficients(material, omega, 0.0);
  return CrystalModel(c.alpha, c.kappa, material.g_magnitude, z0);
}

CrystalModel CrystalModel::direct(double alpha, double kappa, double g_magnitude, double z0) {
  return CrystalModel(alpha, kappa, g_magnitude, z0);
}

LaueParams CrystalModel::at(double delta) const {
  return {alpha_, kappa_, g_magnitude_ * delta, z0_};
}

double CrystalModel::tau() const { return std::exp(-2.0 * alpha_ * z0_); }

std::vector<SweepPoint> angular_sweep(const CrystalModel& model, double delta_min,
                                      double delta_max, std::size_t n_points) {
  if (n_points < 2) fail(ErrorCode::InvalidArgument, "angular sweep needs at least 2 points");
  require_finite(delta_min, "delta_min");
  require_finite(delta_max, "delta_max");

  std::vector<SweepPoint> curve(n_points);
  const double step = (delta_max - delta_min) / static_cast<double>(n_points - 1);
  const double tau = model.tau();
  for (std::size_t i = 0; i < n_points; ++i) {
    const double delta = i + 1 == n_points ? delta_max : delta_min + static_cast<double>(i) * step;
    const Amplitudes a = amplitudes(model.at(delta));
    curve[i] = {delta, a.reflectance(), a.transmittance(), tau};
  }
  return curve;
}

std::vector<SweepPoint> angular_sweep(const MaterialParams& material, double omega, double z0,
                                      double delta_min, double delta_max, std::size_t n_points) {
  return angular_sweep(CrystalModel::from_material(material, omega, z0), delta_min, delta_max,
                       n_points);
}

DesignResult design_search(const CrystalModel& model, double target_reflectance,
                           double window_min, double window_max) {
  if (!(target_reflectance >= 0.0 && target_reflectance <= 1.0)) {
    fail(ErrorCode::Domain, "target reflectance must lie in [0, 1]");
  }
  if (!(window_min < window_max)) {
    fail(ErrorCode::InvalidArgument, "design window must satisfy min < max");
  }
  if (std::abs(window_min) > kMaxMismatchAngle || std::abs(window_max) > kMaxMismatchAngle) {
    fail(ErrorCode::Domain, "design window exceeds the small-angle bound of 1 mrad");
  }

  const auto reflectance = [&](double delta) { return amplitudes(model.at(delta)).reflectance(); };
  const auto miss = [&](double delta) { return reflectance(delta) - target_reflectance; };

  // Resolve the Pendelloesung fringes: the accumulated phase grows by at most
  // |G| z0 / 2 per radian of mismatch.
  const double span = 0.5 * model.g_magnitude() * model.z0() * (window_max - window_min);
  const auto n = static_cast<std::size_t>(
      std::clamp(32.0 * span, 4000.0, 4.0e6));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid[i] = window_min + (window_max - window_min) * static_cast<double>(i) / static_cast<double>(n);
  }
  grid.back() = window_max;
  if (window_min < 0.0 && window_max > 0.0) {
    grid.insert(std::lower_bound(grid.begin(), grid.end(), 0.0), 0.0);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = miss(grid[i]);

  std::vector<double> roots;
  const auto accept = [&](double delta) {
    if (std::abs(miss(delta)) < kDesignTolerance) roots.push_back(delta);
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(f[i]) < kDesignTolerance) {
      roots.push_back(grid[i]);
      continue;
    }
    if (i + 1 < grid.size() && std::abs(f[i + 1]) >= kDesignTolerance &&
        std::signbit(f[i]) != std::signbit(f[i + 1])) {
      const auto bracket = boost::math::tools::bisect(
          miss, grid[i], grid[i + 1], boost::math::tools::eps_tolerance<double>(53));
      const double best = std::abs(miss(bracket.first)) <= std::abs(miss(bracket.second))
                              ? bracket.first
                              : bracket.second;
      accept(best);
    }
    // A touching solution at a fringe extremum shows no sign change.
    if (i > 0 && i + 1 < grid.size() && std::abs(f[i]) <= std::abs(f[i - 1]) &&
        std::abs(f[i]) <= std::abs(f[i + 1]) && std::signbit(f[i - 1]) == std::signbit(f[i]) &&
        std::signbit(f[i + 1]) == std::signbit(f[i])) {
      const auto found = boost::math::tools::brent_find_minima(
          [&](double d) { return std::abs(miss(d)); }, grid[i - 1], grid[i + 1], 52);
      accept(found.first);
    }
  }

  if (roots.empty()) {
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    fail(ErrorCode::NoSolution,
         "target reflectance " + std::to_string(target_reflectance) +
             " is not attained in the window; sampled R spans [" +
             std::to_string(*lo + target_reflectance) + ", " +
             std::to_string(*hi + target_reflectance) + "]");
  }
  const double delta = *std::min_element(roots.begin(), roots.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a < b);
  });
  return {delta, reflectance(delta)};
}

DesignResult design_search(const MaterialParams& material, double omega, double z0,
                           double target_reflectance, double window_min, double window_max) {
  return design_search(CrystalModel::from_material(material, omega, z0), target_reflectance,
                       window_min, window_max);
}

}  // namespace xifm::laue
