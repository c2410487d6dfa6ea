#pragma once

// Symmetric Laue diffraction treated as a lossy beamsplitter. All lengths are
// metres, angles radians and frequencies rad/s.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "xifm/linops.hpp"

namespace xifm::laue {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kElectronMass = 9.1093837015e-31;     // kg
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kVacuumPermeability = 1.25663706212e-6;  // N/A^2
inline constexpr double kHbarEv = 6.582119569e-16;             // eV s
}  // namespace constants

/// Small-angle validity bound for the linearised mismatch |G| * delta.
inline constexpr double kMaxMismatchAngle = 1e-3;

/// Lorentz-model crystal and beam constants. Charge densities are signed
/// (electrons contribute negative charge), which makes alpha >= 0 above the
/// resonance.
struct MaterialParams {
  double rho_0 = 0.0;       // C/m^3
  Complex rho_G{};          // C/m^3; only |rho_G| enters kappa
  double g_magnitude = 0.0; // 1/m
  double omega_0 = 0.0;     // rad/s
  double gamma_damping = 0.0;
  double refraction_n = 1.0;
  double bragg_theta = 0.0;  // rad

  void validate() const;
};

struct LaueParams {
  double alpha = 0.0;     // 1/m
  double kappa = 0.0;     // 1/m
  double delta_kz = 0.0;  // 1/m
  double z0 = 0.0;        // m

  /// xi with sinh(xi) = -delta_kz / (2 kappa).
  double tilt() const;
  /// Finite fields, alpha >= 0 and z0 > 0; with `require_coupling` also a
  /// nonzero kappa and a finite tilt.
  void validate(bool require_coupling = true) const;
};

struct Coefficients {
  double alpha = 0.0;
  double kappa = 0.0;
  double delta_kz = 0.0;
  // False when |delta| exceeds kMaxMismatchAngle; the values are still
  // returned, callers decide whether to warn.
  bool small_angle = true;

  LaueParams at_thickness(double z0) const { return {alpha, kappa, delta_kz, z0}; }
};

Coefficients coefficients(const MaterialParams& material, double omega, double delta);

double omega_from_energy_kev(double energy_kev);

/// Transmitted and diffracted amplitudes of the lossless part:
/// t = sech(xi) cos(cosh(xi) kappa z0 + i xi), r = sech(xi) sin(cosh(xi) kappa z0).
struct Amplitudes {
  Complex t;
  double r = 0.0;
  double reflectance() const { return r * r; }
  double transmittance() const { return std::norm(t); }
};

Amplitudes amplitudes(const LaueParams& p);

/// bs(z0) = [[i r, t], [conj(t), i r]] in output order (b1, b2).
Matrix2 splitter_matrix(const LaueParams& p);

/// Lossy component with tau = exp(-2 alpha z0) and unitary bs(z0).
linops::LossyComponent transfer(const LaueParams& p);

/// Propagator a(0) -> a(z0) in closed form: exp(-alpha z0) [[conj t, i r], [i r, t]].
Matrix2 closed_form_propagator(const LaueParams& p);

/// Reorders a propagator's rows into splitter output order (b1 = a2(z0),
/// b2 = a1(z0)).
Matrix2 to_output_order(const Matrix2& propagator);

struct IntegrationResult {
  Matrix2 propagator;  // a(0) -> a(z0), absorption included
  Complex t;           // lossless transmitted amplitude, conj(P11) e^{alpha z0}
  Complex r;           // lossless diffracted amplitude, -i P12 e^{alpha z0}
};

inline constexpr std::size_t kMinIntegrationSteps = 1000;
inline constexpr std::size_t kDefaultIntegrationSteps = 10000;

/// Step count resolving the total rotation sqrt(kappa^2 + dk^2/4) z0 and the
/// decay alpha z0 at 200 steps per radian, never below the default.
std::size_t recommended_steps(const LaueParams& p);

/// Fixed-step classical RK4 integration of the deterministic coupled-mode
/// equations
///   da1/dz = -(alpha + i dk/2) a1 + i kappa a2
///   da2/dz = -(alpha - i dk/2) a2 + i kappa a1
/// from 0 to z0. Throws ErrorCode::Resolution for fewer than 1000 steps.
IntegrationResult integrate_takagi_taupin(const LaueParams& p,
                                          std::size_t steps = kDefaultIntegrationSteps);

/// Absorption coefficient giving exp(-2 alpha z0) = target_tau.
double calibrate_alpha(double z0, double target_tau);

/// Maps a mismatch angle to LaueParams at a fixed crystal thickness.
class CrystalModel {
 public:
  static CrystalModel from_material(const MaterialParams& material, double omega, double z0);
  static CrystalModel direct(double alpha, double kappa, double g_magnitude, double z0);

  LaueParams at(double delta) const;
  double alpha() const { return alpha_; }
  double kappa() const { return kappa_; }
  double g_magnitude() const { return g_magnitude_; }
  double z0() const { return z0_; }
  double tau() const;

 private:
  CrystalModel(double alpha, double kappa, double g_magnitude, double z0);

  double alpha_;
  double kappa_;
  double g_magnitude_;
  double z0_;
};

struct SweepPoint {
  double delta = 0.0;
  double reflectance = 0.0;
  double transmittance = 0.0;
  double tau = 0.0;
};

std::vector<SweepPoint> angular_sweep(const CrystalModel& model, double delta_min,
                                      double delta_max, std::size_t n_points);

std::vector<SweepPoint> angular_sweep(const MaterialParams& material, double omega, double z0,
                                      double delta_min, double delta_max, std::size_t n_points);

struct DesignResult {
  double delta = 0.0;
  double reflectance = 0.0;
};

inline constexpr double kDesignTolerance = 1e-9;

/// Smallest-|delta| angle in [window_min, window_max] whose lossless
/// reflectance equals target_reflectance to 1e-9. Sign changes on a sampling
/// grid are refined by bisection; tangential solutions are refined by
/// golden-section search on |R - target|.
DesignResult design_search(const CrystalModel& model, double target_reflectance,
                           double window_min, double window_max);

DesignResult design_search(const MaterialParams& material, double omega, double z0,
                           double target_reflectance, double window_min, double window_max);

}  // namespace xifm::laue
