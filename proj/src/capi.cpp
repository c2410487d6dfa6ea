#include "xifm/xifm.h"

#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "xifm/error.hpp"
#include "xifm/ifm.hpp"
#include "xifm/laue.hpp"
#include "xifm/lll.hpp"
#include "xifm/oracle.hpp"

struct xifm_interferometer {
  xifm::lll::LllSpec spec;
};

struct xifm_crystal {
  xifm::laue::CrystalModel model;
};

struct xifm_curve {
  std::vector<xifm::laue::SweepPoint> points;
};

namespace {

thread_local std::string g_last_error;

xifm_status status_of(xifm::ErrorCode code) {
  using xifm::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return XIFM_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return XIFM_ERR_DOMAIN;
    case ErrorCode::Dimension: return XIFM_ERR_DIMENSION;
    case ErrorCode::Routing: return XIFM_ERR_ROUTING;
    case ErrorCode::Physicality: return XIFM_ERR_PHYSICALITY;
    case ErrorCode::Singularity: return XIFM_ERR_SINGULARITY;
    case ErrorCode::NonInvertible: return XIFM_ERR_NOT_INVERTIBLE;
    case ErrorCode::Resolution: return XIFM_ERR_RESOLUTION;
    case ErrorCode::NoSolution: return XIFM_ERR_NO_SOLUTION;
    case ErrorCode::DegenerateInterval: return XIFM_ERR_DEGENERATE_INTERVAL;
  }
  return XIFM_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
xifm_status guarded(F&& body) {
  try {
    g_last_error.clear();
    std::forward<F>(body)();
    return XIFM_OK;
  } catch (const xifm::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return XIFM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return XIFM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return XIFM_ERR_INTERNAL;
  }
}

template <class... Ptrs>
bool any_null(const Ptrs*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

xifm_status null_argument() {
  g_last_error = "required pointer argument is NULL";
  return XIFM_ERR_NULL_ARGUMENT;
}

xifm::lll::InputPort to_port(xifm_input_port port) {
  switch (port) {
    case XIFM_INPUT_PORT1: return xifm::lll::InputPort::Port1;
    case XIFM_INPUT_PORT2: return xifm::lll::InputPort::Port2;
  }
  xifm::fail(xifm::ErrorCode::InvalidArgument, "input port must be 1 or 2");
}

void copy_stats(const xifm::lll::PortStatistics& s, xifm_port_statistics* out) {
  for (int k = 0; k < 4; ++k) {
    out->mean[k] = s.mean[static_cast<std::size_t>(k)];
    out->variance[k] = s.variance[static_cast<std::size_t>(k)];
  }
  out->p_abs_object = s.p_abs_object;
  out->p_loss_env = s.p_loss_env;
}

xifm_ifm_metrics to_c(const xifm::ifm::IfmMetrics& m) {
  return {m.p_det, m.p_abs, m.eta.value_or(0.0), m.eta ? 1 : 0};
}

xifm::laue::LaueParams from_c(const xifm_laue_params& p) {
  return {p.alpha, p.kappa, p.delta_kz, p.z0};
}

xifm_laue_params to_c(const xifm::laue::LaueParams& p) {
  return {p.alpha, p.kappa, p.delta_kz, p.z0};
}

xifm::laue::MaterialParams from_c(const xifm_material& m) {
  xifm::laue::MaterialParams out;
  out.rho_0 = m.rho_0;
  out.rho_G = {m.rho_G_re, m.rho_G_im};
  out.g_magnitude = m.g_magnitude;
  out.omega_0 = m.omega_0;
  out.gamma_damping = m.gamma_damping;
  out.refraction_n = m.refraction_n;
  out.bragg_theta = m.bragg_theta;
  return out;
}

}  // namespace

extern "C" {

const char* xifm_version(void) { return "0.1.0"; }

const char* xifm_status_string(xifm_status status) {
  switch (status) {
    case XIFM_OK: return "ok";
    case XIFM_ERR_NULL_ARGUMENT: return "null argument";
    case XIFM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case XIFM_ERR_DOMAIN: return "domain error";
    case XIFM_ERR_DIMENSION: return "dimension error";
    case XIFM_ERR_ROUTING: return "routing error";
    case XIFM_ERR_PHYSICALITY: return "physicality error";
    case XIFM_ERR_SINGULARITY: return "singularity error";
    case XIFM_ERR_NOT_INVERTIBLE: return "not invertible";
    case XIFM_ERR_RESOLUTION: return "resolution error";
    case XIFM_ERR_NO_SOLUTION: return "no solution";
    case XIFM_ERR_DEGENERATE_INTERVAL: return "degenerate interval";
    case XIFM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* xifm_last_error(void) { return g_last_error.c_str(); }

xifm_status xifm_interferometer_create(double reflectance, double tau, double phase,
                                       int object_present, xifm_input_port input_port,
                                       xifm_interferometer** out) {
  if (any_null(out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    *out = new xifm_interferometer{
        xifm::lll::LllSpec(reflectance, tau, phase, object_present != 0, to_port(input_port))};
  });
}

void xifm_interferometer_destroy(xifm_interferometer* handle) { delete handle; }

xifm_status xifm_interferometer_get_params(const xifm_interferometer* handle,
                                           xifm_interferometer_params* out) {
  if (any_null(handle, out)) return null_argument();
  const auto& s = handle->spec;
  *out = {s.reflectance(),
          s.tau(),
          s.phase(),
          s.object_present() ? 1 : 0,
          s.input_port() == xifm::lll::InputPort::Port1 ? XIFM_INPUT_PORT1 : XIFM_INPUT_PORT2,
          s.r_tilde(),
          s.t_tilde()};
  return XIFM_OK;
}

xifm_status xifm_port_statistics_closed_form(const xifm_interferometer* handle,
                                             xifm_port_statistics* out) {
  if (any_null(handle, out)) return null_argument();
  return guarded([&] { copy_stats(xifm::lll::port_statistics_closed_form(handle->spec), out); });
}

xifm_status xifm_port_statistics_engine(const xifm_interferometer* handle,
                                        xifm_port_statistics* out) {
  if (any_null(handle, out)) return null_argument();
  return guarded([&] { copy_stats(xifm::lll::port_statistics_engine(handle->spec), out); });
}

xifm_status xifm_dark_port_metrics_of(const xifm_interferometer* handle,
                                      xifm_dark_port_metrics* out) {
  if (any_null(handle, out)) return null_argument();
  return guarded([&] {
    const auto d = xifm::ifm::dark_port_metrics(handle->spec);
    out->dark_port = static_cast<int>(d.dark_port);
    out->leakage = d.leakage;
    out->metrics = to_c(d.metrics);
  });
}

xifm_status xifm_oracle_simulate(const xifm_interferometer* handle,
                                 xifm_outcome_distribution* out) {
  if (any_null(handle, out)) return null_argument();
  return guarded([&] {
    const auto d = xifm::oracle::simulate(handle->spec);
    for (std::size_t k = 0; k < 4; ++k) out->ports[k] = d.ports[k];
    out->object = d.object;
    for (std::size_t e = 0; e < XIFM_ENV_MODES; ++e) {
      out->environment[e] = e < d.environment.size() ? d.environment[e] : 0.0;
    }
  });
}

xifm_status xifm_oracle_unitarity_residual(const xifm_interferometer* handle, double* residual) {
  if (any_null(handle, residual)) return null_argument();
  return guarded([&] { *residual = xifm::oracle::verify_unitarity(handle->spec); });
}

xifm_status xifm_bernoulli_variance(double mean, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = xifm::linops::bernoulli_variance(mean); });
}

xifm_status xifm_efficiency(double p_det, double p_abs, xifm_ifm_metrics* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = to_c(xifm::ifm::efficiency(p_det, p_abs)); });
}

xifm_status xifm_symmetric_metrics(double tau, xifm_ifm_metrics* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = to_c(xifm::ifm::symmetric_metrics(tau)); });
}

xifm_status xifm_asymmetric_metrics(double r_tilde, double t_tilde, xifm_input_port input_port,
                                    xifm_ifm_metrics* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] {
    *out = to_c(xifm::ifm::asymmetric_metrics(r_tilde, t_tilde, to_port(input_port)));
  });
}

xifm_status xifm_sweet_spot_of(double tau, xifm_sweet_spot* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] {
    const auto s = xifm::ifm::sweet_spot(tau);
    *out = {s.ratio.lower, s.ratio.upper, s.eta.lower, s.eta.upper};
  });
}

xifm_status xifm_max_detection(double tau, xifm_input_port input_port, double* reflectance,
                               double* p_det) {
  if (any_null(reflectance, p_det)) return null_argument();
  return guarded([&] {
    const auto best = xifm::ifm::max_detection(tau, to_port(input_port));
    *reflectance = best.reflectance;
    *p_det = best.p_det;
  });
}

xifm_status xifm_characterize(const double means_port1[4], const double* means_port2,
                              xifm_characterization* out) {
  if (any_null(means_port1, out)) return null_argument();
  return guarded([&] {
    xifm::ifm::PortMeans first{means_port1[0], means_port1[1], means_port1[2], means_port1[3]};
    std::optional<xifm::ifm::PortMeans> second;
    if (means_port2 != nullptr) {
      second = xifm::ifm::PortMeans{means_port2[0], means_port2[1], means_port2[2],
                                    means_port2[3]};
    }
    const auto c = xifm::ifm::characterize(first, second);
    *out = {c.r_tilde, c.t_tilde, c.cos2_half_phi, c.clamped ? 1 : 0, c.residual};
  });
}

xifm_status xifm_laue_coefficients(const xifm_material* material, double omega, double delta,
                                   xifm_laue_params* out, int* small_angle) {
  if (any_null(material, out)) return null_argument();
  return guarded([&] {
    const auto c = xifm::laue::coefficients(from_c(*material), omega, delta);
    *out = {c.alpha, c.kappa, c.delta_kz, 0.0};
    if (small_angle != nullptr) *small_angle = c.small_angle ? 1 : 0;
  });
}

xifm_status xifm_laue_transfer_of(const xifm_laue_params* params, xifm_laue_transfer* out) {
  if (any_null(params, out)) return null_argument();
  return guarded([&] {
    const auto p = from_c(*params);
    const auto component = xifm::laue::transfer(p);
    const auto a = xifm::laue::amplitudes(p);
    out->tau = component.tau();
    out->t_re = a.t.real();
    out->t_im = a.t.imag();
    out->r = a.r;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        out->unitary_re[2 * i + j] = component.unitary()(i, j).real();
        out->unitary_im[2 * i + j] = component.unitary()(i, j).imag();
      }
    }
  });
}

xifm_status xifm_laue_integrate(const xifm_laue_params* params, size_t steps,
                                double propagator_re[4], double propagator_im[4]) {
  if (any_null(params, propagator_re, propagator_im)) return null_argument();
  return guarded([&] {
    const auto p = from_c(*params);
    const auto result =
        xifm::laue::integrate_takagi_taupin(p, steps == 0 ? xifm::laue::recommended_steps(p) : steps);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        propagator_re[2 * i + j] = result.propagator(i, j).real();
        propagator_im[2 * i + j] = result.propagator(i, j).imag();
      }
    }
  });
}

xifm_status xifm_laue_calibrate_alpha(double z0, double target_tau, double* alpha) {
  if (any_null(alpha)) return null_argument();
  return guarded([&] { *alpha = xifm::laue::calibrate_alpha(z0, target_tau); });
}

xifm_status xifm_omega_from_energy_kev(double energy_kev, double* omega) {
  if (any_null(omega)) return null_argument();
  return guarded([&] { *omega = xifm::laue::omega_from_energy_kev(energy_kev); });
}

xifm_status xifm_crystal_create_material(const xifm_material* material, double omega, double z0,
                                         xifm_crystal** out) {
  if (any_null(material, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    *out = new xifm_crystal{xifm::laue::CrystalModel::from_material(from_c(*material), omega, z0)};
  });
}

xifm_status xifm_crystal_create_direct(double alpha, double kappa, double g_magnitude, double z0,
                                       xifm_crystal** out) {
  if (any_null(out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    *out = new xifm_crystal{xifm::laue::CrystalModel::direct(alpha, kappa, g_magnitude, z0)};
  });
}

void xifm_crystal_destroy(xifm_crystal* handle) { delete handle; }

xifm_status xifm_crystal_params_at(const xifm_crystal* handle, double delta,
                                   xifm_laue_params* out) {
  if (any_null(handle, out)) return null_argument();
  return guarded([&] { *out = to_c(handle->model.at(delta)); });
}

xifm_status xifm_crystal_sweep(const xifm_crystal* handle, double delta_min, double delta_max,
                               size_t n_points, xifm_curve** out) {
  if (any_null(handle, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    *out = new xifm_curve{xifm::laue::angular_sweep(handle->model, delta_min, delta_max, n_points)};
  });
}

size_t xifm_curve_size(const xifm_curve* curve) { return curve ? curve->points.size() : 0; }

xifm_status xifm_curve_point_at(const xifm_curve* curve, size_t index, xifm_curve_point* out) {
  if (any_null(curve, out)) return null_argument();
  if (index >= curve->points.size()) {
    g_last_error = "curve index " + std::to_string(index) + " out of range";
    return XIFM_ERR_DIMENSION;
  }
  const auto& p = curve->points[index];
  *out = {p.delta, p.reflectance, p.transmittance, p.tau};
  return XIFM_OK;
}

void xifm_curve_destroy(xifm_curve* curve) { delete curve; }

xifm_status xifm_crystal_design(const xifm_crystal* handle, double target_reflectance,
                                double window_min, double window_max, double* delta,
                                double* achieved_reflectance) {
  if (any_null(handle, delta, achieved_reflectance)) return null_argument();
  return guarded([&] {
    const auto result =
        xifm::laue::design_search(handle->model, target_reflectance, window_min, window_max);
    *delta = result.delta;
    *achieved_reflectance = result.reflectance;
  });
}

}  // extern "C"
