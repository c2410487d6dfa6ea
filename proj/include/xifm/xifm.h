/*
 * C interface to the xifm interaction-free-measurement toolkit.
 *
 * Every fallible call returns an xifm_status; on failure the message of the
 * most recent error on the calling thread is available from
 * xifm_last_error(). Handles are opaque and owned by the caller, who
 * releases them with the matching *_destroy function (NULL is accepted).
 */
#ifndef XIFM_XIFM_H
#define XIFM_XIFM_H

#include <stddef.h>

#if defined(XIFM_BUILDING_LIBRARY)
#define XIFM_API __attribute__((visibility("default")))
#else
#define XIFM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xifm_status {
  XIFM_OK = 0,
  XIFM_ERR_NULL_ARGUMENT = 1,
  XIFM_ERR_INVALID_ARGUMENT = 2,
  XIFM_ERR_DOMAIN = 3,
  XIFM_ERR_DIMENSION = 4,
  XIFM_ERR_ROUTING = 5,
  XIFM_ERR_PHYSICALITY = 6,
  XIFM_ERR_SINGULARITY = 7,
  XIFM_ERR_NOT_INVERTIBLE = 8,
  XIFM_ERR_RESOLUTION = 9,
  XIFM_ERR_NO_SOLUTION = 10,
  XIFM_ERR_DEGENERATE_INTERVAL = 11,
  XIFM_ERR_INTERNAL = 12
} xifm_status;

XIFM_API const char* xifm_version(void);
XIFM_API const char* xifm_status_string(xifm_status status);
/* Message of the last failure on this thread; empty string if none. */
XIFM_API const char* xifm_last_error(void);

typedef enum xifm_input_port { XIFM_INPUT_PORT1 = 1, XIFM_INPUT_PORT2 = 2 } xifm_input_port;

/* Index into the four-entry port arrays below (report order #3, #1, #2, #4). */
enum {
  XIFM_PORT3 = 0,
  XIFM_PORT1 = 1,
  XIFM_PORT2 = 2,
  XIFM_PORT4 = 3
};

/* ---- interferometer ----------------------------------------------------- */

typedef struct xifm_interferometer xifm_interferometer;

typedef struct xifm_interferometer_params {
  double reflectance; /* lossless R; T = 1 - R */
  double tau;
  double phase; /* reduced to [0, 2 pi) */
  int object_present;
  xifm_input_port input_port;
  double r_tilde;
  double t_tilde;
} xifm_interferometer_params;

typedef struct xifm_port_statistics {
  double mean[4];
  double variance[4];
  double p_abs_object;
  double p_loss_env;
} xifm_port_statistics;

typedef struct xifm_ifm_metrics {
  double p_det;
  double p_abs;
  double eta; /* meaningful only when eta_defined != 0 */
  int eta_defined;
} xifm_ifm_metrics;

typedef struct xifm_dark_port_metrics {
  int dark_port; /* XIFM_PORT1 or XIFM_PORT2 */
  double leakage;
  xifm_ifm_metrics metrics;
} xifm_dark_port_metrics;

#define XIFM_ENV_MODES 8

typedef struct xifm_outcome_distribution {
  double ports[4];
  double object;
  double environment[XIFM_ENV_MODES];
} xifm_outcome_distribution;

XIFM_API xifm_status xifm_interferometer_create(double reflectance, double tau, double phase,
                                                int object_present, xifm_input_port input_port,
                                                xifm_interferometer** out);
XIFM_API void xifm_interferometer_destroy(xifm_interferometer* handle);
XIFM_API xifm_status xifm_interferometer_get_params(const xifm_interferometer* handle,
                                                    xifm_interferometer_params* out);

XIFM_API xifm_status xifm_port_statistics_closed_form(const xifm_interferometer* handle,
                                                      xifm_port_statistics* out);
XIFM_API xifm_status xifm_port_statistics_engine(const xifm_interferometer* handle,
                                                 xifm_port_statistics* out);
XIFM_API xifm_status xifm_dark_port_metrics_of(const xifm_interferometer* handle,
                                               xifm_dark_port_metrics* out);

XIFM_API xifm_status xifm_oracle_simulate(const xifm_interferometer* handle,
                                          xifm_outcome_distribution* out);
XIFM_API xifm_status xifm_oracle_unitarity_residual(const xifm_interferometer* handle,
                                                    double* residual);

/* ---- figures of merit --------------------------------------------------- */

XIFM_API xifm_status xifm_bernoulli_variance(double mean, double* out);
XIFM_API xifm_status xifm_efficiency(double p_det, double p_abs, xifm_ifm_metrics* out);
XIFM_API xifm_status xifm_symmetric_metrics(double tau, xifm_ifm_metrics* out);
XIFM_API xifm_status xifm_asymmetric_metrics(double r_tilde, double t_tilde,
                                             xifm_input_port input_port, xifm_ifm_metrics* out);

typedef struct xifm_sweet_spot {
  double ratio_lower, ratio_upper;
  double eta_lower, eta_upper;
} xifm_sweet_spot;

XIFM_API xifm_status xifm_sweet_spot_of(double tau, xifm_sweet_spot* out);
XIFM_API xifm_status xifm_max_detection(double tau, xifm_input_port input_port,
                                        double* reflectance, double* p_det);

typedef struct xifm_characterization {
  double r_tilde;
  double t_tilde;
  double cos2_half_phi;
  int clamped;
  double residual;
} xifm_characterization;

/* means_port1/means_port2 hold object-free means in report order; pass NULL
 * for means_port2 when only input-1 data is available. */
XIFM_API xifm_status xifm_characterize(const double means_port1[4], const double* means_port2,
                                       xifm_characterization* out);

/* ---- Laue crystal ------------------------------------------------------- */

typedef struct xifm_material {
  double rho_0;
  double rho_G_re;
  double rho_G_im;
  double g_magnitude;
  double omega_0;
  double gamma_damping;
  double refraction_n;
  double bragg_theta;
} xifm_material;

typedef struct xifm_laue_params {
  double alpha;
  double kappa;
  double delta_kz;
  double z0;
} xifm_laue_params;

typedef struct xifm_laue_transfer {
  double tau;
  double t_re, t_im;
  double r;
  /* bs(z0) row-major, output order (b1, b2) */
  double unitary_re[4];
  double unitary_im[4];
} xifm_laue_transfer;

XIFM_API xifm_status xifm_laue_coefficients(const xifm_material* material, double omega,
                                            double delta, xifm_laue_params* out,
                                            int* small_angle);
XIFM_API xifm_status xifm_laue_transfer_of(const xifm_laue_params* params,
                                           xifm_laue_transfer* out);
/* Propagator a(0) -> a(z0) (row-major) from fixed-step RK4. steps = 0 picks
 * a count that resolves the rotation at 200 steps per radian. */
XIFM_API xifm_status xifm_laue_integrate(const xifm_laue_params* params, size_t steps,
                                         double propagator_re[4], double propagator_im[4]);
XIFM_API xifm_status xifm_laue_calibrate_alpha(double z0, double target_tau, double* alpha);
XIFM_API xifm_status xifm_omega_from_energy_kev(double energy_kev, double* omega);

typedef struct xifm_crystal xifm_crystal;

XIFM_API xifm_status xifm_crystal_create_material(const xifm_material* material, double omega,
                                                  double z0, xifm_crystal** out);
XIFM_API xifm_status xifm_crystal_create_direct(double alpha, double kappa, double g_magnitude,
                                                double z0, xifm_crystal** out);
XIFM_API void xifm_crystal_destroy(xifm_crystal* handle);
XIFM_API xifm_status xifm_crystal_params_at(const xifm_crystal* handle, double delta,
                                            xifm_laue_params* out);

typedef struct xifm_curve xifm_curve;

typedef struct xifm_curve_point {
  double delta;
  double reflectance;
  double transmittance;
  double tau;
} xifm_curve_point;

XIFM_API xifm_status xifm_crystal_sweep(const xifm_crystal* handle, double delta_min,
                                        double delta_max, size_t n_points, xifm_curve** out);
XIFM_API size_t xifm_curve_size(const xifm_curve* curve);
XIFM_API xifm_status xifm_curve_point_at(const xifm_curve* curve, size_t index,
                                         xifm_curve_point* out);
XIFM_API void xifm_curve_destroy(xifm_curve* curve);

XIFM_API xifm_status xifm_crystal_design(const xifm_crystal* handle, double target_reflectance,
                                         double window_min, double window_max, double* delta,
                                         double* achieved_reflectance);

#ifdef __cplusplus
}
#endif

#endif /* XIFM_XIFM_H */
