#pragma once

// Thin RAII layer over the C API. Every failing status becomes a LibraryError
// carrying the library's own message.

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "xifm/xifm.h"

namespace xifm::cli {

class LibraryError : public std::runtime_error {
 public:
  LibraryError(xifm_status status, const std::string& context)
      : std::runtime_error(context + ": " + xifm_status_string(status) + ": " + xifm_last_error()),
        status_(status) {}

  xifm_status status() const { return status_; }

 private:
  xifm_status status_;
};

inline void check(xifm_status status, const char* context) {
  if (status != XIFM_OK) throw LibraryError(status, context);
}

class Interferometer {
 public:
  Interferometer(double reflectance, double tau, double phase, bool object, int input_port) {
    xifm_interferometer* raw = nullptr;
    check(xifm_interferometer_create(reflectance, tau, phase, object ? 1 : 0,
                                     static_cast<xifm_input_port>(input_port), &raw),
          "interferometer");
    handle_.reset(raw);
  }

  xifm_interferometer_params params() const {
    xifm_interferometer_params out{};
    check(xifm_interferometer_get_params(handle_.get(), &out), "interferometer parameters");
    return out;
  }

  xifm_port_statistics closed_form() const {
    xifm_port_statistics out{};
    check(xifm_port_statistics_closed_form(handle_.get(), &out), "closed-form statistics");
    return out;
  }

  xifm_port_statistics engine() const {
    xifm_port_statistics out{};
    check(xifm_port_statistics_engine(handle_.get(), &out), "engine statistics");
    return out;
  }

  xifm_dark_port_metrics dark_port() const {
    xifm_dark_port_metrics out{};
    check(xifm_dark_port_metrics_of(handle_.get(), &out), "dark-port metrics");
    return out;
  }

  xifm_outcome_distribution oracle() const {
    xifm_outcome_distribution out{};
    check(xifm_oracle_simulate(handle_.get(), &out), "oracle simulation");
    return out;
  }

  double unitarity_residual() const {
    double out = 0.0;
    check(xifm_oracle_unitarity_residual(handle_.get(), &out), "oracle unitarity");
    return out;
  }

 private:
  struct Deleter {
    void operator()(xifm_interferometer* h) const { xifm_interferometer_destroy(h); }
  };
  std::unique_ptr<xifm_interferometer, Deleter> handle_;
};

class Crystal {
 public:
  static Crystal from_material(const xifm_material& material, double omega, double z0) {
    xifm_crystal* raw = nullptr;
    check(xifm_crystal_create_material(&material, omega, z0, &raw), "crystal");
    return Crystal(raw);
  }

  static Crystal direct(double alpha, double kappa, double g_magnitude, double z0) {
    xifm_crystal* raw = nullptr;
    check(xifm_crystal_create_direct(alpha, kappa, g_magnitude, z0, &raw), "crystal");
    return Crystal(raw);
  }

  xifm_laue_params at(double delta) const {
    xifm_laue_params out{};
    check(xifm_crystal_params_at(handle_.get(), delta, &out), "crystal parameters");
    return out;
  }

  // Returns {delta, achieved reflectance}.
  std::array<double, 2> design(double target, double window_min, double window_max) const {
    std::array<double, 2> out{};
    check(xifm_crystal_design(handle_.get(), target, window_min, window_max, &out[0], &out[1]),
          "design search");
    return out;
  }

 private:
  explicit Crystal(xifm_crystal* raw) : handle_(raw) {}

  struct Deleter {
    void operator()(xifm_crystal* h) const { xifm_crystal_destroy(h); }
  };
  std::unique_ptr<xifm_crystal, Deleter> handle_;
};

inline xifm_laue_transfer laue_transfer(const xifm_laue_params& params) {
  xifm_laue_transfer out{};
  check(xifm_laue_transfer_of(&params, &out), "laue transfer");
  return out;
}

}  // namespace xifm::cli
