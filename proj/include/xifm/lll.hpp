#pragma once

// Triple-Laue interferometer modelled as four identical lossy splitters
// (BS1, mirrors M1 and M2, BS2), a lossless phase on the M1 arm and an
// optional opaque object on the M2 arm.

#include <array>
#include <cstddef>
#include <vector>

#include "xifm/linops.hpp"

namespace xifm::lll {

enum class InputPort { Port1, Port2 };

/// Output ports in report order: the two mirror exits (#3 read by D_M1,
/// #4 read by D_M2) bracket the two interferometer outputs (#1, #2).
enum class OutputPort : std::size_t { Port3 = 0, Port1 = 1, Port2 = 2, Port4 = 3 };

inline constexpr std::array<OutputPort, 4> kOutputPorts{OutputPort::Port3, OutputPort::Port1,
                                                        OutputPort::Port2, OutputPort::Port4};

const char* port_label(OutputPort port) noexcept;

class LllSpec {
 public:
  /// Throws ErrorCode::Domain for reflectance or tau outside [0, 1] or a
  /// non-finite phase. The phase is reduced to [0, 2 pi).
  LllSpec(double reflectance, double tau, double phase, bool object_present, InputPort input);

  double reflectance() const { return reflectance_; }
  double transmittance() const { return 1.0 - reflectance_; }
  double tau() const { return tau_; }
  double r_tilde() const { return tau_ * reflectance_; }
  double t_tilde() const { return tau_ * (1.0 - reflectance_); }
  double phase() const { return phase_; }
  bool object_present() const { return object_present_; }
  InputPort input_port() const { return input_; }

  LllSpec with_object(bool present) const;
  LllSpec with_input(InputPort input) const;

 private:
  double reflectance_;
  double tau_;
  double phase_;
  bool object_present_;
  InputPort input_;
};

struct PortStatistics {
  std::array<double, 4> mean{};      // indexed by OutputPort
  std::array<double, 4> variance{};  // indexed by OutputPort
  double p_abs_object = 0.0;
  double p_loss_env = 0.0;

  double at(OutputPort port) const { return mean[static_cast<std::size_t>(port)]; }
  double total() const;
};

// Network layout. A splitter keeps the transmitted beam on its mode and
// moves the reflected beam to its partner mode, so mode indices track the
// beam direction through the crystal plates:
//   BS1 on (1, 2); M1 on (2, 0) leaving its exit on 2; M2 on (1, 3) leaving
//   its exit on 1; phase on 0; object swaps 3 into the sink 4; BS2 on (0, 3).
inline constexpr std::size_t kSinkMode = 4;

std::size_t input_mode(InputPort input) noexcept;
std::size_t output_mode(OutputPort port) noexcept;
std::size_t network_modes(const LllSpec& spec) noexcept;

std::vector<linops::LossyComponent> build_network(const LllSpec& spec);

linops::TransferMatrix transfer_matrix(const LllSpec& spec);

/// Direct evaluation of the tabulated mean photon numbers.
PortStatistics port_statistics_closed_form(const LllSpec& spec);

/// build_network -> compose -> propagate_single_photon.
PortStatistics port_statistics_engine(const LllSpec& spec);

}  // namespace xifm::lll
