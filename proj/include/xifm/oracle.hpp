#pragma once

// Brute-force validator for the LLL network. Every lossy plate is expanded
// into its lossless splitter followed by one loss coupler per output mode
// into a fresh vacuum environment mode, so the whole interferometer is a
// single unitary on 4 physical + 1 object-sink + 8 environment modes. The
// construction does not go through linops::compose.

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "xifm/lll.hpp"

namespace xifm::oracle {

struct Stage {
  enum class Kind { Plate, Phase, Absorber };

  Kind kind = Kind::Plate;
  // Plate: rails a and b, each owning one environment mode.
  // Phase: rail a. Absorber: rail a is swapped into the sink.
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t env_a = 0;
  std::size_t env_b = 0;
  double reflectance = 0.0;
  double tau = 1.0;
  double phase = 0.0;
};

struct Circuit {
  std::size_t n_modes = 0;
  std::size_t input = 0;
  std::array<std::size_t, 4> detectors{};  // indexed by lll::OutputPort
  std::size_t sink = 0;
  std::vector<std::size_t> environment;
  std::vector<Stage> stages;
};

Circuit circuit_for(const lll::LllSpec& spec);

/// Product of all stage unitaries, assembled entry by entry.
Eigen::MatrixXcd full_unitary(const Circuit& circuit);

struct OutcomeDistribution {
  std::array<double, 4> ports{};  // indexed by lll::OutputPort
  double object = 0.0;
  std::vector<double> environment;

  double environment_total() const;
  double total() const;
};

OutcomeDistribution simulate(const lll::LllSpec& spec);

inline constexpr double kUnitarityTol = 1e-10;

/// max |W W^dagger - I| of the circuit's full unitary W.
double unitarity_residual(const Circuit& circuit);
double verify_unitarity(const lll::LllSpec& spec);

}  // namespace xifm::oracle
