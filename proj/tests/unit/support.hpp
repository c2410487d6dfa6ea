#pragma once

#include <cstdint>
#include <numbers>
#include <random>

#include "xifm/lll.hpp"

namespace xifm::testing {

// Seeded generator for random interferometer configurations.
class SpecGenerator {
 public:
  explicit SpecGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  lll::InputPort port() { return coin() ? lll::InputPort::Port1 : lll::InputPort::Port2; }

  lll::LllSpec spec() {
    return lll::LllSpec(uniform(0.0, 1.0), uniform(0.0, 1.0), uniform(0.0, 2.0 * std::numbers::pi),
                        coin(), port());
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace xifm::testing
