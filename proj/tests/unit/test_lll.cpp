#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "xifm/error.hpp"
#include "xifm/lll.hpp"

using namespace xifm;
using namespace xifm::lll;

namespace {

constexpr double kPi = std::numbers::pi;

void check_close(const PortStatistics& a, const PortStatistics& b, double tol) {
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(a.mean[k] - b.mean[k]) <= tol);
    CHECK(std::abs(a.variance[k] - b.variance[k]) <= tol);
  }
  CHECK(std::abs(a.p_abs_object - b.p_abs_object) <= tol);
  CHECK(std::abs(a.p_loss_env - b.p_loss_env) <= tol);
}

void check_invariants(const LllSpec& spec, const PortStatistics& s) {
  CHECK(std::abs(s.total() - 1.0) < 1e-12);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(s.mean[k] >= 0.0);
    CHECK(s.mean[k] <= 1.0);
    CHECK(std::abs(s.variance[k] - s.mean[k] * (1.0 - s.mean[k])) < 1e-12);
  }
  if (!spec.object_present()) CHECK(s.p_abs_object == 0.0);
}

}  // namespace

TEST_CASE("LllSpec derives the lossy coefficients and reduces the phase") {
  const LllSpec s(0.3, 0.8, -kPi, false, InputPort::Port1);
  CHECK(s.r_tilde() == doctest::Approx(0.24));
  CHECK(s.t_tilde() == doctest::Approx(0.56));
  CHECK(s.phase() == doctest::Approx(kPi));
  CHECK(LllSpec(0.5, 1.0, 5 * kPi, false, InputPort::Port1).phase() == doctest::Approx(kPi));
  CHECK(LllSpec(0.5, 1.0, 2 * kPi, false, InputPort::Port1).phase() < 1e-15);
  CHECK_THROWS_AS(LllSpec(1.1, 1.0, 0, false, InputPort::Port1), Error);
  CHECK_THROWS_AS(LllSpec(0.5, -0.1, 0, false, InputPort::Port1), Error);
  CHECK_THROWS_AS(LllSpec(0.5, 1.0, NAN, false, InputPort::Port1), Error);
}

TEST_CASE("build_network: balanced lossless interferometer darkens port #1") {
  const LllSpec s(0.5, 1.0, 0.0, false, InputPort::Port1);
  const auto m = transfer_matrix(s);
  CHECK(std::abs(m(output_mode(OutputPort::Port1), input_mode(InputPort::Port1))) < 1e-15);
}

TEST_CASE("build_network: phase pi darkens port #2 for input 1") {
  const LllSpec s(0.5, 1.0, kPi, false, InputPort::Port1);
  const auto m = transfer_matrix(s);
  CHECK(std::abs(m(output_mode(OutputPort::Port2), input_mode(InputPort::Port1))) < 1e-15);
}

TEST_CASE("build_network: tau = 0 blocks everything") {
  const LllSpec s(0.4, 0.0, 1.0, true, InputPort::Port1);
  const auto m = transfer_matrix(s);
  CHECK(m.dim() == 5);
  // The sink is fed only by the (dark) M2 arm.
  CHECK(m.entries().topLeftCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_network: component list and lossless phase") {
  const auto open = build_network(LllSpec(0.5, 0.7, 0.3, false, InputPort::Port1));
  CHECK(open.size() == 5);
  const auto blocked = build_network(LllSpec(0.5, 0.7, 0.3, true, InputPort::Port1));
  CHECK(blocked.size() == 6);
  CHECK(blocked[3].tau() == 1.0);
  CHECK(blocked[4].tau() == 1.0);
}

TEST_CASE("closed form: tabulated balanced lossless values") {
  const LllSpec open(0.5, 1.0, 0.0, false, InputPort::Port1);
  const auto a = port_statistics_closed_form(open);
  CHECK(a.at(OutputPort::Port3) == doctest::Approx(0.25));
  CHECK(a.at(OutputPort::Port1) == doctest::Approx(0.0));
  CHECK(a.at(OutputPort::Port2) == doctest::Approx(0.5));
  CHECK(a.at(OutputPort::Port4) == doctest::Approx(0.25));
  CHECK(a.p_abs_object == 0.0);
  CHECK(std::abs(a.p_loss_env) < 1e-15);

  const auto b = port_statistics_closed_form(open.with_object(true));
  CHECK(b.at(OutputPort::Port3) == doctest::Approx(0.25));
  CHECK(b.at(OutputPort::Port1) == doctest::Approx(0.125));
  CHECK(b.at(OutputPort::Port2) == doctest::Approx(0.125));
  CHECK(b.at(OutputPort::Port4) == doctest::Approx(0.25));
  CHECK(b.p_abs_object == doctest::Approx(0.25));
  CHECK(std::abs(b.p_loss_env) < 1e-15);
}

TEST_CASE("closed form: lossy symmetric point tau = 0.532") {
  const LllSpec s(0.5, 0.532, 0.0, true, InputPort::Port1);
  const auto st = port_statistics_closed_form(s);
  CHECK(st.p_abs_object == doctest::Approx(0.070756).epsilon(1e-12));
  CHECK(st.at(OutputPort::Port1) == doctest::Approx(0.018821096).epsilon(1e-12));
}

TEST_CASE("engine: mirror and pass-through limits") {
  const auto mirror = port_statistics_engine(LllSpec(1.0, 1.0, 0.0, false, InputPort::Port1));
  CHECK(mirror.at(OutputPort::Port1) == doctest::Approx(1.0));
  const auto pass = port_statistics_engine(LllSpec(0.0, 1.0, 0.0, false, InputPort::Port1));
  CHECK(pass.at(OutputPort::Port4) == doctest::Approx(1.0));
}

TEST_CASE("engine and closed form agree on random specs") {
  testing::SpecGenerator gen(1);
  for (int i = 0; i < 1000; ++i) {
    const LllSpec s = gen.spec();
    const auto cf = port_statistics_closed_form(s);
    const auto en = port_statistics_engine(s);
    check_close(cf, en, 1e-10);
    check_invariants(s, cf);
    check_invariants(s, en);
  }
}

TEST_CASE("swapping the input port swaps the table columns") {
  testing::SpecGenerator gen(2);
  for (int i = 0; i < 200; ++i) {
    const LllSpec s(gen.uniform(0, 1), gen.uniform(0, 1), gen.uniform(0, 2 * kPi), false,
                    InputPort::Port1);
    const auto one = port_statistics_engine(s);
    const auto two = port_statistics_engine(s.with_input(InputPort::Port2));
    CHECK(std::abs(one.at(OutputPort::Port3) - two.at(OutputPort::Port4)) < 1e-12);
    CHECK(std::abs(one.at(OutputPort::Port4) - two.at(OutputPort::Port3)) < 1e-12);
    CHECK(std::abs(one.at(OutputPort::Port1) - two.at(OutputPort::Port2)) < 1e-12);
    CHECK(std::abs(one.at(OutputPort::Port2) - two.at(OutputPort::Port1)) < 1e-12);
  }
}

TEST_CASE("dark-port conditions") {
  testing::SpecGenerator gen(3);
  for (int i = 0; i < 200; ++i) {
    const LllSpec sym(0.5, gen.uniform(0, 1), 0.0, false, InputPort::Port1);
    CHECK(port_statistics_engine(sym).at(OutputPort::Port1) < 1e-12);

    const LllSpec asym(gen.uniform(0, 1), gen.uniform(0, 1), kPi, false, InputPort::Port1);
    CHECK(port_statistics_engine(asym).at(OutputPort::Port2) < 1e-12);
    CHECK(port_statistics_engine(asym.with_input(InputPort::Port2)).at(OutputPort::Port1) < 1e-12);
  }
}

TEST_CASE("with the object the means do not depend on the phase") {
  testing::SpecGenerator gen(4);
  for (int i = 0; i < 50; ++i) {
    const double R = gen.uniform(0, 1), tau = gen.uniform(0, 1);
    const InputPort port = gen.port();
    const auto ref = port_statistics_engine(LllSpec(R, tau, 0.0, true, port));
    for (int k = 1; k < 16; ++k) {
      const auto other = port_statistics_engine(LllSpec(R, tau, k * kPi / 8, true, port));
      check_close(ref, other, 1e-12);
    }
  }
}

TEST_CASE("object absorption follows the arm routing") {
  const LllSpec s(0.3, 0.9, 1.0, true, InputPort::Port1);
  CHECK(port_statistics_engine(s).p_abs_object ==
        doctest::Approx(s.r_tilde() * s.t_tilde()).epsilon(1e-12));
  CHECK(port_statistics_engine(s.with_input(InputPort::Port2)).p_abs_object ==
        doctest::Approx(s.r_tilde() * s.r_tilde()).epsilon(1e-12));
}
