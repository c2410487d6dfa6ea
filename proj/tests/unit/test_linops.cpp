#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "xifm/error.hpp"
#include "xifm/linops.hpp"

using namespace xifm;
using namespace xifm::linops;

namespace {

Matrix random_contraction(testing::SpecGenerator& gen, Eigen::Index n) {
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex{gen.uniform(-1, 1), gen.uniform(-1, 1)};
  const double smax = largest_singular_value(a);
  return a * (gen.uniform(0.05, 1.0) / smax);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an xifm::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("compose: identity component is the identity") {
  const LossyComponent id(Matrix::Identity(2, 2), 1.0, {0, 1});
  const auto m = compose(std::span(&id, 1), 2);
  CHECK((m.entries() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("compose: two balanced splitters form a Mach-Zehnder with a dark output") {
  const std::vector<LossyComponent> mz{{splitter(0.5), 1.0, {0, 1}}, {splitter(0.5), 1.0, {0, 1}}};
  const auto m = compose(mz, 2);
  // [[t, ir], [ir, t]]^2 with t = r = 1/sqrt(2) is [[0, i], [i, 0]].
  CHECK(std::norm(m(0, 0)) < 1e-30);
  CHECK(std::abs(m(1, 0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(m(0, 1) - Complex(0, 1)) < 1e-15);
}

TEST_CASE("compose: order of application is left-to-right in the list") {
  // A phase followed by a splitter differs from the reverse order.
  const LossyComponent phase(phase_shift(std::numbers::pi / 2), 1.0, {0});
  const LossyComponent bs(splitter(0.5), 1.0, {0, 1});
  const std::vector<LossyComponent> forward{phase, bs};
  const auto m = compose(forward, 2);
  const Matrix expected = splitter(0.5) * Matrix(Eigen::Vector2cd(Complex(0, 1), 1.0).asDiagonal());
  CHECK((m.entries() - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("compose: routing errors") {
  CHECK(code_of([] { LossyComponent(splitter(0.3), 0.9, {1, 1}); }) == ErrorCode::Routing);
  const LossyComponent far(splitter(0.3), 0.9, {0, 3});
  CHECK(code_of([&] { compose(std::span(&far, 1), 3); }) == ErrorCode::Dimension);
  CHECK(code_of([] { LossyComponent(splitter(0.3), 1.5, {0, 1}); }) == ErrorCode::Domain);
  Matrix bad = splitter(0.3);
  bad(0, 0) *= 1.1;
  CHECK(code_of([&] { LossyComponent(bad, 1.0, {0, 1}); }) == ErrorCode::Physicality);
}

TEST_CASE("compose: products of random lossy components stay contractive") {
  testing::SpecGenerator gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LossyComponent> parts;
    const int count = 1 + trial % 7;
    for (int c = 0; c < count; ++c) {
      const std::size_t a = static_cast<std::size_t>(gen.uniform(0, 4));
      const std::size_t b = (a + 1 + static_cast<std::size_t>(gen.uniform(0, 3))) % 4;
      parts.emplace_back(splitter(gen.uniform(0, 1)), gen.uniform(0, 1), std::vector{a, b});
    }
    const auto m = compose(parts, 4);
    CHECK(largest_singular_value(m.entries()) <= 1.0 + 1e-12);
  }
}

TEST_CASE("TransferMatrix rejects non-contractions") {
  CHECK(code_of([] { TransferMatrix(Matrix::Identity(2, 2) * 1.001); }) ==
        ErrorCode::Physicality);
  CHECK(code_of([] { TransferMatrix(Matrix(0, 0)); }) == ErrorCode::Dimension);
}

TEST_CASE("dilate: identity needs no environment") {
  const auto w = dilate(TransferMatrix::identity(3));
  CHECK(w.env_dim() == 0);
  CHECK((w.entries() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dilate: scalar one half") {
  Matrix half(1, 1);
  half(0, 0) = 0.5;
  const auto w = dilate(TransferMatrix(half));
  REQUIRE(w.env_dim() == 1);
  const double c = std::sqrt(0.75);
  CHECK(std::abs(w.entries()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(w.entries()(0, 1) - c) < 1e-15);
  CHECK(std::abs(w.entries()(1, 0) - c) < 1e-15);
  CHECK(std::abs(w.entries()(1, 1) + 0.5) < 1e-15);
}

TEST_CASE("dilate: random contractions round-trip and are unitary") {
  testing::SpecGenerator gen(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + trial % 6);
    const TransferMatrix m(random_contraction(gen, n));
    const auto w = dilate(m);
    CHECK(w.env_dim() <= m.dim());
    CHECK(unitarity_residual(w.entries()) < 1e-10);
    CHECK((w.physical_block() - m.entries()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dilate: partial isometry keeps only the defective directions") {
  // diag(1, 0.6) has a one-dimensional defect.
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 0.6;
  const auto w = dilate(TransferMatrix(d));
  CHECK(w.env_dim() == 1);
  CHECK(unitarity_residual(w.entries()) < 1e-12);
}

TEST_CASE("propagate_single_photon") {
  const auto id = propagate_single_photon(TransferMatrix::identity(2), 0);
  CHECK(id.port_probabilities[0] == doctest::Approx(1.0));
  CHECK(id.env_probability == doctest::Approx(0.0));

  const auto bs = propagate_single_photon(TransferMatrix(splitter(0.5)), 0);
  CHECK(bs.port_probabilities[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bs.port_probabilities[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(bs.env_probability) < 1e-15);

  const auto lossy = propagate_single_photon(TransferMatrix(std::sqrt(0.25) * Matrix::Identity(1, 1)), 0);
  CHECK(lossy.port_probabilities[0] == doctest::Approx(0.25));
  CHECK(lossy.env_probability == doctest::Approx(0.75));

  CHECK(code_of([] { propagate_single_photon(TransferMatrix::identity(2), 2); }) ==
        ErrorCode::Dimension);
}

TEST_CASE("propagate_single_photon: conservation and the lossless limit") {
  testing::SpecGenerator gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const bool lossless = trial % 2 == 0;
    std::vector<LossyComponent> parts;
    for (int c = 0; c < 4; ++c) {
      const std::size_t a = static_cast<std::size_t>(c % 3);
      parts.emplace_back(splitter(gen.uniform(0, 1)), lossless ? 1.0 : gen.uniform(0, 1),
                         std::vector<std::size_t>{a, a + 1});
    }
    const auto photon = propagate_single_photon(compose(parts, 4), trial % 4);
    CHECK(std::abs(photon.total() - 1.0) < 1e-12);
    CHECK(photon.env_probability >= 0.0);
    if (lossless) CHECK(photon.env_probability < 1e-12);
  }
}

TEST_CASE("dilation reproduces single-photon loss as environment population") {
  testing::SpecGenerator gen(8);
  const TransferMatrix m(random_contraction(gen, 3));
  const auto w = dilate(m);
  const auto photon = propagate_single_photon(m, 1);
  double env = 0.0;
  for (std::size_t e = 0; e < w.env_dim(); ++e) env += std::norm(w.entries()(3 + e, 1));
  CHECK(std::abs(env - photon.env_probability) < 1e-12);
}

TEST_CASE("bernoulli_variance") {
  CHECK(bernoulli_variance(0.0) == 0.0);
  CHECK(bernoulli_variance(1.0) == 0.0);
  CHECK(bernoulli_variance(0.5) == 0.25);
  CHECK(code_of([] { bernoulli_variance(1.2); }) == ErrorCode::Domain);
  CHECK(code_of([] { bernoulli_variance(-0.1); }) == ErrorCode::Domain);
}
