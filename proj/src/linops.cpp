#include "xifm/linops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xifm/error.hpp"

namespace xifm::linops {

namespace {

using Index = Eigen::Index;

// Environment modes whose coupling would be below this (in probability) are
// dropped; the resulting unitarity defect is bounded by the same amount.
constexpr double kNegligibleDefect = 1e-14;

Index as_index(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

double unitarity_residual(const Matrix& a) {
  if (a.rows() != a.cols()) {
    fail(ErrorCode::Dimension, "unitarity residual needs a square matrix");
  }
  const Matrix defect = a * a.adjoint() - Matrix::Identity(a.rows(), a.cols());
  return defect.cwiseAbs().maxCoeff();
}

double largest_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix splitter(double reflectance) {
  if (!(reflectance >= 0.0 && reflectance <= 1.0)) {
    fail(ErrorCode::Domain, "splitter reflectance must lie in [0, 1], got " +
                                std::to_string(reflectance));
  }
  const Complex t{std::sqrt(1.0 - reflectance), 0.0};
  const Complex r{0.0, std::sqrt(reflectance)};
  Matrix u(2, 2);
  u << t, r, r, t;
  return u;
}

Matrix phase_shift(double phi) {
  Matrix u(1, 1);
  u(0, 0) = std::polar(1.0, phi);
  return u;
}

TransferMatrix::TransferMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    fail(ErrorCode::Dimension, "transfer matrix must be square with dim >= 1");
  }
  if (!entries_.allFinite()) {
    fail(ErrorCode::Physicality, "transfer matrix has non-finite entries");
  }
  const double smax = largest_singular_value(entries_);
  if (smax > 1.0 + kConstructionTol) {
    fail(ErrorCode::Physicality,
         "transfer matrix is not a contraction (largest singular value " +
             std::to_string(smax) + ")");
  }
}

TransferMatrix TransferMatrix::identity(std::size_t dim) {
  return TransferMatrix(Matrix::Identity(as_index(dim), as_index(dim)));
}

LossyComponent::LossyComponent(Matrix unitary, double tau, std::vector<std::size_t> routing)
    : unitary_(std::move(unitary)), tau_(tau), routing_(std::move(routing)) {
  if (unitary_.rows() < 1 || unitary_.rows() != unitary_.cols()) {
    fail(ErrorCode::Dimension, "component unitary must be square");
  }
  if (routing_.size() != static_cast<std::size_t>(unitary_.rows())) {
    fail(ErrorCode::Dimension, "component routing must list one network mode per local mode");
  }
  if (!(tau_ >= 0.0 && tau_ <= 1.0)) {
    fail(ErrorCode::Domain, "component tau must lie in [0, 1], got " + std::to_string(tau_));
  }
  if (unitarity_residual(unitary_) > kConstructionTol) {
    fail(ErrorCode::Physicality, "component matrix is not unitary");
  }
  std::vector<std::size_t> sorted = routing_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::Routing, "component routing maps two local modes to the same network mode");
  }
}

Matrix LossyComponent::effective() const { return std::sqrt(tau_) * unitary_; }

DilatedUnitary::DilatedUnitary(std::size_t phys_dim, Matrix entries)
    : phys_dim_(phys_dim), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || static_cast<std::size_t>(entries_.rows()) < phys_dim_) {
    fail(ErrorCode::Dimension, "dilation must be square and at least phys_dim wide");
  }
}

Matrix DilatedUnitary::physical_block() const {
  return entries_.topLeftCorner(as_index(phys_dim_), as_index(phys_dim_));
}

double SinglePhotonDistribution::total() const {
  double sum = env_probability;
  for (double p : port_probabilities) sum += p;
  return sum;
}

TransferMatrix compose(std::span<const LossyComponent> components, std::size_t n_modes) {
  if (n_modes < 1) fail(ErrorCode::Dimension, "network needs at least one mode");
  const Index n = as_index(n_modes);
  Matrix total = Matrix::Identity(n, n);
  for (const LossyComponent& c : components) {
    const auto routing = c.routing();
    for (std::size_t mode : routing) {
      if (mode >= n_modes) {
        fail(ErrorCode::Dimension, "component routes to mode " + std::to_string(mode) +
                                       " in a " + std::to_string(n_modes) + "-mode network");
      }
    }
    Matrix embedded = Matrix::Identity(n, n);
    const Matrix local = c.effective();
    for (std::size_t i = 0; i < routing.size(); ++i) {
      for (std::size_t j = 0; j < routing.size(); ++j) {
        embedded(as_index(routing[i]), as_index(routing[j])) = local(as_index(i), as_index(j));
      }
    }
    total = embedded * total;
  }
  return TransferMatrix(std::move(total));
}

DilatedUnitary dilate(const TransferMatrix& m) {
  const Index n = as_index(m.dim());
  Eigen::JacobiSVD<Matrix> svd(m.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  // Singular values may exceed one by rounding (TransferMatrix allows 1e-12).
  std::vector<Index> defective;
  Eigen::VectorXd s = sigma.cwiseMin(1.0);
  for (Index i = 0; i < n; ++i) {
    if (1.0 - s(i) * s(i) > kNegligibleDefect) defective.push_back(i);
  }
  const Index k = static_cast<Index>(defective.size());

  // Real orthogonal core in the singular bases: system i couples to its own
  // environment mode through a 2x2 reflection-rotation.
  Matrix core = Matrix::Zero(n + k, n + k);
  for (Index i = 0; i < n; ++i) core(i, i) = s(i);
  for (Index j = 0; j < k; ++j) {
    const Index i = defective[static_cast<std::size_t>(j)];
    const double c = std::sqrt(1.0 - s(i) * s(i));
    core(i, n + j) = c;
    core(n + j, i) = c;
    core(n + j, n + j) = -s(i);
  }

  Matrix left = Matrix::Identity(n + k, n + k);
  Matrix right = Matrix::Identity(n + k, n + k);
  left.topLeftCorner(n, n) = svd.matrixU();
  right.topLeftCorner(n, n) = svd.matrixV().adjoint();
  return DilatedUnitary(m.dim(), left * core * right);
}

SinglePhotonDistribution propagate_single_photon(const TransferMatrix& m, std::size_t input_mode) {
  if (input_mode >= m.dim()) {
    fail(ErrorCode::Dimension, "input mode " + std::to_string(input_mode) +
                                   " out of range for a " + std::to_string(m.dim()) +
                                   "-mode network");
  }
  SinglePhotonDistribution out;
  out.port_probabilities.resize(m.dim());
  double sum = 0.0;
  for (std::size_t k = 0; k < m.dim(); ++k) {
    const double p = std::norm(m(k, input_mode));
    out.port_probabilities[k] = p;
    sum += p;
  }
  out.env_probability = std::max(0.0, 1.0 - sum);
  return out;
}

double bernoulli_variance(double mean) {
  if (!(mean >= 0.0 && mean <= 1.0)) {
    fail(ErrorCode::Domain, "mean photon number must lie in [0, 1], got " + std::to_string(mean));
  }
  return mean * (1.0 - mean);
}

}  // namespace xifm::linops
