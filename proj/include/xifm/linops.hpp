#pragma once

// Lossy linear-optical networks acting on mode amplitudes (Heisenberg
// picture). A lossy component is a unitary scaled by sqrt(tau); composing
// components yields a contraction whose defect is carried by vacuum
// environment modes that never need to be simulated for mean photon numbers.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace xifm::linops {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kConstructionTol = 1e-12;

/// Largest |(A A^dagger - I)_ij|.
double unitarity_residual(const Matrix& a);

double largest_singular_value(const Matrix& a);

/// Lossless two-mode splitter with reflectance R: the transmitted amplitude
/// sqrt(1-R) is real and stays on its mode, the reflected amplitude i*sqrt(R)
/// swaps modes.
Matrix splitter(double reflectance);

/// One-mode phase shifter exp(i*phi).
Matrix phase_shift(double phi);

/// Dense transfer matrix on `dim` physical modes; always a contraction.
class TransferMatrix {
 public:
  /// Throws ErrorCode::Physicality when the largest singular value exceeds
  /// 1 + 1e-12.
  explicit TransferMatrix(Matrix entries);

  static TransferMatrix identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(std::size_t out, std::size_t in) const {
    return entries_(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  }

 private:
  Matrix entries_;
};

/// sqrt(tau) * unitary, acting on the network modes listed in `routing`
/// (local mode k is network mode routing[k]).
class LossyComponent {
 public:
  LossyComponent(Matrix unitary, double tau, std::vector<std::size_t> routing);

  const Matrix& unitary() const { return unitary_; }
  double tau() const { return tau_; }
  std::span<const std::size_t> routing() const { return routing_; }
  Matrix effective() const;

 private:
  Matrix unitary_;
  double tau_;
  std::vector<std::size_t> routing_;
};

/// Unitary on phys_dim + env_dim modes whose top-left block is the dilated
/// transfer matrix.
class DilatedUnitary {
 public:
  DilatedUnitary(std::size_t phys_dim, Matrix entries);

  std::size_t phys_dim() const { return phys_dim_; }
  std::size_t env_dim() const {
    return static_cast<std::size_t>(entries_.rows()) - phys_dim_;
  }
  const Matrix& entries() const { return entries_; }
  Matrix physical_block() const;

 private:
  std::size_t phys_dim_;
  Matrix entries_;
};

struct SinglePhotonDistribution {
  std::vector<double> port_probabilities;
  double env_probability = 0.0;

  double total() const;
};

/// Ordered product E_n ... E_1 of the components embedded into `n_modes`.
TransferMatrix compose(std::span<const LossyComponent> components, std::size_t n_modes);

/// Minimal unitary dilation built from the SVD M = U S V^dagger: every
/// singular value s < 1 gets one environment mode coupled through the
/// rotation [[s, sqrt(1-s^2)], [sqrt(1-s^2), -s]].
DilatedUnitary dilate(const TransferMatrix& m);

/// Photon statistics for a single photon entering `input_mode` with vacuum on
/// every other physical and environment mode: P(k) = |M(k, input)|^2.
SinglePhotonDistribution propagate_single_photon(const TransferMatrix& m, std::size_t input_mode);

/// Photon-number variance of a single-photon port with the given mean.
double bernoulli_variance(double mean);

}  // namespace xifm::linops
