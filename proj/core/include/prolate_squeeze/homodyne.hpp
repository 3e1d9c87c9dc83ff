#pragma once

#include "prolate_squeeze/pswf.hpp"
#include "prolate_squeeze/squeeze.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace psq {

/// Monte-Carlo realizations of the quadrature vector (A_10, A_20, A_11, ...).
struct SampleBatch {
  std::uint64_t seed = 0;
  int K = 0;
  Eigen::MatrixXd draws;         // n x 2K, one shot per row
  Eigen::VectorXd displacement;  // 2K, zero when no classical wave is added

  std::size_t n() const noexcept { return static_cast<std::size_t>(draws.rows()); }
};

/// Shots per independently seeded block.
inline constexpr std::size_t kShotBlock = 8192;

/// Seed of shot block b: splitmix64(seed + 0x9E3779B97F4A7C15 * (b + 1)).
std::uint64_t block_seed(std::uint64_t seed, std::size_t block) noexcept;

/// Gaussian draws with mean `displacement` (empty = zero) and covariance
/// cov.sigma through its Cholesky factor. Each block runs its own
/// mt19937_64; within a block, shots consume standard normals in order
/// (Box-Muller pairs over the uniform (k + 0.5) 2^-53, k the top 53 bits).
/// Blocks run in parallel and land in block order, so the output depends
/// only on (seed, cov, displacement, n).
///
/// Throws FactorizationError naming the first leading minor that is not
/// positive definite.
SampleBatch sample(const ModeCovariance& cov, const Eigen::VectorXd& displacement, std::size_t n,
                   std::uint64_t seed);

enum class Parity { even, odd };

struct HomodyneRecord {
  std::vector<int> modes;  // mode index k of each column
  int quadrature = 1;
  Eigen::MatrixXd values;  // n x modes.size()
};

/// Amplitudes A_{sigma k} of one parity class, as read out by a single
/// local-oscillator phase.
HomodyneRecord homodyne_extract(const SampleBatch& batch, const ProlateBasis& basis, Parity parity,
                                int quadrature);

struct EmpiricalCovariance {
  Eigen::VectorXd mean;
  Eigen::MatrixXd sigma;  // unbiased
  /// Gaussian standard errors sqrt((S_ii S_jj + S_ij^2) / (n - 1)).
  Eigen::MatrixXd se;
};

EmpiricalCovariance empirical_covariance(const SampleBatch& batch);

/// Sample variance of each column of a homodyne record.
Eigen::VectorXd column_variances(const Eigen::MatrixXd& values);

struct WhitenessTest {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
  bool passed = false;
};

/// Chi-square test that L^-1 (x - displacement) is white standard normal,
/// with L the Cholesky factor of cov.sigma. Sums n mean_i^2, a Wilson-Hilferty
/// z^2 for each second moment sum_shots z_i^2 and n C_ij^2 for each pair;
/// passes when the p-value is >= alpha.
WhitenessTest whiteness_test(const SampleBatch& batch, const ModeCovariance& cov,
                             double alpha = 1e-3);

/// Classical displacement of amplitude `amplitude` along the anti-squeezed
/// quadrature of every even mode, rotated by `extra_phase`; odd modes are
/// left undisplaced.
Eigen::VectorXd classical_wave_displacement(const ModeCovariance& cov, double amplitude,
                                            double extra_phase = 0.0);

/// CSV `shot,A1_0,A2_0,...`.
std::string batch_csv(const SampleBatch& batch);
/// Seed, generator and state description for a batch file.
std::string batch_sidecar_json(const SampleBatch& batch, const ModeCovariance& cov);

}  // namespace psq
