#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/homodyne.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

namespace psq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const ProlateBasis& basis_c2() {
  static const ProlateBasis b = build_basis(BandParameter(2.0), 6, 64);
  return b;
}

const ModeCovariance& squeezed() {
  static const ModeCovariance cov =
      full_covariance(basis_c2(), SqueezingProfile::constant_band(1.0, kInf));
  return cov;
}

const ModeCovariance& gaussian_cov() {
  static const ModeCovariance cov =
      full_covariance(basis_c2(), SqueezingProfile::gaussian(0.8, 1.5, 0.4, 0.05));
  return cov;
}

TEST(Sample, VacuumVariances) {
  const auto batch = sample(vacuum_covariance(6, 2.0), {}, 100000, 1);
  const auto e = empirical_covariance(batch);
  const double se = 0.25 * std::sqrt(2.0 / 1e5);
  for (int i = 0; i < 12; ++i) {
    EXPECT_NEAR(e.sigma(i, i), 0.25, 5 * se);
    EXPECT_NEAR(e.se(i, i), se, 1e-4);
  }
}

TEST(Sample, SqueezedEvenModeQuadrature) {
  const auto batch = sample(squeezed(), {}, 100000, 2);
  const auto e = empirical_covariance(batch);
  const double target = std::exp(-2.0) / 4.0;
  for (int k = 0; k < 6; k += 2) EXPECT_NEAR(e.sigma(2 * k + 1, 2 * k + 1), target, 5 * e.se(2 * k + 1, 2 * k + 1));
}

TEST(Sample, Deterministic) {
  const auto a = sample(gaussian_cov(), {}, 20000, 42);
  const auto b = sample(gaussian_cov(), {}, 20000, 42);
  EXPECT_TRUE((a.draws.array() == b.draws.array()).all());
  const auto c = sample(gaussian_cov(), {}, 20000, 43);
  EXPECT_FALSE((a.draws.array() == c.draws.array()).all());
  // A prefix of a longer batch is the shorter batch.
  const auto longer = sample(gaussian_cov(), {}, 30000, 42);
  EXPECT_TRUE((longer.draws.topRows(20000).array() == a.draws.array()).all());
}

TEST(Sample, RejectsBadInput) {
  ModeCovariance bad = vacuum_covariance(2, 1.0);
  bad.sigma(1, 1) = -0.1;
  try {
    sample(bad, {}, 10, 0);
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    EXPECT_EQ(e.index(), 2);
  }
  EXPECT_THROW(sample(vacuum_covariance(2, 1.0), {}, 0, 0), DomainError);
  EXPECT_THROW(sample(vacuum_covariance(2, 1.0), Eigen::VectorXd::Zero(3), 10, 0), DomainError);
}

TEST(Sample, ReproducesAnalyticCovariance) {
  const auto& cov = gaussian_cov();
  const auto batch = sample(cov, {}, 100000, 7);
  const auto e = empirical_covariance(batch);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      EXPECT_LT(std::abs(e.sigma(i, j) - cov.sigma(i, j)), 5 * e.se(i, j)) << i << "," << j;
}

TEST(Sample, LargeVacuumBatch) {
  const auto batch = sample(vacuum_covariance(6, 2.0), {}, 1000000, 99);
  const auto e = empirical_covariance(batch);
  const Eigen::MatrixXd ref = 0.25 * Eigen::MatrixXd::Identity(12, 12);
  int inside = 0;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) inside += std::abs(e.sigma(i, j) - ref(i, j)) < 5 * e.se(i, j);
  EXPECT_GE(inside, static_cast<int>(0.99 * 144));
}

TEST(Sample, OffDiagonalBlocksVanish) {
  const auto batch = sample(squeezed(), {}, 100000, 5);
  const auto e = empirical_covariance(batch);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      if (j == k) continue;
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
          EXPECT_LT(std::abs(e.sigma(2 * j + s, 2 * k + t)), 5 * e.se(2 * j + s, 2 * k + t));
    }
}

TEST(Sample, DisplacementKeepsCovariance) {
  const auto d = classical_wave_displacement(squeezed(), 3.0);
  const auto plain = empirical_covariance(sample(squeezed(), {}, 100000, 3));
  const auto shifted_batch = sample(squeezed(), d, 100000, 3);
  const auto shifted = empirical_covariance(shifted_batch);
  for (int i = 0; i < 12; ++i) {
    EXPECT_NEAR(shifted.mean(i), d(i), 5 * std::sqrt(shifted.sigma(i, i) / 1e5));
    for (int j = 0; j < 12; ++j)
      EXPECT_LT(std::abs(shifted.sigma(i, j) - squeezed().sigma(i, j)), 5 * shifted.se(i, j));
  }
  // Same seed: the shift is exact.
  EXPECT_LT((shifted.sigma - plain.sigma).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(whiteness_test(shifted_batch, squeezed()).passed);
}

TEST(ClassicalWave, AlongAntiSqueezedEvenQuadrature) {
  const auto d = classical_wave_displacement(squeezed(), 2.0);
  // Even modes are anti-squeezed in A_1; odd modes stay undisplaced.
  EXPECT_NEAR(d(0), 2.0, 1e-12);
  EXPECT_NEAR(d(1), 0.0, 1e-12);
  EXPECT_EQ(d(2), 0.0);
  EXPECT_EQ(d(3), 0.0);
  const auto r = classical_wave_displacement(squeezed(), 2.0, std::numbers::pi / 2);
  EXPECT_NEAR(r(1), 2.0, 1e-12);
}

TEST(Homodyne, ParitySelection) {
  const auto batch = sample(squeezed(), {}, 100000, 11);
  const auto even2 = homodyne_extract(batch, basis_c2(), Parity::even, 2);
  EXPECT_EQ(even2.modes, (std::vector<int>{0, 2, 4}));
  EXPECT_TRUE((column_variances(even2.values).array() < 0.05).all());
  const auto odd2 = homodyne_extract(batch, basis_c2(), Parity::odd, 2);
  EXPECT_EQ(odd2.modes, (std::vector<int>{1, 3, 5}));
  EXPECT_TRUE((column_variances(odd2.values).array() > 1.0).all());
  EXPECT_THROW(homodyne_extract(batch, basis_c2(), Parity::odd, 3), DomainError);
  EXPECT_THROW(homodyne_extract(batch, build_basis(BandParameter(2.0), 4, 64), Parity::odd, 1),
               DomainError);
}

TEST(Homodyne, VacuumSelectionsLookAlike) {
  const auto batch = sample(vacuum_covariance(6, 2.0), {}, 100000, 12);
  const double se = 0.25 * std::sqrt(2.0 / 1e5);
  for (auto par : {Parity::even, Parity::odd})
    for (int q : {1, 2}) {
      const auto v = column_variances(homodyne_extract(batch, basis_c2(), par, q).values);
      for (Eigen::Index i = 0; i < v.size(); ++i) EXPECT_NEAR(v(i), 0.25, 5 * se);
    }
}

TEST(Whiteness, PassesForEveryState) {
  for (const auto* cov : {&squeezed(), &gaussian_cov()}) {
    const auto t = whiteness_test(sample(*cov, {}, 100000, 21), *cov);
    EXPECT_TRUE(t.passed) << "p=" << t.p_value;
    EXPECT_EQ(t.dof, 24.0 + 66.0);
  }
  const auto v = vacuum_covariance(6, 2.0);
  EXPECT_TRUE(whiteness_test(sample(v, {}, 100000, 22), v).passed);
}

TEST(Whiteness, DetectsWrongCovariance) {
  const auto batch = sample(squeezed(), {}, 100000, 23);
  const auto t = whiteness_test(batch, vacuum_covariance(6, 2.0));
  EXPECT_FALSE(t.passed);
  EXPECT_LT(t.p_value, 1e-10);
}

TEST(Export, CsvAndSidecar) {
  const auto batch = sample(vacuum_covariance(2, 2.0), {}, 3, 42);
  const auto csv = batch_csv(batch);
  EXPECT_EQ(csv.rfind("shot,A1_0,A2_0,A1_1,A2_1\n0,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto j = nlohmann::json::parse(batch_sidecar_json(batch, vacuum_covariance(2, 2.0)));
  EXPECT_EQ(j["seed"], 42u);
  EXPECT_EQ(j["n"], 3u);
  EXPECT_EQ(j["covariance"]["K"], 2);
}

TEST(Seeds, BlockSeedsDiffer) {
  EXPECT_NE(block_seed(0, 0), block_seed(0, 1));
  EXPECT_NE(block_seed(1, 0), block_seed(0, 0));
  EXPECT_EQ(block_seed(5, 3), block_seed(5, 3));
}

}  // namespace
}  // namespace psq
