#include "prolate_squeeze/homodyne.hpp"

#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace psq {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform on (0, 1), never 0, from the top 53 bits.
double open_uniform(std::mt19937_64& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double u1 = open_uniform(gen_), u2 = open_uniform(gen_);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    have_ = true;
    return rad * std::cos(ang);
  }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_ = false;
};

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Locate the first failing leading minor for the diagnostic.
  for (Eigen::Index m = 1; m <= sigma.rows(); ++m) {
    Eigen::LLT<Eigen::MatrixXd> part(sigma.topLeftCorner(m, m));
    if (part.info() != Eigen::Success) {
      const double det = sigma.topLeftCorner(m, m).determinant();
      std::ostringstream os;
      os << "covariance is not positive definite: leading minor of order " << m
         << " fails (determinant " << det << ")";
      throw FactorizationError(os.str(), det, static_cast<int>(m));
    }
  }
  throw FactorizationError("covariance Cholesky factorization failed", 0.0,
                           static_cast<int>(sigma.rows()));
}

void check_cov(const ModeCovariance& cov) {
  if (cov.K < 1 || cov.sigma.rows() != 2 * cov.K || cov.sigma.cols() != 2 * cov.K)
    throw DomainError("covariance must be 2K x 2K with K >= 1");
}

}  // namespace

std::uint64_t block_seed(std::uint64_t seed, std::size_t block) noexcept {
  return splitmix64(seed + kGolden * (static_cast<std::uint64_t>(block) + 1));
}

SampleBatch sample(const ModeCovariance& cov, const Eigen::VectorXd& displacement, std::size_t n,
                   std::uint64_t seed) {
  check_cov(cov);
  if (n < 1) throw DomainError("sample: n must be >= 1");
  const Eigen::Index D = 2 * cov.K;
  if (displacement.size() != 0 && displacement.size() != D)
    throw DomainError("sample: displacement must have 2K entries");
  const Eigen::MatrixXd L = cholesky_factor(cov.sigma);

  SampleBatch b;
  b.seed = seed;
  b.K = cov.K;
  b.displacement = displacement.size() == 0 ? Eigen::VectorXd::Zero(D) : displacement;
  b.draws.resize(static_cast<Eigen::Index>(n), D);

  const std::size_t blocks = (n + kShotBlock - 1) / kShotBlock;
  parallel_for(blocks, [&](std::size_t blk) {
    NormalStream normals(block_seed(seed, blk));
    const std::size_t first = blk * kShotBlock;
    const std::size_t last = std::min(n, first + kShotBlock);
    Eigen::VectorXd z(D);
    for (std::size_t s = first; s < last; ++s) {
      for (Eigen::Index i = 0; i < D; ++i) z(i) = normals.next();
      b.draws.row(static_cast<Eigen::Index>(s)) =
          (b.displacement + L.triangularView<Eigen::Lower>() * z).transpose();
    }
  });
  return b;
}

HomodyneRecord homodyne_extract(const SampleBatch& batch, const ProlateBasis& basis, Parity parity,
                                int quadrature) {
  if (quadrature != 1 && quadrature != 2)
    throw DomainError("homodyne_extract: quadrature must be 1 or 2");
  if (basis.size() != batch.K)
    throw DomainError("homodyne_extract: basis has " + std::to_string(basis.size()) +
                      " modes, batch has " + std::to_string(batch.K));
  HomodyneRecord rec;
  rec.quadrature = quadrature;
  for (int k = parity == Parity::even ? 0 : 1; k < batch.K; k += 2) rec.modes.push_back(k);
  rec.values.resize(batch.draws.rows(), static_cast<Eigen::Index>(rec.modes.size()));
  for (std::size_t m = 0; m < rec.modes.size(); ++m)
    rec.values.col(static_cast<Eigen::Index>(m)) = batch.draws.col(2 * rec.modes[m] + quadrature - 1);
  return rec;
}

EmpiricalCovariance empirical_covariance(const SampleBatch& batch) {
  const auto n = static_cast<double>(batch.n());
  if (batch.n() < 2) throw DomainError("empirical_covariance: need n >= 2");
  EmpiricalCovariance e;
  e.mean = batch.draws.colwise().mean().transpose();
  const Eigen::MatrixXd centered = batch.draws.rowwise() - e.mean.transpose();
  e.sigma = (centered.transpose() * centered) / (n - 1.0);
  const Eigen::VectorXd d = e.sigma.diagonal();
  e.se = ((d * d.transpose()).array() + e.sigma.array().square()).sqrt() / std::sqrt(n - 1.0);
  return e;
}

Eigen::VectorXd column_variances(const Eigen::MatrixXd& values) {
  const auto n = static_cast<double>(values.rows());
  const Eigen::RowVectorXd mean = values.colwise().mean();
  return ((values.rowwise() - mean).array().square().colwise().sum() / (n - 1.0)).transpose();
}

WhitenessTest whiteness_test(const SampleBatch& batch, const ModeCovariance& cov, double alpha) {
  check_cov(cov);
  if (batch.draws.cols() != cov.sigma.rows())
    throw DomainError("whiteness_test: batch and covariance sizes differ");
  const Eigen::MatrixXd L = cholesky_factor(cov.sigma);
  const Eigen::MatrixXd centered = batch.draws.rowwise() - batch.displacement.transpose();
  // Rows of Z are L^-1 (x - mu).
  const Eigen::MatrixXd Z =
      L.triangularView<Eigen::Lower>().solve(centered.transpose()).transpose();
  const auto n = static_cast<double>(Z.rows());
  const Eigen::Index D = Z.cols();
  const Eigen::VectorXd mean = Z.colwise().mean().transpose();
  const Eigen::MatrixXd C = (Z.transpose() * Z) / n;

  WhitenessTest t;
  for (Eigen::Index i = 0; i < D; ++i) {
    t.statistic += n * mean(i) * mean(i);
    // n C_ii ~ chi2_n; Wilson-Hilferty makes it standard normal.
    const double v = 2.0 / (9.0 * n);
    const double z = (std::cbrt(C(i, i)) - (1.0 - v)) / std::sqrt(v);
    t.statistic += z * z;
    for (Eigen::Index j = i + 1; j < D; ++j) t.statistic += n * C(i, j) * C(i, j);
  }
  t.dof = static_cast<double>(2 * D + D * (D - 1) / 2);
  t.p_value = boost::math::gamma_q(0.5 * t.dof, 0.5 * t.statistic);
  t.passed = t.p_value >= alpha;
  return t;
}

Eigen::VectorXd classical_wave_displacement(const ModeCovariance& cov, double amplitude,
                                            double extra_phase) {
  check_cov(cov);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * cov.K);
  const auto report = squeezing_report(cov);
  for (int k = 0; k < cov.K; k += 2) {
    // Anti-squeezed direction, folded into [0, pi) so the sign is fixed.
    const double anti =
        std::fmod(report[static_cast<std::size_t>(k)].angle + 0.5 * std::numbers::pi, std::numbers::pi);
    const double t = anti + extra_phase;
    d(2 * k) = amplitude * std::cos(t);
    d(2 * k + 1) = amplitude * std::sin(t);
  }
  return d;
}

std::string batch_csv(const SampleBatch& batch) {
  std::ostringstream os;
  os.precision(17);
  os << "shot";
  for (int k = 0; k < batch.K; ++k) os << ",A1_" << k << ",A2_" << k;
  os << '\n';
  for (Eigen::Index s = 0; s < batch.draws.rows(); ++s) {
    os << s;
    for (Eigen::Index i = 0; i < batch.draws.cols(); ++i) os << ',' << batch.draws(s, i);
    os << '\n';
  }
  return os.str();
}

std::string batch_sidecar_json(const SampleBatch& batch, const ModeCovariance& cov) {
  nlohmann::json j;
  j["seed"] = batch.seed;
  j["n"] = batch.n();
  j["K"] = batch.K;
  j["generator"] = "mt19937_64 per block of " + std::to_string(kShotBlock) +
                   " shots, block seed splitmix64(seed + 0x9E3779B97F4A7C15 * (block + 1)), "
                   "Box-Muller normals";
  j["displacement"] = std::vector<double>(batch.displacement.data(),
                                          batch.displacement.data() + batch.displacement.size());
  j["covariance"] = nlohmann::json::parse(cov.to_json());
  return j.dump(1);
}

}  // namespace psq
