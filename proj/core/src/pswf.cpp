#include "prolate_squeeze/pswf.hpp"

#include "prolate_squeeze/error.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace psq {

using std::numbers::pi;

BandParameter::BandParameter(double c) : c_(c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("band parameter c must be finite and > 0, got " + std::to_string(c));
}

double BandParameter::shannon_number() const noexcept { return 2.0 * c_ / pi; }

double sinc_kernel(double c, double x) noexcept {
  const double cx = c * x;
  if (std::abs(cx) < 1e-8) return c / pi * (1.0 - cx * cx / 6.0);
  return std::sin(cx) / (pi * x);
}

struct ProlateBasis::Data {
  BandParameter band{1.0};
  int K = 0;
  int M = 0;
  std::vector<double> lambdas;
  quad::Rule rule;
  std::vector<std::vector<double>> samples;   // phi_k(x_j)
  std::vector<std::vector<double>> weighted;  // w_j phi_k(x_j)
  std::vector<std::string> warnings;
};

namespace {

constexpr double kWingFloor = 1e-14;

void finish(ProlateBasis::Data& d) {
  d.weighted.assign(d.K, std::vector<double>(d.M));
  for (int k = 0; k < d.K; ++k)
    for (int j = 0; j < d.M; ++j) d.weighted[k][j] = d.rule.weights[j] * d.samples[k][j];
  d.warnings.clear();
  if (d.band.is_degenerate()) {
    std::ostringstream os;
    os << "c = " << d.band.value() << " < 0.1: all eigenvalues are small, basis nearly useless";
    d.warnings.push_back(os.str());
  }
  for (int k = 1; k < d.K; ++k) {
    if (!(d.lambdas[k] < d.lambdas[k - 1])) {
      std::ostringstream os;
      os << "modes " << k - 1 << " and " << k
         << ": eigenvalues indistinguishable in double precision";
      d.warnings.push_back(os.str());
    }
  }
  for (int k = 0; k < d.K; ++k) {
    if (1.0 - d.lambdas[k] < kWingFloor) {
      std::ostringstream os;
      os << "mode " << k << ": 1 - lambda = " << (1.0 - d.lambdas[k])
         << " < 1e-14, chi_k is ill-conditioned and evaluates to 0";
      d.warnings.push_back(os.str());
    }
  }
}

// psi_k(s) = i^k sqrt(c / 2pi) int_{-1}^{1} phi_k(u) exp(-i c s u) du, which
// is real: the cosine part survives for even k, the sine part for odd k.
double extension(double c, int k, std::span<const double> weighted,
                 std::span<const double> nodes, double s) {
  double acc = 0.0;
  if (k % 2 == 0) {
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += weighted[j] * std::cos(c * s * nodes[j]);
  } else {
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += weighted[j] * std::sin(c * s * nodes[j]);
  }
  const int quarter = (k % 2 == 0) ? k / 2 : (k - 1) / 2;
  const double sign = (quarter % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(c / (2.0 * pi)) * acc;
}

Eigen::MatrixXd nystrom_matrix(double c, const quad::Rule& rule) {
  const int m = static_cast<int>(rule.size());
  Eigen::MatrixXd b(m, m);
  for (int i = 0; i < m; ++i) {
    const double si = std::sqrt(rule.weights[i]);
    for (int j = 0; j <= i; ++j) {
      const double v = si * std::sqrt(rule.weights[j]) * sinc_kernel(c, rule.nodes[i] - rule.nodes[j]);
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return b;
}

std::string join(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

}  // namespace

std::vector<double> nystrom_spectrum(BandParameter band, int M) {
  if (M < 1) throw DomainError("nystrom_spectrum: M must be >= 1");
  const quad::Rule rule = quad::gauss_legendre(M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nystrom_matrix(band.value(), rule),
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + M);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

ProlateBasis build_basis(BandParameter band, int K, int M, const BasisOptions& opt) {
  if (K < 1) throw DomainError("build_basis: K must be >= 1");
  const int min_order = std::max(4 * K, static_cast<int>(std::ceil(4.0 * band.value())));
  if (M < min_order)
    throw DomainError("build_basis: quadrature order M = " + std::to_string(M) +
                      " is below max(4K, ceil(4c)) = " + std::to_string(min_order));

  auto data = std::make_shared<ProlateBasis::Data>();
  data->band = band;
  data->K = K;
  data->M = M;
  data->rule = quad::gauss_legendre(M);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nystrom_matrix(band.value(), data->rule));
  if (es.info() != Eigen::Success) throw Error("build_basis: eigensolver failed");
  // Eigen sorts ascending
  const auto& evals = es.eigenvalues();
  const auto& evecs = es.eigenvectors();

  int resolvable = 0;
  while (resolvable < M && evals(M - 1 - resolvable) >= opt.lambda_floor) ++resolvable;
  if (K > resolvable) {
    std::ostringstream os;
    os << "build_basis: K = " << K << " exceeds the resolvable modes for c = " << band.value()
       << " (lambda_" << resolvable << " < " << opt.lambda_floor << "); largest safe K is "
       << resolvable;
    throw ResolutionError(os.str(), resolvable);
  }

  data->lambdas.resize(K);
  data->samples.assign(K, std::vector<double>(M));
  for (int k = 0; k < K; ++k) {
    const int col = M - 1 - k;
    data->lambdas[k] = evals(col);
    for (int j = 0; j < M; ++j)
      data->samples[k][j] = evecs(j, col) / std::sqrt(data->rule.weights[j]);
  }

  // Fix the sign so that phi_k(1) > 0.
  for (int k = 0; k < K; ++k) {
    std::vector<double> w(M);
    for (int j = 0; j < M; ++j) w[j] = data->rule.weights[j] * data->samples[k][j];
    const double at_one = extension(band.value(), k, w, data->rule.nodes, 1.0);
    if (at_one < 0.0)
      for (double& v : data->samples[k]) v = -v;
  }

  if (opt.check_convergence) {
    const std::vector<double> fine = nystrom_spectrum(band, 2 * M);
    double worst = 0.0;
    for (int k = 0; k < K; ++k) worst = std::max(worst, std::abs(fine[k] - data->lambdas[k]));
    if (worst > opt.convergence_tol) {
      std::vector<double> fine_head(fine.begin(), fine.begin() + K);
      std::ostringstream os;
      os << "build_basis: eigenvalues not converged at M = " << M << " (max shift " << worst
         << " against M = " << 2 * M << ")\n  M:  [" << join(data->lambdas) << "]\n  2M: ["
         << join(fine_head) << "]";
      throw ConvergenceError(os.str(), data->lambdas, std::move(fine_head));
    }
  }

  finish(*data);
  return ProlateBasis(std::move(data));
}

ProlateBasis::ProlateBasis(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

const BandParameter& ProlateBasis::band() const noexcept { return data_->band; }
int ProlateBasis::size() const noexcept { return data_->K; }
int ProlateBasis::order() const noexcept { return data_->M; }
std::span<const double> ProlateBasis::lambdas() const noexcept { return data_->lambdas; }
const quad::Rule& ProlateBasis::rule() const noexcept { return data_->rule; }
const std::vector<std::string>& ProlateBasis::warnings() const noexcept { return data_->warnings; }

double ProlateBasis::lambda(int k) const {
  check_index(k);
  return data_->lambdas[k];
}

std::span<const double> ProlateBasis::core_samples(int k) const {
  check_index(k);
  return data_->samples[k];
}

double ProlateBasis::validity_bound() const noexcept { return data_->M / c(); }

void ProlateBasis::check_index(int k) const {
  if (k < 0 || k >= data_->K)
    throw DomainError("mode index " + std::to_string(k) + " outside [0, " +
                      std::to_string(data_->K) + ")");
}

void ProlateBasis::check_argument(double s) const {
  if (!std::isfinite(s) || std::abs(s) > validity_bound()) {
    std::ostringstream os;
    os << "|s| = " << std::abs(s) << " exceeds the validity bound " << validity_bound()
       << " of the finite-Fourier extension (c|s| <= M); rebuild with a larger M";
    throw DomainError(os.str());
  }
}

double ProlateBasis::eval_psi(int k, double s) const {
  check_index(k);
  check_argument(s);
  return extension(c(), k, data_->weighted[k], data_->rule.nodes, s);
}

void ProlateBasis::eval_psi_all(double s, std::span<double> out) const {
  check_argument(s);
  const int K = data_->K;
  const int M = data_->M;
  if (static_cast<int>(out.size()) < K) throw DomainError("eval_psi_all: output span too short");
  thread_local std::vector<double> cs;
  thread_local std::vector<double> sn;
  cs.resize(M);
  sn.resize(M);
  const double cc = c();
  for (int j = 0; j < M; ++j) {
    const double arg = cc * s * data_->rule.nodes[j];
    cs[j] = std::cos(arg);
    sn[j] = std::sin(arg);
  }
  const double scale = std::sqrt(cc / (2.0 * pi));
  for (int k = 0; k < K; ++k) {
    const auto& w = data_->weighted[k];
    const auto& trig = (k % 2 == 0) ? cs : sn;
    double acc = 0.0;
    for (int j = 0; j < M; ++j) acc += w[j] * trig[j];
    const int quarter = (k % 2 == 0) ? k / 2 : (k - 1) / 2;
    out[k] = ((quarter % 2 == 0) ? scale : -scale) * acc;
  }
}

double ProlateBasis::eval_phi(int k, double s) const {
  check_index(k);
  if (std::abs(s) > 1.0) return 0.0;
  return eval_psi(k, s) / std::sqrt(data_->lambdas[k]);
}

double ProlateBasis::eval_chi(int k, double s) const {
  check_index(k);
  if (std::abs(s) <= 1.0) return 0.0;
  const double gap = 1.0 - data_->lambdas[k];
  if (gap < kWingFloor) return 0.0;
  return eval_psi(k, s) / std::sqrt(gap);
}

double ProlateBasis::eval_theta(int k, double s) const {
  check_index(k);
  const double lam = data_->lambdas[k];
  if (std::abs(s) <= 1.0) return std::sqrt(1.0 - lam) * eval_phi(k, s);
  return -std::sqrt(lam) * eval_chi(k, s);
}

std::vector<int> ProlateBasis::degenerate_wings() const {
  std::vector<int> out;
  for (int k = 0; k < data_->K; ++k)
    if (1.0 - data_->lambdas[k] < kWingFloor) out.push_back(k);
  return out;
}

std::string ProlateBasis::to_json() const {
  nlohmann::json j;
  j["c"] = c();
  j["K"] = data_->K;
  j["M"] = data_->M;
  j["lambdas"] = data_->lambdas;
  j["nodes"] = data_->rule.nodes;
  j["weights"] = data_->rule.weights;
  j["core_samples"] = data_->samples;
  return j.dump(1);
}

ProlateBasis ProlateBasis::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("basis JSON: ") + e.what());
  }
  auto data = std::make_shared<Data>();
  try {
    data->band = BandParameter(j.at("c").get<double>());
    data->K = j.at("K").get<int>();
    data->M = j.at("M").get<int>();
    data->lambdas = j.at("lambdas").get<std::vector<double>>();
    data->rule.nodes = j.at("nodes").get<std::vector<double>>();
    data->rule.weights = j.at("weights").get<std::vector<double>>();
    data->samples = j.at("core_samples").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("basis JSON: ") + e.what());
  }
  const auto K = static_cast<std::size_t>(data->K);
  const auto M = static_cast<std::size_t>(data->M);
  bool ok = data->K >= 1 && data->lambdas.size() == K && data->rule.nodes.size() == M &&
            data->rule.weights.size() == M && data->samples.size() == K;
  for (const auto& row : data->samples) ok = ok && row.size() == M;
  if (!ok) throw DomainError("basis JSON: array sizes inconsistent with K and M");
  finish(*data);
  return ProlateBasis(std::move(data));
}

}  // namespace psq
