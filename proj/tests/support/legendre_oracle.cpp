#include "legendre_oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace psq::testing {

namespace {

// normalized Legendre values P~_m(x) = sqrt((2m + 1) / 2) P_m(x)
std::vector<double> legendre_values(int n, double x) {
  std::vector<double> p(n, 0.0);
  p[0] = 1.0;
  if (n > 1) p[1] = x;
  for (int m = 2; m < n; ++m) p[m] = ((2.0 * m - 1.0) * x * p[m - 1] - (m - 1.0) * p[m - 2]) / m;
  for (int m = 0; m < n; ++m) p[m] *= std::sqrt((2.0 * m + 1.0) / 2.0);
  return p;
}

}  // namespace

LegendreOracle::LegendreOracle(double c_, int terms_) : c(c_), terms(terms_) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(terms, terms);
  const double c2 = c * c;
  for (int n = 0; n < terms; ++n) {
    a(n, n) = n * (n + 1.0) + c2 * (2.0 * n * n + 2.0 * n - 1.0) / ((2.0 * n - 1.0) * (2.0 * n + 3.0));
    if (n + 2 < terms) {
      const double off = c2 * (n + 1.0) * (n + 2.0) /
                         ((2.0 * n + 3.0) * std::sqrt((2.0 * n + 1.0) * (2.0 * n + 5.0)));
      a(n, n + 2) = off;
      a(n + 2, n) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  coeffs.resize(terms);
  for (int k = 0; k < terms; ++k) {
    coeffs[k].resize(terms);
    for (int m = 0; m < terms; ++m) coeffs[k][m] = es.eigenvectors()(m, k);
    if (eval(k, 1.0) < 0.0)
      for (double& v : coeffs[k]) v = -v;
  }
}

double LegendreOracle::eval(int k, double x) const {
  const auto p = legendre_values(terms, x);
  double acc = 0.0;
  for (int m = 0; m < terms; ++m) acc += coeffs[k][m] * p[m];
  return acc;
}

double LegendreOracle::lambda(int k) const {
  // int_{-1}^{1} e^{i c x t} P~_m(t) dt = 2 i^m sqrt((2m+1)/2) j_m(c x); use x = 1.
  std::complex<double> acc = 0.0;
  const std::complex<double> i(0.0, 1.0);
  for (int m = 0; m < terms; ++m) {
    const double jm = std::sph_bessel(static_cast<unsigned>(m), c);
    acc += coeffs[k][m] * 2.0 * std::pow(i, m) * std::sqrt((2.0 * m + 1.0) / 2.0) * jm;
  }
  const double mu = std::abs(acc) / std::abs(eval(k, 1.0));
  return c * mu * mu / (2.0 * std::numbers::pi);
}

}  // namespace psq::testing
