#pragma once

#include <vector>

namespace psq::testing {

/// Prolate spheroidal functions from the commuting differential operator
///   -[(1 - x^2) psi']' + c^2 x^2 psi = chi psi
/// expanded in normalized Legendre polynomials (a tridiagonal problem per
/// parity). Independent of the Nystrom construction in the library.
struct LegendreOracle {
  LegendreOracle(double c, int terms);

  /// Concentration eigenvalue of mode k from the finite-Fourier relation.
  double lambda(int k) const;
  /// psi_k(x) on [-1, 1], unit norm there, sign fixed so psi_k(1) > 0.
  double eval(int k, double x) const;

  double c;
  int terms;
  std::vector<std::vector<double>> coeffs;  // per mode, normalized Legendre coefficients
};

}  // namespace psq::testing
