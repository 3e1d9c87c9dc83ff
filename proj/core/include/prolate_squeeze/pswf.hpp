#pragma once

#include "prolate_squeeze/quadrature.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psq {

/// Dimensionless space-bandwidth product c of the imaging system.
class BandParameter {
public:
  explicit BandParameter(double c);

  double value() const noexcept { return c_; }
  /// S = 2c/pi, the number of well transmitted modes (trace of the sinc kernel).
  double shannon_number() const noexcept;
  /// c < 0.1: every eigenvalue is tiny and the basis is of little use.
  bool is_degenerate() const noexcept { return c_ < 0.1; }

private:
  double c_;
};

struct BasisOptions {
  /// Max |lambda_k(M) - lambda_k(2M)| accepted for k < K.
  double convergence_tol = 1e-10;
  bool check_convergence = true;
  /// Eigenvalues below this are considered unresolvable.
  double lambda_floor = 1e-15;
};

/// Prolate spheroidal functions of order zero for a fixed c, normalized to
/// unit L2 norm on the whole real line (so that the integral of psi_k^2 over
/// [-1, 1] equals lambda_k). Immutable; copies share storage.
///
/// phi_k  = psi_k / sqrt(lambda_k)      on |s| <= 1, zero outside
/// chi_k  = psi_k / sqrt(1 - lambda_k)  on |s| >  1, zero inside
/// theta_k = sqrt(1 - lambda_k) phi_k - sqrt(lambda_k) chi_k
class ProlateBasis {
public:
  static constexpr std::string_view kNormConvention = "unit L2 norm on (-inf,inf)";

  const BandParameter& band() const noexcept;
  double c() const noexcept { return band().value(); }
  /// Number of retained modes K.
  int size() const noexcept;
  /// Gauss-Legendre order M of the core discretization.
  int order() const noexcept;

  std::span<const double> lambdas() const noexcept;
  double lambda(int k) const;
  const quad::Rule& rule() const noexcept;
  /// phi_k at the quadrature nodes (unit norm on [-1, 1], phi_k(1) > 0).
  std::span<const double> core_samples(int k) const;

  /// Largest |s| at which the finite-Fourier extension keeps full accuracy.
  double validity_bound() const noexcept;

  double eval_psi(int k, double s) const;
  double eval_phi(int k, double s) const;
  /// Zero when 1 - lambda_k < 1e-14 (see degenerate_wings()).
  double eval_chi(int k, double s) const;
  double eval_theta(int k, double s) const;
  /// psi_0..psi_{K-1} at s in one pass; out.size() must be >= K.
  void eval_psi_all(double s, std::span<double> out) const;

  /// Modes whose wing functions chi_k are numerically undefined.
  std::vector<int> degenerate_wings() const;
  /// Human-readable conditioning notes collected at construction.
  const std::vector<std::string>& warnings() const noexcept;

  std::string to_json() const;
  static ProlateBasis from_json(std::string_view text);

  /// Opaque storage; defined in pswf.cpp.
  struct Data;

private:
  explicit ProlateBasis(std::shared_ptr<const Data> data);
  void check_index(int k) const;
  void check_argument(double s) const;

  std::shared_ptr<const Data> data_;

  friend ProlateBasis build_basis(BandParameter, int, int, const BasisOptions&);
};

/// Solves the sinc-kernel eigenproblem
///   int_{-1}^{1} sin(c(s-t)) / (pi (s-t)) phi(t) dt = lambda phi(s)
/// by Nystrom discretization on an M-point Gauss-Legendre rule and keeps the
/// K largest eigenpairs. Requires M >= max(4K, ceil(4c)).
///
/// Throws ResolutionError when lambda_{K-1} falls below the floor, and
/// ConvergenceError when the leading K eigenvalues move between M and 2M.
ProlateBasis build_basis(BandParameter band, int K, int M, const BasisOptions& opt = {});

/// Every eigenvalue of the M-point Nystrom matrix, descending.
std::vector<double> nystrom_spectrum(BandParameter band, int M);

/// sin(c x) / (pi x) with the removable singularity filled in.
double sinc_kernel(double c, double x) noexcept;

}  // namespace psq
