#pragma once

#include "prolate_squeeze/pswf.hpp"

#include <Eigen/Core>

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace psq {

enum class ProfileFamily { vacuum, constant_band, gaussian, tabulated };

std::string_view to_string(ProfileFamily f) noexcept;

/// Tabulated profile: sorted q with r, theta, phi per node, linear
/// interpolation inside, constant extrapolation outside.
struct ProfileTable {
  std::vector<double> q;
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> phi;
};

/// Where a profile stops varying: for |q| >= start, r(q) = r and, when
/// theta_constant, theta(q) = theta.
struct FarField {
  double start = 0.0;
  double r = 0.0;
  double theta = 0.0;
  bool theta_constant = true;
};

/// Spatial-frequency dependence of the OPA squeezing: magnitude r(q), phase
/// of the amplified quadrature theta(q) and input phase phi(q).
///
/// Parametric families take theta(q) = theta0 + beta q^2 (diffraction phase;
/// beta = 0 is the compensated case) and phi(q) = phi0.
///   constant_band: r(q) = r0 for |q| <= q_c, 0 beyond (q_c may be +inf)
///   gaussian:      r(q) = r0 exp(-q^2 / (2 q_c^2))
class SqueezingProfile {
public:
  static constexpr double kMaxR = 12.0;

  static SqueezingProfile vacuum();
  static SqueezingProfile constant_band(double r0, double q_c, double theta0 = 0.0,
                                        double beta = 0.0, double phi0 = 0.0);
  static SqueezingProfile gaussian(double r0, double q_c, double theta0 = 0.0, double beta = 0.0,
                                   double phi0 = 0.0);
  static SqueezingProfile tabulated(ProfileTable table);

  ProfileFamily family() const noexcept { return family_; }
  double r0() const noexcept { return r0_; }
  double q_c() const noexcept { return q_c_; }
  double theta0() const noexcept { return theta0_; }
  double beta() const noexcept { return beta_; }
  double phi0() const noexcept { return phi0_; }
  const ProfileTable& table() const noexcept { return table_; }

  double r(double q) const;
  double theta(double q) const;
  double phi(double q) const;

  double max_r() const;
  FarField far_field() const;
  /// q values (both signs) where r, theta or phi have jumps or kinks.
  std::vector<double> breakpoints() const;
  /// r, theta, phi agree at q and -q to tol.
  bool is_even_at(double q, double tol = 1e-12) const;

  std::string to_json() const;
  static SqueezingProfile from_json(std::string_view text);

private:
  SqueezingProfile() = default;
  double table_arg(double q) const;
  static double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x);

  ProfileFamily family_ = ProfileFamily::vacuum;
  double r0_ = 0.0;
  double q_c_ = 0.0;
  double theta0_ = 0.0;
  double beta_ = 0.0;
  double phi0_ = 0.0;
  ProfileTable table_;
};

struct UVCoefficients {
  std::complex<double> U;
  std::complex<double> V;
};

/// U(q), V(q) of c(q) = U c_in(q) + V c_in^+(-q), from the pair
///   U(q) +- V*(-q) = e^{-i phi} [e^{+-r} cos theta + i e^{-+r} sin theta]
/// solved as a 2x2 linear system at q and -q. Requires an even profile.
UVCoefficients solve_uv(const SqueezingProfile& profile, double q);

struct IntegrationOptions {
  /// Integration half-range in units of c when the profile never settles.
  double q_max_factor = 4.0;
  double abs_tol = 1e-13;
  /// Max psi_k^2 energy allowed beyond the range when it is not accounted for.
  double truncation_tol = 1e-8;
};

struct ModeVariance {
  double var1;
  double var2;
};

/// <(dA_1k)^2>, <(dA_2k)^2> = (1/4c) int dq psi_k^2(q/c) [e^{+-2r} cos^2 theta + e^{-+2r} sin^2 theta],
/// upper signs for even k. The constant far-field part of the bracket is
/// integrated exactly through the unit norm of psi_k.
ModeVariance mode_variances(const ProlateBasis& basis, const SqueezingProfile& profile, int k,
                            const IntegrationOptions& opt = {});

/// mode_variances for k = 0..K-1, computed in parallel.
std::vector<ModeVariance> mode_variance_table(const ProlateBasis& basis,
                                              const SqueezingProfile& profile,
                                              const IntegrationOptions& opt = {});

/// Covariance of (A_10, A_20, A_11, A_21, ...) assembled from the U/V
/// representation of the mode amplitudes with vacuum input.
struct ModeCovariance {
  int K = 0;
  double c = 0.0;
  Eigen::MatrixXd sigma;
  std::string profile_descriptor;  // JSON of the profile

  double var1(int k) const { return sigma(2 * k, 2 * k); }
  double var2(int k) const { return sigma(2 * k + 1, 2 * k + 1); }
  double cov12(int k) const { return sigma(2 * k, 2 * k + 1); }

  std::string to_json() const;
  static ModeCovariance from_json(std::string_view text);
};

/// Vacuum covariance (1/4) I for K modes.
ModeCovariance vacuum_covariance(int K, double c);

ModeCovariance full_covariance(const ProlateBasis& basis, const SqueezingProfile& profile,
                               const IntegrationOptions& opt = {});

struct ModeSqueezing {
  int k;
  int parity;
  /// Angle t in [0, pi) of the quadrature A_1 cos t + A_2 sin t with least noise.
  double angle;
  double min_var;
  double max_var;
  /// 10 log10(min_var / (1/4))
  double db;
  bool squeezed;
};

std::vector<ModeSqueezing> squeezing_report(const ModeCovariance& cov);

/// CSV `k,parity,var1,var2,min_dB`.
std::string variance_table_csv(const std::vector<ModeVariance>& rows);

}  // namespace psq
