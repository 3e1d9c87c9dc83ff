#pragma once

#include "prolate_squeeze/pswf.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psq {

using cplx = std::complex<double>;

enum class Plane { source, object };
enum class Region { left_wing, core, right_wing };

std::string_view to_string(Plane p) noexcept;

/// Exterior of a field that is band-limited: for |x| > L
///   f(x) = int_{-1}^{1} g(u) exp(-i W u x) du
/// with bandwidth W. g is known at the nodes of `rule` and pointwise through
/// `density_at`. This lets the Fourier transform and the wing projections
/// account exactly for the part of a slowly decaying field beyond the grid.
struct BandlimitedTail {
  double bandwidth = 0.0;
  quad::Rule rule;
  std::vector<cplx> density;
  std::function<cplx(double)> density_at;

  cplx eval(double x) const;
};

/// Uniform panel of a PlaneField grid.
struct Panel {
  Region region;
  std::size_t first;
  std::size_t count;  // number of samples, intervals = count - 1
  double a;
  double b;
};

/// Complex amplitude of a classical field on a symmetric grid [-L, L] with
/// uniform step h. The grid is split into three panels at the core edges
/// +-1; the edge coordinates appear twice (once per adjacent panel) so core
/// and wing functions keep their one-sided values and each panel is
/// integrated with an end-corrected trapezoid rule.
class PlaneField {
public:
  using Sampler = std::function<cplx(double, Region)>;

  /// Requires L > 1, 1/h and (L - 1)/h integral.
  static PlaneField sample(Plane plane, double extent, double step, const Sampler& f);
  static PlaneField zeros(Plane plane, double extent, double step);

  Plane plane() const noexcept { return plane_; }
  double extent() const noexcept { return extent_; }
  double step() const noexcept { return step_; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  const std::vector<Panel>& panels() const noexcept { return panels_; }
  /// Quadrature weight of every sample (panel-wise Gregory weights).
  const std::vector<double>& weights() const noexcept { return weights_; }

  const std::optional<BandlimitedTail>& tail() const noexcept { return tail_; }
  void set_tail(std::optional<BandlimitedTail> t) { tail_ = std::move(t); }

  /// Squared L2 norm over the grid plus the exterior tail, if any.
  double norm_squared() const;
  /// Energy fraction sitting in the outer 5% of the grid on either side.
  double boundary_energy_fraction() const;

  PlaneField& operator+=(const PlaneField& other);
  PlaneField& operator*=(cplx scale);
  friend PlaneField operator+(PlaneField a, const PlaneField& b) { return a += b; }
  friend PlaneField operator*(cplx s, PlaneField a) { return a *= s; }

  /// CSV with header `coordinate,re,im`, one row per sample (core edges twice).
  std::string to_csv() const;
  /// Inverse of to_csv; the exterior tail is not part of the CSV format.
  static PlaneField from_csv(Plane plane, std::string_view text);

private:
  PlaneField() = default;
  void build_grid(double extent, double step);

  Plane plane_ = Plane::source;
  double extent_ = 0.0;
  double step_ = 0.0;
  std::vector<double> coords_;
  std::vector<cplx> values_;
  std::vector<Panel> panels_;
  std::vector<double> weights_;
  std::optional<BandlimitedTail> tail_;
};

/// Core (phi_k) and wing (chi_k) coefficients of a field.
struct ModeCoefficients {
  std::vector<cplx> c_core;
  std::vector<cplx> d_wings;
  /// Field energy not captured by the retained modes (>= 0 up to rounding).
  double residual = 0.0;

  int size() const noexcept { return static_cast<int>(c_core.size()); }
  std::string to_json() const;
  static ModeCoefficients from_json(std::string_view text);
};

/// Transmitting window |xi| <= ratio in the source plane, ratio = d_s / d.
struct DiaphragmSpec {
  double ratio;
  explicit DiaphragmSpec(double r);
};

enum class ModeShape { phi, chi, psi, theta };

/// Samples phi_k, chi_k, psi_k or theta_k onto a grid, attaching the exact
/// band-limited exterior for the shapes that have wings.
PlaneField mode_field(const ProlateBasis& basis, int k, ModeShape shape, Plane plane,
                      double extent = 8.0, double step = 1.0 / 64.0);

/// Exterior of sum_k a_k psi_k.
BandlimitedTail prolate_tail(const ProlateBasis& basis, std::span<const cplx> psi_coeffs);

/// Lens transform a(s) = sqrt(c / 2pi) int dxi exp(-i c s xi) f(xi), evaluated
/// on an object grid of the same extent and step as the input. A field
/// without an exterior tail must have negligible energy near its grid edge.
PlaneField fourier_T(const PlaneField& source, BandParameter band);
PlaneField fourier_T(const PlaneField& source, BandParameter band, double out_extent,
                     double out_step);

/// c_core[k] = int_{|xi|<=1} f phi_k,  d_wings[k] = int_{|xi|>1} f chi_k.
ModeCoefficients project_core_wings(const PlaneField& field, const ProlateBasis& basis);

/// Coefficients on psi_k: sqrt(lambda_k) c_core[k] + sqrt(1 - lambda_k) d_wings[k].
std::vector<cplx> prolate_coefficients(const ModeCoefficients& coeffs, const ProlateBasis& basis);

/// A_k = (-i)^k c_core[k]; the wing coefficients never enter.
std::vector<cplx> object_amplitudes(const ModeCoefficients& coeffs);

/// Zeroes the field outside |xi| <= ratio; a window covering the grid returns
/// the input unchanged (tail included).
PlaneField apply_diaphragm(const PlaneField& field, DiaphragmSpec dia);

/// sum_k A_k psi_k(s) on an object grid (the unobserved remainder is dropped).
PlaneField synthesize_object_field(std::span<const cplx> amplitudes, const ProlateBasis& basis,
                                   double extent = 8.0, double step = 1.0 / 64.0);

/// i^k
cplx i_pow(int k) noexcept;

}  // namespace psq
