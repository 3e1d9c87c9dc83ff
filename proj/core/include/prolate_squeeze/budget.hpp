#pragma once

#include "prolate_squeeze/pswf.hpp"
#include "prolate_squeeze/squeeze.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace psq {

/// Geometry of the lens imaging scheme, SI units.
struct ImagingConfig {
  double d = 0.0;             // pupil size
  double d_s = 0.0;           // source diaphragm size
  double X = 0.0;             // object size
  double lambda_light = 0.0;  // wavelength
  double f = 0.0;             // focal length

  /// Throws DomainError unless every length is finite and > 0.
  void validate() const;
  /// d_s >= d: the source diaphragm does not clip the pupil.
  bool matched() const { return d_s >= d; }

  bool operator==(const ImagingConfig&) const = default;
};

/// S = d X / (lambda f).
double shannon_number(const ImagingConfig& cfg);
/// c = (pi / 2) d X / (lambda f).
double band_parameter(const ImagingConfig& cfg);
/// Upper bound on the coherence length, l_c <= pi d / (2c) = d / S.
double coherence_bound(const ImagingConfig& cfg);

struct EffectiveBand {
  double q_c = 0.0;  // +inf for squeezing that never falls off
  bool no_squeezing = false;
};

/// Largest q with r(q) >= threshold_fraction * max r.
EffectiveBand effective_band(const SqueezingProfile& profile, double threshold_fraction = 0.5);

enum class Verdict { insufficient, marginal, sufficient };

std::string_view to_string(Verdict v) noexcept;

struct BudgetReport {
  double c = 0.0;
  double S = 0.0;
  double l_c_bound = 0.0;  // pi d / (2c)
  double q_c = 0.0;
  double l_c = 0.0;  // pi d / (2 q_c)
  double N = 0.0;    // d / l_c
  double margin = 0.0;  // N / S = q_c / c
  Verdict verdict = Verdict::insufficient;
  bool matched = false;
  bool no_squeezing = false;

  std::string to_json() const;
  /// Aligned two-column plain-text table.
  std::string to_table() const;
};

/// Margin thresholds: N < S insufficient, N < 10 S marginal, else sufficient.
inline constexpr double kSufficientMargin = 10.0;

/// Budget for an effective squeezing half-band q_c (same units as c).
BudgetReport budget_for_band(const ImagingConfig& cfg, double q_c, bool no_squeezing = false);

BudgetReport budget(const ImagingConfig& cfg, const SqueezingProfile& profile,
                    double threshold_fraction = 0.5);

/// Fraction of the unit-norm energy of psi_k(q/c)/sqrt(c) with |q| <= q_band.
double band_overlap(const ProlateBasis& basis, int k, double q_band);

struct OverlapRow {
  int k;
  double lambda;
  double overlap;
  double min_var;
};

/// Band overlap and minimal variance of each mode under a squeezing profile.
std::vector<OverlapRow> overlap_table(const ProlateBasis& basis, const SqueezingProfile& profile,
                                      double q_band);

}  // namespace psq
