#include "prolate_squeeze/budget.hpp"

#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace psq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using std::numbers::pi;

void check_length(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw DomainError(std::string("imaging config: ") + name + " must be finite and > 0");
}

}  // namespace

void ImagingConfig::validate() const {
  check_length(d, "d");
  check_length(d_s, "d_s");
  check_length(X, "X");
  check_length(lambda_light, "lambda");
  check_length(f, "f");
}

double shannon_number(const ImagingConfig& cfg) {
  cfg.validate();
  return cfg.d * cfg.X / (cfg.lambda_light * cfg.f);
}

double band_parameter(const ImagingConfig& cfg) { return 0.5 * pi * shannon_number(cfg); }

double coherence_bound(const ImagingConfig& cfg) {
  return pi * cfg.d / (2.0 * band_parameter(cfg));
}

EffectiveBand effective_band(const SqueezingProfile& profile, double threshold_fraction) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    throw DomainError("effective_band: threshold fraction must lie in (0, 1)");
  const double rmax = profile.max_r();
  if (rmax <= 0.0) return {0.0, true};
  const double target = threshold_fraction * rmax;
  const FarField ff = profile.far_field();
  if (ff.r >= target) return {kInf, false};

  // r < target for q >= hi; scan down for the last q with r >= target, then
  // bisect the crossing.
  const double hi = ff.start;
  const int n = 4096;
  double above = -1.0;
  for (int i = n; i >= 0; --i) {
    const double q = hi * i / n;
    if (profile.r(q) >= target) {
      above = q;
      break;
    }
  }
  if (above < 0.0) return {0.0, true};
  if (above >= hi) return {hi, false};
  double a = above, b = std::min(hi, above + hi / n);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
    const double m = 0.5 * (a + b);
    (profile.r(m) >= target ? a : b) = m;
  }
  return {a, false};
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::insufficient: return "insufficient";
    case Verdict::marginal: return "marginal";
    case Verdict::sufficient: return "sufficient";
  }
  return "unknown";
}

BudgetReport budget_for_band(const ImagingConfig& cfg, double q_c, bool no_squeezing) {
  if (std::isnan(q_c) || q_c < 0.0) throw DomainError("budget: q_c must be >= 0");
  BudgetReport r;
  r.S = shannon_number(cfg);
  r.c = band_parameter(cfg);
  r.l_c_bound = coherence_bound(cfg);
  r.matched = cfg.matched();
  r.q_c = q_c;
  r.no_squeezing = no_squeezing || q_c == 0.0;
  r.margin = q_c / r.c;
  // N = d / l_c = 2 q_c / pi, written as S * (q_c / c) so that N / S is
  // exactly the margin.
  r.N = r.S * r.margin;
  r.l_c = q_c > 0.0 ? pi * cfg.d / (2.0 * q_c) : kInf;
  if (r.margin < 1.0)
    r.verdict = Verdict::insufficient;
  else if (r.margin < kSufficientMargin)
    r.verdict = Verdict::marginal;
  else
    r.verdict = Verdict::sufficient;
  return r;
}

BudgetReport budget(const ImagingConfig& cfg, const SqueezingProfile& profile,
                    double threshold_fraction) {
  const auto band = effective_band(profile, threshold_fraction);
  return budget_for_band(cfg, band.q_c, band.no_squeezing);
}

std::string BudgetReport::to_json() const {
  nlohmann::json j;
  // Infinite values (unbounded band, zero band) are written as null.
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  j["c"] = c;
  j["S"] = S;
  j["l_c_bound"] = l_c_bound;
  j["q_c"] = num(q_c);
  j["l_c"] = num(l_c);
  j["N"] = num(N);
  j["margin"] = num(margin);
  j["verdict"] = std::string(to_string(verdict));
  j["matched"] = matched;
  j["no_squeezing"] = no_squeezing;
  return j.dump(2);
}

std::string BudgetReport::to_table() const {
  std::ostringstream os;
  auto row = [&](const char* name, const std::string& value) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-14s %s\n", name, value.c_str());
    os << buf;
  };
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::string(buf);
  };
  row("c", num(c));
  row("S", num(S));
  row("l_c_bound [m]", num(l_c_bound));
  row("q_c", num(q_c));
  row("l_c [m]", num(l_c));
  row("N", num(N));
  row("N/S", num(margin));
  row("verdict", std::string(to_string(verdict)));
  row("matched", matched ? "yes" : "no");
  row("no_squeezing", no_squeezing ? "yes" : "no");
  return os.str();
}

double band_overlap(const ProlateBasis& basis, int k, double q_band) {
  if (q_band < 0.0) throw DomainError("band_overlap: band must be >= 0");
  if (q_band == 0.0) return 0.0;
  const double c = basis.c();
  const double s_max = q_band / c;
  if (std::isinf(s_max)) return 1.0;
  if (s_max > basis.validity_bound())
    throw DomainError("band_overlap: band exceeds the basis validity bound");
  auto f = [&](double s) {
    const double p = basis.eval_psi(k, s);
    return p * p;
  };
  quad::Options o;
  o.abs_tol = 1e-14;
  return quad::integrate(f, -s_max, s_max, {}, o).value;
}

std::vector<OverlapRow> overlap_table(const ProlateBasis& basis, const SqueezingProfile& profile,
                                      double q_band) {
  const auto vars = mode_variance_table(basis, profile);
  std::vector<OverlapRow> rows;
  for (int k = 0; k < basis.size(); ++k) {
    const auto& v = vars[static_cast<std::size_t>(k)];
    rows.push_back({k, basis.lambda(k), band_overlap(basis, k, q_band), std::min(v.var1, v.var2)});
  }
  return rows;
}

}  // namespace psq
