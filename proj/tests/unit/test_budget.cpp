#include "prolate_squeeze/budget.hpp"
#include "prolate_squeeze/error.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

namespace psq {
namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

ImagingConfig s200() { return {2e-3, 2e-3, 5e-3, 0.5e-6, 0.1}; }

TEST(Imaging, ShannonNumber) {
  EXPECT_NEAR(shannon_number(s200()), 200.0, 1e-12);
  EXPECT_NEAR(shannon_number({1e-3, 1e-3, 1e-3, 1e-6, 1.0}), 1.0, 1e-15);
  for (const auto& cfg : {s200(), ImagingConfig{3e-3, 1e-3, 7e-3, 0.8e-6, 0.25}}) {
    EXPECT_NEAR(shannon_number(cfg), 2.0 * band_parameter(cfg) / pi,
                1e-12 * shannon_number(cfg));
  }
}

TEST(Imaging, Validation) {
  ImagingConfig bad = s200();
  bad.f = 0.0;
  EXPECT_THROW(shannon_number(bad), DomainError);
  bad = s200();
  bad.X = std::nan("");
  EXPECT_THROW(bad.validate(), DomainError);
  EXPECT_TRUE(s200().matched());
  ImagingConfig small = s200();
  small.d_s = 1e-3;
  EXPECT_FALSE(small.matched());
}

TEST(Imaging, CoherenceBound) {
  const auto cfg = s200();
  EXPECT_NEAR(band_parameter(cfg), 100.0 * pi, 1e-10);
  EXPECT_NEAR(coherence_bound(cfg), 1e-5, 1e-17);
  EXPECT_NEAR(coherence_bound(cfg), cfg.d / shannon_number(cfg), 1e-18);
  // d -> 2d with X -> X/2 keeps c fixed and doubles the bound.
  ImagingConfig wide = cfg;
  wide.d *= 2.0;
  wide.X /= 2.0;
  EXPECT_NEAR(band_parameter(wide), band_parameter(cfg), 1e-10);
  EXPECT_NEAR(coherence_bound(wide), 2.0 * coherence_bound(cfg), 1e-17);
}

TEST(EffectiveBand, ConstantBandCutoff) {
  for (double q0 : {0.3, 2.0, 17.5}) {
    const auto b = effective_band(SqueezingProfile::constant_band(1.2, q0));
    EXPECT_NEAR(b.q_c, q0, 1e-9);
    EXPECT_FALSE(b.no_squeezing);
  }
}

TEST(EffectiveBand, GaussianHalfMaximum) {
  for (double sigma : {0.5, 3.0, 40.0}) {
    const auto b = effective_band(SqueezingProfile::gaussian(1.0, sigma));
    EXPECT_NEAR(b.q_c, sigma * std::sqrt(2.0 * std::log(2.0)), 1e-9 * sigma);
  }
  const auto b = effective_band(SqueezingProfile::gaussian(1.0, 2.0), 0.25);
  EXPECT_NEAR(b.q_c, 2.0 * std::sqrt(2.0 * std::log(4.0)), 1e-9);
}

TEST(EffectiveBand, EdgeCases) {
  const auto v = effective_band(SqueezingProfile::vacuum());
  EXPECT_EQ(v.q_c, 0.0);
  EXPECT_TRUE(v.no_squeezing);
  EXPECT_TRUE(std::isinf(effective_band(SqueezingProfile::constant_band(1.0, kInf)).q_c));
  const auto t = SqueezingProfile::tabulated({{0.0, 1.0, 2.0}, {1.0, 1.0, 0.0}, {0, 0, 0}, {0, 0, 0}});
  EXPECT_NEAR(effective_band(t).q_c, 1.5, 1e-12);
  EXPECT_THROW(effective_band(t, 1.0), DomainError);
  EXPECT_THROW(effective_band(t, 0.0), DomainError);
}

TEST(Budget, BoundaryIsMarginal) {
  const auto cfg = s200();
  const double c = band_parameter(cfg);
  const auto r = budget_for_band(cfg, c);
  EXPECT_EQ(r.N, r.S);
  EXPECT_EQ(r.verdict, Verdict::marginal);
  EXPECT_NEAR(r.N, 2.0 * c / pi, 1e-12 * r.N);
  EXPECT_NEAR(r.l_c, r.l_c_bound, 1e-18);
}

TEST(Budget, Verdicts) {
  const auto cfg = s200();
  const double c = band_parameter(cfg);
  const auto wide = budget_for_band(cfg, 20.0 * c);
  EXPECT_NEAR(wide.N, 20.0 * wide.S, 1e-12 * wide.N);
  EXPECT_EQ(wide.verdict, Verdict::sufficient);
  const auto narrow = budget_for_band(cfg, 0.5 * c);
  EXPECT_NEAR(narrow.N, 0.5 * narrow.S, 1e-12 * narrow.S);
  EXPECT_EQ(narrow.verdict, Verdict::insufficient);
  const auto none = budget(cfg, SqueezingProfile::vacuum());
  EXPECT_EQ(none.N, 0.0);
  EXPECT_EQ(none.verdict, Verdict::insufficient);
  EXPECT_TRUE(none.no_squeezing);
}

TEST(Budget, MarginIsBandRatio) {
  const auto cfg = s200();
  const double c = band_parameter(cfg);
  int last = -1;
  for (double f = 0.01; f < 40.0; f *= 1.37) {
    const auto r = budget_for_band(cfg, f * c);
    EXPECT_NEAR(r.N / r.S, r.q_c / r.c, 1e-12 * r.margin);
    const int v = static_cast<int>(r.verdict);
    EXPECT_GE(v, last);
    last = v;
  }
}

TEST(Budget, FromProfileAndJson) {
  const auto cfg = s200();
  const double c = band_parameter(cfg);
  const auto r = budget(cfg, SqueezingProfile::constant_band(1.0, 20.0 * c));
  EXPECT_EQ(r.verdict, Verdict::sufficient);
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["verdict"], "sufficient");
  EXPECT_DOUBLE_EQ(j["margin"].get<double>(), r.margin);
  EXPECT_NE(r.to_table().find("verdict        sufficient"), std::string::npos);
  const auto inf = budget(cfg, SqueezingProfile::constant_band(1.0, kInf));
  EXPECT_TRUE(nlohmann::json::parse(inf.to_json())["N"].is_null());
}

TEST(BandOverlap, Limits) {
  const auto basis = build_basis(BandParameter(2.0), 4, 64);
  EXPECT_EQ(band_overlap(basis, 0, 0.0), 0.0);
  EXPECT_NEAR(band_overlap(basis, 0, 2.0), basis.lambda(0), 1e-10);
  EXPECT_NEAR(band_overlap(basis, 3, 2.0), basis.lambda(3), 1e-10);
  EXPECT_GT(band_overlap(basis, 0, 8.0), 0.98);
  EXPECT_GT(band_overlap(basis, 0, 8.0), band_overlap(basis, 0, 4.0));
}

// Low overlap with the squeezing band leaves a mode close to shot noise.
TEST(BandOverlap, LowOverlapMeansLittleSqueezing) {
  const double c = 2.0 * pi;
  const auto basis = build_basis(BandParameter(c), 10, 96);
  for (double f : {0.1, 0.25, 0.5, 1.0}) {
    int low = 0;
    for (const auto& row : overlap_table(basis, SqueezingProfile::constant_band(1.0, f * c), f * c)) {
      if (row.overlap >= 0.1) continue;
      ++low;
      EXPECT_GT(row.min_var, 0.2) << "q_c/c=" << f << " k=" << row.k;
    }
    EXPECT_GT(low, 0) << f;
  }
}

}  // namespace
}  // namespace psq
