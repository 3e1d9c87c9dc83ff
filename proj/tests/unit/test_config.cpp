#include "prolate_squeeze/config.hpp"
#include "prolate_squeeze/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace psq {
namespace {

const char* kMinimal = R"({
  "imaging": {"d": 1e-3, "d_s": 1e-3, "X": 1e-3, "lambda": 1e-6, "f": 1.0},
  "basis": {"K": 4},
  "profile": {"family": "constant_band", "r0": 1.0, "q_c_over_c": 2.0}
})";

TEST(RunConfig, DefaultsAndDerivedValues) {
  const auto cfg = RunConfig::parse(kMinimal);
  EXPECT_EQ(cfg.K, 4);
  EXPECT_EQ(cfg.M, 0);
  EXPECT_EQ(cfg.mc_n, 100000u);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.formats, (std::vector<std::string>{"csv", "json"}));
  EXPECT_NEAR(cfg.c(), std::numbers::pi / 2, 1e-15);
  const auto p = cfg.resolve_profile();
  EXPECT_EQ(p.family(), ProfileFamily::constant_band);
  EXPECT_NEAR(p.q_c(), std::numbers::pi, 1e-15);
  // Range max(4c, q_c) = 2 pi, so M is set by 4K.
  EXPECT_EQ(cfg.resolved_order(), 16);
}

TEST(RunConfig, RoundTripIsLossless) {
  for (const char* text : {kMinimal}) {
    const auto a = RunConfig::parse(text);
    const auto b = RunConfig::parse(a.to_json());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.to_json(), b.to_json());
  }
  RunConfig odd = RunConfig::parse(kMinimal);
  odd.seed = 18446744073709551615ull;
  odd.imaging.X = 0.1 + 0.2;
  odd.classical_amplitude = 1.0 / 3.0;
  odd.formats = {"json"};
  EXPECT_EQ(RunConfig::parse(odd.to_json()), odd);
}

TEST(RunConfig, RejectsUnknownAndMalformed) {
  EXPECT_THROW(RunConfig::parse("{"), ConfigError);
  EXPECT_THROW(RunConfig::parse(R"({"imaging": {}})"), ConfigError);
  std::string extra = kMinimal;
  extra.insert(extra.rfind('}'), R"(, "colour": 1)");
  EXPECT_THROW(RunConfig::parse(extra), ConfigError);
  std::string nested = kMinimal;
  nested.replace(nested.find(R"("K": 4)"), 6, R"("K": 4, "N": 2)");
  EXPECT_THROW(RunConfig::parse(nested), ConfigError);
  std::string bad_profile = kMinimal;
  bad_profile.replace(bad_profile.find("constant_band"), 13, "lorentzian");
  EXPECT_THROW(RunConfig::parse(bad_profile), ConfigError);
  std::string neg = kMinimal;
  neg.replace(neg.find("1e-6"), 4, "-1e-6");
  EXPECT_THROW(RunConfig::parse(neg), ConfigError);
  std::string frac = kMinimal;
  frac.replace(frac.find(R"("K": 4)"), 6, R"("K": 4.5)");
  EXPECT_THROW(RunConfig::parse(frac), ConfigError);
}

TEST(RunConfig, TablePathResolvesAgainstConfigDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "psq_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream t(dir / "table.csv");
    t << "q,r,theta,phi\n0,1.0,0,0\n2,0.5,0.1,0\n4,0,0.1,0\n";
    std::ofstream c(dir / "run.json");
    c << R"({"imaging": {"d": 1e-3, "d_s": 1e-3, "X": 1e-3, "lambda": 1e-6, "f": 1.0},
             "basis": {"K": 3, "M": 40},
             "profile": {"family": "tabulated", "table_path": "table.csv"}})";
  }
  const auto cfg = RunConfig::load((dir / "run.json").string());
  const auto p = cfg.resolve_profile();
  EXPECT_EQ(p.family(), ProfileFamily::tabulated);
  EXPECT_DOUBLE_EQ(p.r(-1.0), 0.75);
  EXPECT_EQ(cfg.resolved_order(), 40);
  EXPECT_THROW(RunConfig::load((dir / "missing.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(RunConfig, ShippedDefaultParses) {
  const auto cfg = RunConfig::load(PSQ_SOURCE_DIR "/configs/default.json");
  EXPECT_NEAR(shannon_number(cfg.imaging), 4.0, 1e-12);
  EXPECT_EQ(cfg.resolve_profile().family(), ProfileFamily::gaussian);
  const auto basis = cfg.build_basis();
  EXPECT_EQ(basis.size(), 8);
  EXPECT_NO_THROW(mode_variances(basis, cfg.resolve_profile(), 7));
}

}  // namespace
}  // namespace psq
