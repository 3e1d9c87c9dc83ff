#pragma once

#include "prolate_squeeze/budget.hpp"
#include "prolate_squeeze/pswf.hpp"
#include "prolate_squeeze/squeeze.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace psq {

/// One run of the command-line tool, read from a single JSON document:
///
///   {
///     "imaging": {"d": 2e-3, "d_s": 2e-3, "X": 1e-3, "lambda": 5e-7, "f": 1.0},
///     "basis":   {"K": 8, "M": 0},
///     "profile": {"family": "gaussian", "r0": 1.0, "q_c_over_c": 3.0},
///     "budget":  {"threshold": 0.5},
///     "mc":      {"n": 100000, "seed": 42, "classical_amplitude": 0.0, "classical_phase": 0.0},
///     "output":  {"directory": "out", "formats": ["csv", "json"]}
///   }
///
/// M = 0 picks the quadrature order automatically. The profile takes the
/// squeezing-profile keys, with "q_c_over_c" as an alternative to "q_c" and,
/// for tabulated profiles, "table_path" (CSV q,r,theta,phi relative to the
/// config file) as an alternative to inline columns. Unknown keys are errors.
struct RunConfig {
  ImagingConfig imaging;
  int K = 0;
  int M = 0;
  std::string profile = R"({"family":"vacuum"})";  // descriptor as written
  double band_threshold = 0.5;
  std::uint64_t mc_n = 100000;
  std::uint64_t seed = 42;
  double classical_amplitude = 0.0;
  double classical_phase = 0.0;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  /// Directory that relative table paths resolve against; not serialized.
  std::string base_dir = ".";

  /// Throws ConfigError on malformed or unknown content.
  static RunConfig parse(std::string_view text, std::string base_dir = ".");
  static RunConfig load(const std::string& path);
  std::string to_json() const;

  double c() const { return band_parameter(imaging); }
  SqueezingProfile resolve_profile() const;
  /// M, or the automatic choice covering the profile's integration range.
  int resolved_order() const;
  ProlateBasis build_basis() const;
  bool wants(std::string_view format) const;

  bool operator==(const RunConfig&) const = default;
};

}  // namespace psq
