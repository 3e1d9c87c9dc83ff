#include "prolate_squeeze/config.hpp"

#include "prolate_squeeze/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace psq {

namespace {

using json = nlohmann::ordered_json;

void only_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " is missing \"" + key + "\"");
  return j[key];
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(what + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

ProfileTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile table " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("q,r,theta,phi", 0) != 0)
    throw ConfigError("profile table " + path.string() + " must start with header q,r,theta,phi");
  ProfileTable t;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double v[4];
    char sep;
    for (int i = 0; i < 4; ++i) {
      if (!(ls >> v[i]) || (i < 3 && !(ls >> sep && sep == ',')))
        throw ConfigError("profile table " + path.string() + ": bad row " + std::to_string(row));
    }
    t.q.push_back(v[0]);
    t.r.push_back(v[1]);
    t.theta.push_back(v[2]);
    t.phi.push_back(v[3]);
  }
  return t;
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, std::string base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config", {"imaging", "basis", "profile", "budget", "mc", "output"});

  RunConfig cfg;
  cfg.base_dir = std::move(base_dir);

  const auto& im = need(j, "imaging", "config");
  only_keys(im, "imaging", {"d", "d_s", "X", "lambda", "f"});
  cfg.imaging.d = number(need(im, "d", "imaging"), "imaging.d");
  cfg.imaging.d_s = number(need(im, "d_s", "imaging"), "imaging.d_s");
  cfg.imaging.X = number(need(im, "X", "imaging"), "imaging.X");
  cfg.imaging.lambda_light = number(need(im, "lambda", "imaging"), "imaging.lambda");
  cfg.imaging.f = number(need(im, "f", "imaging"), "imaging.f");
  try {
    cfg.imaging.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  const auto& ba = need(j, "basis", "config");
  only_keys(ba, "basis", {"K", "M"});
  const auto K = count(need(ba, "K", "basis"), "basis.K");
  if (K < 1 || K > 100000) throw ConfigError("basis.K must lie in [1, 100000]");
  cfg.K = static_cast<int>(K);
  if (ba.contains("M")) {
    const auto M = count(ba["M"], "basis.M");
    if (M > 1000000) throw ConfigError("basis.M is unreasonably large");
    cfg.M = static_cast<int>(M);
  }

  const auto& pr = need(j, "profile", "config");
  if (!pr.is_object()) throw ConfigError("profile must be an object");
  cfg.profile = pr.dump();

  if (j.contains("budget")) {
    only_keys(j["budget"], "budget", {"threshold"});
    if (j["budget"].contains("threshold"))
      cfg.band_threshold = number(j["budget"]["threshold"], "budget.threshold");
    if (!(cfg.band_threshold > 0.0 && cfg.band_threshold < 1.0))
      throw ConfigError("budget.threshold must lie in (0, 1)");
  }

  if (j.contains("mc")) {
    const auto& mc = j["mc"];
    only_keys(mc, "mc", {"n", "seed", "classical_amplitude", "classical_phase"});
    if (mc.contains("n")) cfg.mc_n = count(mc["n"], "mc.n");
    if (cfg.mc_n < 2) throw ConfigError("mc.n must be >= 2");
    if (mc.contains("seed")) cfg.seed = count(mc["seed"], "mc.seed");
    if (mc.contains("classical_amplitude"))
      cfg.classical_amplitude = number(mc["classical_amplitude"], "mc.classical_amplitude");
    if (mc.contains("classical_phase"))
      cfg.classical_phase = number(mc["classical_phase"], "mc.classical_phase");
  }

  if (j.contains("output")) {
    const auto& out = j["output"];
    only_keys(out, "output", {"directory", "formats"});
    if (out.contains("directory")) {
      if (!out["directory"].is_string()) throw ConfigError("output.directory must be a string");
      cfg.out_dir = out["directory"].get<std::string>();
    }
    if (out.contains("formats")) {
      if (!out["formats"].is_array() || out["formats"].empty())
        throw ConfigError("output.formats must be a non-empty array");
      cfg.formats.clear();
      for (const auto& f : out["formats"]) {
        if (!f.is_string() || (f != "csv" && f != "json"))
          throw ConfigError("output.formats entries must be \"csv\" or \"json\"");
        if (std::find(cfg.formats.begin(), cfg.formats.end(), f.get<std::string>()) !=
            cfg.formats.end())
          throw ConfigError("output.formats lists a format twice");
        cfg.formats.push_back(f.get<std::string>());
      }
    }
  }

  // Fail early on an unusable profile.
  cfg.resolve_profile();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse(ss.str(), dir.empty() ? "." : dir.string());
}

std::string RunConfig::to_json() const {
  json j;
  j["imaging"] = {{"d", imaging.d},
                  {"d_s", imaging.d_s},
                  {"X", imaging.X},
                  {"lambda", imaging.lambda_light},
                  {"f", imaging.f}};
  j["basis"] = {{"K", K}, {"M", M}};
  j["profile"] = json::parse(profile);
  j["budget"] = {{"threshold", band_threshold}};
  j["mc"] = {{"n", mc_n},
             {"seed", seed},
             {"classical_amplitude", classical_amplitude},
             {"classical_phase", classical_phase}};
  j["output"] = {{"directory", out_dir}, {"formats", formats}};
  return j.dump(2) + "\n";
}

SqueezingProfile RunConfig::resolve_profile() const {
  json p = json::parse(profile);
  try {
    if (p.contains("q_c_over_c")) {
      if (p.contains("q_c")) throw ConfigError("profile sets both q_c and q_c_over_c");
      const auto& v = p["q_c_over_c"];
      if (v.is_null())
        p["q_c"] = nullptr;
      else
        p["q_c"] = number(v, "profile.q_c_over_c") * c();
      p.erase("q_c_over_c");
    }
    if (p.contains("table_path")) {
      if (!p["table_path"].is_string()) throw ConfigError("profile.table_path must be a string");
      std::filesystem::path path = p["table_path"].get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      const ProfileTable t = read_table(path);
      p.erase("table_path");
      p["q"] = t.q;
      p["r"] = t.r;
      p["theta"] = t.theta;
      p["phi"] = t.phi;
    }
    return SqueezingProfile::from_json(p.dump());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

int RunConfig::resolved_order() const {
  if (M > 0) return M;
  const double cc = c();
  const FarField ff = resolve_profile().far_field();
  // The variance integrals need |q| <= max(4c, settling point) inside M/c.
  const double Q = std::max(4.0 * cc, ff.start);
  const double need = std::max({4.0 * K, std::ceil(4.0 * cc), std::ceil(Q) + 1.0});
  return static_cast<int>(need);
}

ProlateBasis RunConfig::build_basis() const {
  return psq::build_basis(BandParameter(c()), K, resolved_order());
}

bool RunConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

}  // namespace psq
