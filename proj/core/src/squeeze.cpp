#include "prolate_squeeze/squeeze.hpp"

#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/parallel.hpp"
#include "prolate_squeeze/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace psq {

namespace {

using cplx = std::complex<double>;
using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this r the bracket differs from 1 by less than 1e-13 and a
// gaussian profile is treated as settled.
constexpr double kSettledR = 5e-14;

void check_param(bool ok, const std::string& what) {
  if (!ok) throw DomainError("squeezing profile: " + what);
}

void check_r0(double r0) {
  check_param(std::isfinite(r0) && r0 >= 0.0, "r0 must be finite and >= 0");
  check_param(r0 <= SqueezingProfile::kMaxR, "r0 exceeds the bound r <= 12");
}

struct Local {
  double r, theta, phi;
};

Local local(const SqueezingProfile& p, double q) { return {p.r(q), p.theta(q), p.phi(q)}; }

// Right-hand sides of the defining pair: U + W = P, U - W = Mn with W(q) = V*(-q).
std::array<cplx, 2> rhs(const Local& l) {
  const cplx phase = std::polar(1.0, -l.phi);
  const double c = std::cos(l.theta), s = std::sin(l.theta);
  const double ep = std::exp(l.r), em = std::exp(-l.r);
  return {phase * cplx(ep * c, em * s), phase * cplx(em * c, ep * s)};
}

// Solution (U, W) of [[1, 1], [1, -1]] (U, W)^T = (P, Mn)^T.
std::array<cplx, 2> solve_pair(const Local& l) {
  const auto [P, Mn] = rhs(l);
  return {0.5 * (P + Mn), 0.5 * (P - Mn)};
}

UVCoefficients uv_from(const Local& at_q, const Local& at_minus_q) {
  const auto uw_q = solve_pair(at_q);
  const auto uw_mq = solve_pair(at_minus_q);
  // V(q) = W(-q)*.
  return {uw_q[0], std::conj(uw_mq[1])};
}

// Quadrature factors e_{sigma,p}: A_{sigma k} picks up psi_k(q/c) e_{sigma,p}(q)
// where p is the parity of k (sign +1 even, -1 odd).
//   e_1 = (U(q) + s V*(-q)) / 2,  e_2 = (U(q) - s V*(-q)) / 2i
struct Factors {
  cplx e[2][2];  // [sigma][parity]
};

Factors factors(const cplx& U, const cplx& V_minus_q) {
  Factors f;
  const cplx vs = std::conj(V_minus_q);
  for (int p = 0; p < 2; ++p) {
    const double s = p == 0 ? 1.0 : -1.0;
    f.e[0][p] = 0.5 * (U + s * vs);
    f.e[1][p] = (U - s * vs) / cplx(0.0, 2.0);
  }
  return f;
}

Factors factors_at(const SqueezingProfile& p, double q) {
  const auto uq = solve_uv(p, q);
  const auto umq = solve_uv(p, -q);
  return factors(uq.U, umq.V);
}

// Re(e_{sigma,p} e_{tau,p'}^*)
double kernel(const Factors& f, int sigma, int p, int tau, int pp) {
  return std::real(f.e[sigma][p] * std::conj(f.e[tau][pp]));
}

double bracket(double r, double theta, bool plus) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double a = std::exp(2.0 * r), b = std::exp(-2.0 * r);
  return plus ? a * c * c + b * s * s : b * c * c + a * s * s;
}

struct Range {
  double Q;
  bool settled;  // bracket constant beyond Q
  std::vector<double> breaks;
};

Range integration_range(const ProlateBasis& basis, const SqueezingProfile& profile,
                        const IntegrationOptions& opt) {
  const double c = basis.c();
  const FarField ff = profile.far_field();
  Range rg;
  rg.settled = ff.theta_constant;
  rg.Q = std::max(opt.q_max_factor * c, ff.start);
  if (!(rg.Q > 0.0)) throw DomainError("integration range must be positive");
  if (rg.Q / c > basis.validity_bound() * (1.0 + 1e-12)) {
    const int need = static_cast<int>(std::ceil(rg.Q)) + 1;
    throw DomainError("integration range |q| <= " + std::to_string(rg.Q) +
                      " exceeds the basis validity bound " +
                      std::to_string(basis.validity_bound() * c) + " in q; rebuild with M >= " +
                      std::to_string(need));
  }
  for (double b : profile.breakpoints())
    if (std::abs(b) < rg.Q) rg.breaks.push_back(b);
  rg.breaks.push_back(0.0);
  std::sort(rg.breaks.begin(), rg.breaks.end());
  rg.breaks.erase(std::unique(rg.breaks.begin(), rg.breaks.end()), rg.breaks.end());
  return rg;
}

// Fraction of psi_k^2 energy outside |q| <= Q (from its integral inside).
void check_truncation(double inside_over_c, double Q, const IntegrationOptions& opt,
                      std::vector<int> modes) {
  const double outside = std::max(0.0, 1.0 - inside_over_c);
  if (outside > opt.truncation_tol) {
    // Tails of band-limited functions fall off like 1/q, so energy ~ 1/Q.
    const double suggestion = Q * outside / opt.truncation_tol;
    std::ostringstream os;
    os << "dispersive squeezing never settles and " << outside
       << " of the mode energy lies beyond |q| = " << Q << "; suggested Q >= " << suggestion;
    throw TruncationError(os.str(), outside, suggestion, std::move(modes));
  }
}

quad::Options quad_options(const IntegrationOptions& opt) {
  quad::Options o;
  o.abs_tol = opt.abs_tol;
  o.rel_tol = 1e-12;
  return o;
}

}  // namespace

std::string_view to_string(ProfileFamily f) noexcept {
  switch (f) {
    case ProfileFamily::vacuum: return "vacuum";
    case ProfileFamily::constant_band: return "constant_band";
    case ProfileFamily::gaussian: return "gaussian";
    case ProfileFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

SqueezingProfile SqueezingProfile::vacuum() { return SqueezingProfile{}; }

SqueezingProfile SqueezingProfile::constant_band(double r0, double q_c, double theta0,
                                                 double beta, double phi0) {
  check_r0(r0);
  check_param(q_c > 0.0 && !std::isnan(q_c), "constant_band cutoff q_c must be > 0");
  check_param(std::isfinite(theta0) && std::isfinite(beta) && std::isfinite(phi0),
              "phases must be finite");
  SqueezingProfile p;
  p.family_ = ProfileFamily::constant_band;
  p.r0_ = r0;
  p.q_c_ = q_c;
  p.theta0_ = theta0;
  p.beta_ = beta;
  p.phi0_ = phi0;
  return p;
}

SqueezingProfile SqueezingProfile::gaussian(double r0, double q_c, double theta0, double beta,
                                            double phi0) {
  check_r0(r0);
  check_param(std::isfinite(q_c) && q_c > 0.0, "gaussian width q_c must be finite and > 0");
  check_param(std::isfinite(theta0) && std::isfinite(beta) && std::isfinite(phi0),
              "phases must be finite");
  SqueezingProfile p;
  p.family_ = ProfileFamily::gaussian;
  p.r0_ = r0;
  p.q_c_ = q_c;
  p.theta0_ = theta0;
  p.beta_ = beta;
  p.phi0_ = phi0;
  return p;
}

SqueezingProfile SqueezingProfile::tabulated(ProfileTable table) {
  const auto n = table.q.size();
  check_param(n >= 1, "table is empty");
  check_param(table.r.size() == n && table.theta.size() == n && table.phi.size() == n,
              "table columns differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    check_param(std::isfinite(table.q[i]) && std::isfinite(table.theta[i]) &&
                    std::isfinite(table.phi[i]),
                "table entries must be finite");
    check_r0(table.r[i]);
    if (i > 0) check_param(table.q[i] > table.q[i - 1], "table q must be strictly increasing");
  }
  SqueezingProfile p;
  p.family_ = ProfileFamily::tabulated;
  p.table_ = std::move(table);
  return p;
}

double SqueezingProfile::interp(const std::vector<double>& xs, const std::vector<double>& ys,
                                double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

// Tables starting at q >= 0 describe the half line and are mirrored.
double SqueezingProfile::table_arg(double q) const {
  return table_.q.front() >= 0.0 ? std::abs(q) : q;
}

double SqueezingProfile::r(double q) const {
  switch (family_) {
    case ProfileFamily::vacuum: return 0.0;
    case ProfileFamily::constant_band: return std::abs(q) <= q_c_ ? r0_ : 0.0;
    case ProfileFamily::gaussian: return r0_ * std::exp(-q * q / (2.0 * q_c_ * q_c_));
    case ProfileFamily::tabulated: return interp(table_.q, table_.r, table_arg(q));
  }
  return 0.0;
}

double SqueezingProfile::theta(double q) const {
  if (family_ == ProfileFamily::tabulated) return interp(table_.q, table_.theta, table_arg(q));
  return theta0_ + beta_ * q * q;
}

double SqueezingProfile::phi(double q) const {
  if (family_ == ProfileFamily::tabulated) return interp(table_.q, table_.phi, table_arg(q));
  return phi0_;
}

double SqueezingProfile::max_r() const {
  if (family_ == ProfileFamily::tabulated)
    return *std::max_element(table_.r.begin(), table_.r.end());
  return r0_;
}

FarField SqueezingProfile::far_field() const {
  FarField ff;
  switch (family_) {
    case ProfileFamily::vacuum: break;
    case ProfileFamily::constant_band:
      if (std::isinf(q_c_)) {
        ff.r = r0_;
        ff.theta = theta0_;
        ff.theta_constant = beta_ == 0.0 || r0_ == 0.0;
      } else {
        ff.start = q_c_;
      }
      break;
    case ProfileFamily::gaussian:
      if (r0_ > kSettledR) ff.start = q_c_ * std::sqrt(2.0 * std::log(r0_ / kSettledR));
      break;
    case ProfileFamily::tabulated: {
      const bool half = table_.q.front() >= 0.0;
      ff.start = half ? table_.q.back() : std::max(-table_.q.front(), table_.q.back());
      ff.r = table_.r.back();
      ff.theta = table_.theta.back();
      break;
    }
  }
  return ff;
}

std::vector<double> SqueezingProfile::breakpoints() const {
  std::vector<double> b;
  switch (family_) {
    case ProfileFamily::constant_band:
      if (std::isfinite(q_c_)) b = {-q_c_, q_c_};
      break;
    case ProfileFamily::tabulated:
      for (double q : table_.q) {
        b.push_back(q);
        if (table_.q.front() >= 0.0 && q > 0.0) b.push_back(-q);
      }
      std::sort(b.begin(), b.end());
      break;
    default: break;
  }
  return b;
}

bool SqueezingProfile::is_even_at(double q, double tol) const {
  return std::abs(r(q) - r(-q)) <= tol && std::abs(theta(q) - theta(-q)) <= tol &&
         std::abs(phi(q) - phi(-q)) <= tol;
}

std::string SqueezingProfile::to_json() const {
  json j;
  j["family"] = std::string(to_string(family_));
  switch (family_) {
    case ProfileFamily::vacuum: break;
    case ProfileFamily::tabulated:
      j["q"] = table_.q;
      j["r"] = table_.r;
      j["theta"] = table_.theta;
      j["phi"] = table_.phi;
      break;
    default:
      j["r0"] = r0_;
      // Unbounded bands are written as null.
      if (std::isfinite(q_c_))
        j["q_c"] = q_c_;
      else
        j["q_c"] = nullptr;
      j["theta0"] = theta0_;
      j["beta"] = beta_;
      j["phi0"] = phi0_;
  }
  return j.dump();
}

SqueezingProfile SqueezingProfile::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("squeezing profile JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw DomainError("squeezing profile JSON: missing \"family\"");
  const std::string fam = j["family"];
  auto allow = [&](std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : j.items()) {
      if (key == "family") continue;
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw DomainError("squeezing profile JSON: unknown key \"" + key + "\" for " + fam);
    }
  };
  auto num = [&](const char* key, double def) {
    if (!j.contains(key)) return def;
    const auto& v = j[key];
    if (v.is_null()) return kInf;
    if (!v.is_number()) throw DomainError(std::string("squeezing profile JSON: ") + key +
                                          " must be a number");
    return v.get<double>();
  };
  try {
    if (fam == "vacuum") {
      allow({});
      return vacuum();
    }
    if (fam == "constant_band" || fam == "gaussian") {
      allow({"r0", "q_c", "theta0", "beta", "phi0"});
      if (!j.contains("r0") || !j.contains("q_c"))
        throw DomainError("squeezing profile JSON: " + fam + " needs r0 and q_c");
      const double r0 = num("r0", 0.0), qc = num("q_c", kInf);
      const double t0 = num("theta0", 0.0), beta = num("beta", 0.0), p0 = num("phi0", 0.0);
      return fam == "gaussian" ? gaussian(r0, qc, t0, beta, p0)
                               : constant_band(r0, qc, t0, beta, p0);
    }
    if (fam == "tabulated") {
      allow({"q", "r", "theta", "phi"});
      ProfileTable t;
      t.q = j.at("q").get<std::vector<double>>();
      t.r = j.at("r").get<std::vector<double>>();
      t.theta = j.contains("theta") ? j["theta"].get<std::vector<double>>()
                                    : std::vector<double>(t.q.size(), 0.0);
      t.phi = j.contains("phi") ? j["phi"].get<std::vector<double>>()
                                : std::vector<double>(t.q.size(), 0.0);
      return tabulated(std::move(t));
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("squeezing profile JSON: ") + e.what());
  }
  throw DomainError("squeezing profile JSON: unknown family \"" + fam + "\"");
}

UVCoefficients solve_uv(const SqueezingProfile& profile, double q) {
  if (!std::isfinite(q)) throw DomainError("solve_uv: q must be finite");
  if (!profile.is_even_at(q))
    throw DomainError("solve_uv: profile is not even at q = " + std::to_string(q) +
                      "; V(q) is under-determined");
  return uv_from(local(profile, q), local(profile, -q));
}

ModeVariance mode_variances(const ProlateBasis& basis, const SqueezingProfile& profile, int k,
                            const IntegrationOptions& opt) {
  if (k < 0 || k >= basis.size())
    throw DomainError("mode_variances: k = " + std::to_string(k) + " outside [0, " +
                      std::to_string(basis.size()) + ")");
  const double c = basis.c();
  const bool even = k % 2 == 0;
  const Range rg = integration_range(basis, profile, opt);
  const FarField ff = profile.far_field();

  // Far-field reference bracket; its integral against psi_k^2 is exactly c.
  double ref1, ref2;
  if (rg.settled) {
    ref1 = bracket(ff.r, ff.theta, even);
    ref2 = bracket(ff.r, ff.theta, !even);
  } else {
    ref1 = ref2 = std::cosh(2.0 * ff.r);
  }

  auto integrand = [&](double q, std::span<double> out) {
    const double psi = basis.eval_psi(k, q / c);
    const double p2 = psi * psi;
    const double r = profile.r(q), th = profile.theta(q);
    out[0] = p2 * (bracket(r, th, even) - ref1);
    out[1] = p2 * (bracket(r, th, !even) - ref2);
    out[2] = p2;
  };
  const auto res = quad::integrate(integrand, 3, -rg.Q, rg.Q, rg.breaks, quad_options(opt));
  if (!rg.settled) check_truncation(res.value[2] / c, rg.Q, opt, {k});
  return {(c * ref1 + res.value[0]) / (4.0 * c), (c * ref2 + res.value[1]) / (4.0 * c)};
}

std::vector<ModeVariance> mode_variance_table(const ProlateBasis& basis,
                                              const SqueezingProfile& profile,
                                              const IntegrationOptions& opt) {
  std::vector<ModeVariance> rows(static_cast<std::size_t>(basis.size()));
  parallel_for(rows.size(), [&](std::size_t k) {
    rows[k] = mode_variances(basis, profile, static_cast<int>(k), opt);
  });
  return rows;
}

ModeCovariance vacuum_covariance(int K, double c) {
  if (K < 1) throw DomainError("vacuum_covariance: K must be >= 1");
  ModeCovariance cov;
  cov.K = K;
  cov.c = c;
  cov.sigma = 0.25 * Eigen::MatrixXd::Identity(2 * K, 2 * K);
  cov.profile_descriptor = SqueezingProfile::vacuum().to_json();
  return cov;
}

ModeCovariance full_covariance(const ProlateBasis& basis, const SqueezingProfile& profile,
                               const IntegrationOptions& opt) {
  const int K = basis.size();
  const int D = 2 * K;
  const double c = basis.c();
  const Range rg = integration_range(basis, profile, opt);
  const FarField ff = profile.far_field();

  // Far-field reference kernels kref[sigma][p][tau][p'].
  double kref[2][2][2][2];
  {
    const int n_avg = rg.settled ? 1 : 64;
    for (auto& a : kref)
      for (auto& b : a)
        for (auto& cc : b)
          for (double& d : cc) d = 0.0;
    for (int i = 0; i < n_avg; ++i) {
      // Oscillating theta: average over one period of the phase.
      const double th = rg.settled ? ff.theta : std::numbers::pi * i / n_avg;
      const Local far{ff.r, th, profile.phi(rg.Q)};
      const auto uv = uv_from(far, far);
      const Factors f = factors(uv.U, uv.V);
      for (int s = 0; s < 2; ++s)
        for (int p = 0; p < 2; ++p)
          for (int t = 0; t < 2; ++t)
            for (int pp = 0; pp < 2; ++pp) kref[s][p][t][pp] += kernel(f, s, p, t, pp) / n_avg;
    }
  }

  std::vector<std::pair<int, int>> entries;
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) entries.emplace_back(a, b);
  const std::size_t n_e = entries.size();
  const std::size_t dim = n_e + static_cast<std::size_t>(K);  // + psi_k^2 for truncation

  auto integrand = [&](double q, std::span<double> out) {
    std::vector<double> psi(static_cast<std::size_t>(K));
    basis.eval_psi_all(q / c, psi);
    const Factors f = factors_at(profile, q);
    for (std::size_t e = 0; e < n_e; ++e) {
      const auto [a, b] = entries[e];
      const int j = a / 2, s = a % 2, k = b / 2, t = b % 2;
      const int pj = j % 2, pk = k % 2;
      out[e] = psi[j] * psi[k] * (kernel(f, s, pj, t, pk) - kref[s][pj][t][pk]);
    }
    for (int k = 0; k < K; ++k) out[n_e + k] = psi[k] * psi[k];
  };

  // Split the range into independent chunks (breakpoints always separate
  // chunks) and integrate them concurrently; sum in a fixed order.
  std::vector<double> cuts = rg.breaks;
  const int pieces = 2 * static_cast<int>(std::max(1u, thread_count()));
  for (int i = 0; i <= pieces; ++i) cuts.push_back(-rg.Q + 2.0 * rg.Q * i / pieces);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return std::abs(x - y) <= 1e-14 * rg.Q; }),
             cuts.end());
  const std::size_t n_chunks = cuts.size() - 1;
  quad::Options qo = quad_options(opt);
  qo.abs_tol = opt.abs_tol / static_cast<double>(n_chunks);
  std::vector<std::vector<double>> partial(n_chunks);
  parallel_for(n_chunks, [&](std::size_t i) {
    partial[i] = quad::integrate(integrand, dim, cuts[i], cuts[i + 1], {}, qo).value;
  });
  std::vector<double> total(dim, 0.0);
  for (const auto& p : partial)
    for (std::size_t e = 0; e < dim; ++e) total[e] += p[e];

  if (!rg.settled) {
    std::vector<int> bad;
    double worst = 0.0;
    for (int k = 0; k < K; ++k) {
      const double out = 1.0 - total[n_e + k] / c;
      if (out > opt.truncation_tol) bad.push_back(k);
      worst = std::max(worst, out);
    }
    if (!bad.empty()) check_truncation(1.0 - worst, rg.Q, opt, bad);
  }

  ModeCovariance cov;
  cov.K = K;
  cov.c = c;
  cov.profile_descriptor = profile.to_json();
  cov.sigma.resize(D, D);
  for (std::size_t e = 0; e < n_e; ++e) {
    const auto [a, b] = entries[e];
    const int j = a / 2, s = a % 2, k = b / 2, t = b % 2;
    double v = total[e] / c;
    if (j == k) v += kref[s][j % 2][t][k % 2];
    cov.sigma(a, b) = v;
    cov.sigma(b, a) = v;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.sigma, Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (!(min_ev > 0.0)) {
    Eigen::Index idx = 0;
    es.eigenvalues().minCoeff(&idx);
    std::ostringstream os;
    os << "assembled covariance is not positive definite; most negative eigenvalue " << min_ev;
    throw FactorizationError(os.str(), min_ev, static_cast<int>(idx));
  }
  return cov;
}

std::string ModeCovariance::to_json() const {
  json j;
  j["c"] = c;
  j["K"] = K;
  j["profile_descriptor"] = profile_descriptor.empty() ? json(nullptr)
                                                       : json::parse(profile_descriptor);
  json rows = json::array();
  for (Eigen::Index a = 0; a < sigma.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < sigma.cols(); ++b) row.push_back(sigma(a, b));
    rows.push_back(std::move(row));
  }
  j["sigma"] = std::move(rows);
  return j.dump(1);
}

ModeCovariance ModeCovariance::from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    ModeCovariance cov;
    cov.c = j.at("c").get<double>();
    cov.K = j.at("K").get<int>();
    const auto& pd = j.at("profile_descriptor");
    cov.profile_descriptor = pd.is_null() ? std::string{} : pd.dump();
    const auto& rows = j.at("sigma");
    const auto D = static_cast<std::size_t>(2 * cov.K);
    if (cov.K < 1 || rows.size() != D) throw DomainError("covariance JSON: sigma is not 2K x 2K");
    cov.sigma.resize(2 * cov.K, 2 * cov.K);
    for (std::size_t a = 0; a < D; ++a) {
      if (rows[a].size() != D) throw DomainError("covariance JSON: sigma is not 2K x 2K");
      for (std::size_t b = 0; b < D; ++b)
        cov.sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            rows[a][b].get<double>();
    }
    return cov;
  } catch (const json::exception& e) {
    throw DomainError(std::string("covariance JSON: ") + e.what());
  }
}

std::vector<ModeSqueezing> squeezing_report(const ModeCovariance& cov) {
  std::vector<ModeSqueezing> out;
  out.reserve(static_cast<std::size_t>(cov.K));
  for (int k = 0; k < cov.K; ++k) {
    const double a = cov.var1(k), d = cov.var2(k), b = cov.cov12(k);
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    ModeSqueezing m;
    m.k = k;
    m.parity = k % 2;
    m.min_var = mean - rad;
    m.max_var = mean + rad;
    // Var(t) = mean + rad cos(2t - atan2(2b, a - d)); minimum half a turn later.
    double t = 0.5 * std::atan2(2.0 * b, a - d) + 0.5 * std::numbers::pi;
    t = std::fmod(t, std::numbers::pi);
    if (t < 0.0) t += std::numbers::pi;
    m.angle = t;
    m.db = 10.0 * std::log10(m.min_var / 0.25);
    m.squeezed = m.min_var < 0.25 - 1e-12;
    out.push_back(m);
  }
  return out;
}

std::string variance_table_csv(const std::vector<ModeVariance>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "k,parity,var1,var2,min_dB\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double m = std::min(rows[k].var1, rows[k].var2);
    os << k << ',' << (k % 2 == 0 ? "even" : "odd") << ',' << rows[k].var1 << ','
       << rows[k].var2 << ',' << 10.0 * std::log10(m / 0.25) << '\n';
  }
  return os.str();
}

}  // namespace psq
