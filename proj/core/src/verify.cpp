#include "prolate_squeeze/verify.hpp"

#include "prolate_squeeze/budget.hpp"
#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/homodyne.hpp"
#include "prolate_squeeze/mode_algebra.hpp"
#include "prolate_squeeze/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace psq {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Lazily built shared inputs.
struct Ctx {
  explicit Ctx(const RunConfig& c) : cfg(c) {}

  const RunConfig& cfg;
  std::optional<ProlateBasis> ref;       // c = 2, K = 6, M = 64
  std::optional<ProlateBasis> ref_fine;  // c = 2, K = 6, M = 200
  std::optional<ProlateBasis> wide;      // c = 2 pi (S = 4), K = 10
  std::optional<ProlateBasis> run;       // from the config
  std::optional<SqueezingProfile> run_profile;
  std::optional<ModeCovariance> run_cov;

  const ProlateBasis& basis_ref() {
    if (!ref) ref = build_basis(BandParameter(2.0), 6, 64);
    return *ref;
  }
  const ProlateBasis& basis_fine() {
    if (!ref_fine) ref_fine = build_basis(BandParameter(2.0), 6, 200);
    return *ref_fine;
  }
  const ProlateBasis& basis_wide() {
    if (!wide) wide = build_basis(BandParameter(2.0 * pi), 10, 96);
    return *wide;
  }
  const ProlateBasis& basis_run() {
    if (!run) run = cfg.build_basis();
    return *run;
  }
  const SqueezingProfile& profile_run() {
    if (!run_profile) run_profile = cfg.resolve_profile();
    return *run_profile;
  }
  const ModeCovariance& cov_run() {
    if (!run_cov) run_cov = full_covariance(basis_run(), profile_run());
    return *run_cov;
  }
};

using CheckFn = std::function<void(Ctx&, CheckResult&)>;

struct Check {
  CheckInfo info;
  CheckFn fn;
};

SqueezingProfile flat(double r, double theta = 0.0) {
  return SqueezingProfile::constant_band(r, kInf, theta);
}

SqueezingProfile table_profile() {
  ProfileTable t;
  t.q = {0.0, 1.0, 2.5, 4.0, 6.0};
  t.r = {1.2, 1.0, 0.6, 0.2, 0.0};
  t.theta = {0.0, 0.05, 0.2, 0.3, 0.3};
  t.phi = {0.4, 0.4, 0.4, 0.4, 0.4};
  return SqueezingProfile::tabulated(t);
}

std::vector<SqueezingProfile> reference_families() {
  return {SqueezingProfile::vacuum(), SqueezingProfile::constant_band(1.0, 3.0, 0.2, 0.01, 0.7),
          SqueezingProfile::gaussian(1.0, 2.0, 0.1, 0.02, -0.3), table_profile()};
}

void set_max(CheckResult& r, double worst, double tol, const std::string& what) {
  r.passed = worst < tol;
  r.measured = what + " = " + fmt(worst);
  r.expected = "< " + fmt(tol);
}

double heisenberg_margin(const ModeCovariance& cov) {
  double worst = kInf;
  for (int k = 0; k < cov.K; ++k)
    worst = std::min(worst, cov.var1(k) * cov.var2(k) - cov.cov12(k) * cov.cov12(k) - 1.0 / 16.0);
  return worst;
}

// Largest |empirical - analytic| / SE over the diagonal.
double max_z_diagonal(const EmpiricalCovariance& e, const ModeCovariance& cov) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < cov.sigma.rows(); ++i)
    worst = std::max(worst, std::abs(e.sigma(i, i) - cov.sigma(i, i)) / e.se(i, i));
  return worst;
}

std::vector<Check> registry() {
  std::vector<Check> r;
  auto add = [&](std::string id, std::string desc, CheckFn fn, bool xfail = false) {
    r.push_back({{std::move(id), std::move(desc), xfail}, std::move(fn)});
  };

  // ---- acceptance criteria -------------------------------------------------

  add("AC-01", "vacuum profile gives variance 1/4 for every mode", [](Ctx& x, CheckResult& res) {
    double worst = 0.0;
    for (const ProlateBasis* b : {&x.basis_ref(), &x.basis_run()})
      for (const auto& v : mode_variance_table(*b, SqueezingProfile::vacuum()))
        worst = std::max({worst, std::abs(v.var1 - 0.25), std::abs(v.var2 - 0.25)});
    set_max(res, worst, 1e-9, "max |var - 1/4|");
  });

  add("AC-02", "constant squeezing gives e^{-+2r}/4 with the parity assignment, r in {0.5, 1, 2}",
      [](Ctx& x, CheckResult& res) {
        double worst = 0.0;
        for (double r : {0.5, 1.0, 2.0}) {
          const auto rows = mode_variance_table(x.basis_ref(), flat(r));
          for (std::size_t k = 0; k < rows.size(); ++k) {
            const double anti = std::exp(2 * r) / 4, sq = std::exp(-2 * r) / 4;
            const bool even = k % 2 == 0;
            worst = std::max({worst, std::abs(rows[k].var1 - (even ? anti : sq)),
                              std::abs(rows[k].var2 - (even ? sq : anti))});
          }
        }
        set_max(res, worst, 1e-7, "max |var - closed form|");
      });

  add("AC-03", "|U|^2 - |V|^2 = 1 at 1000 random q for each profile family",
      [](Ctx&, CheckResult& res) {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        double worst = 0.0;
        for (const auto& p : {SqueezingProfile::constant_band(1.5, 3.0, 0.3, 0.02, 0.5),
                              SqueezingProfile::gaussian(1.5, 2.0, 0.2, 0.05, -0.4),
                              table_profile()}) {
          for (int i = 0; i < 1000; ++i) {
            const auto uv = solve_uv(p, u(rng));
            worst = std::max(worst, std::abs(std::norm(uv.U) - std::norm(uv.V) - 1.0));
          }
        }
        set_max(res, worst, 1e-12, "max ||U|^2 - |V|^2 - 1|");
      });

  add("AC-04", "T phi_k = (-i)^k psi_k and T chi_k = (-i)^k theta_k, k <= 5, c = 2, |s| <= 3",
      [](Ctx& x, CheckResult& res) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto& b = x.basis_fine();
        double worst = 0.0;
        for (int k = 0; k <= 5; ++k) {
          const cplx phase = std::conj(i_pow(k));
          for (auto shape : {ModeShape::phi, ModeShape::chi}) {
            const PlaneField out = fourier_T(mode_field(b, k, shape, Plane::source), b.band());
            const auto xs = out.coords();
            const auto vs = out.values();
            for (std::size_t i = 0; i < xs.size(); ++i) {
              const double s = xs[i];
              if (std::abs(s) > 3.0) continue;
              // theta_k jumps at |s| = 1, where the transform takes the mean.
              if (shape == ModeShape::chi && std::abs(std::abs(s) - 1.0) < 1e-12) continue;
              const double ref = shape == ModeShape::phi ? b.eval_psi(k, s) : b.eval_theta(k, s);
              worst = std::max(worst, std::abs(vs[i] - phase * ref));
            }
          }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.passed = worst < 1e-6 && secs < 60.0;
        res.measured = "max pointwise error = " + fmt(worst) + " in " + fmt(secs) + " s";
        res.expected = "< 1e-06 in < 60 s";
      });

  add("AC-05", "finite-Fourier relation residual at 50 points, k <= 5, c = 2",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_fine();
        const double c = b.c();
        const quad::Rule rule = quad::gauss_legendre(400);
        double worst = 0.0;
        for (int k = 0; k <= 5; ++k) {
          std::vector<double> psi(rule.size());
          for (std::size_t i = 0; i < rule.size(); ++i) psi[i] = b.eval_psi(k, rule.nodes[i]);
          const cplx phase = std::conj(i_pow(k));
          for (int n = 0; n < 50; ++n) {
            const double q = -3.0 * c + 6.0 * c * n / 49.0;
            cplx lhs = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i)
              lhs += rule.weights[i] * psi[i] * std::polar(1.0, -q * rule.nodes[i]);
            const cplx rhs = phase * std::sqrt(2 * pi * b.lambda(k) / c) * b.eval_psi(k, q / c);
            worst = std::max(worst, std::abs(lhs - rhs));
          }
        }
        set_max(res, worst, 1e-7, "max residual");
      });

  add("AC-06", "sum of eigenvalues is 2c/pi and the spectrum plunges at k = S for S in {4, 8}",
      [](Ctx&, CheckResult& res) {
        double worst = 0.0;
        for (double c : {2.0, 2.0 * pi, 4.0 * pi}) {
          double sum = 0.0;
          for (double l : nystrom_spectrum(BandParameter(c), 200)) sum += l;
          worst = std::max(worst, std::abs(sum - 2 * c / pi));
        }
        bool plunge = true;
        std::string where;
        for (int S : {4, 8}) {
          const ProlateBasis b = build_basis(BandParameter(pi * S / 2.0), S + 4, 200);
          for (int k = 0; k <= S - 2; ++k) plunge = plunge && b.lambda(k) >= 0.5;
          for (int k = S + 1; k < b.size(); ++k) plunge = plunge && b.lambda(k) <= 0.5;
          where += " S=" + std::to_string(S) + ": lambda_{S-2}=" + fmt(b.lambda(S - 2)) +
                   " lambda_{S+1}=" + fmt(b.lambda(S + 1)) + ";";
        }
        res.passed = worst < 1e-8 && plunge;
        res.measured = "max |trace - 2c/pi| = " + fmt(worst) + ";" + where;
        res.expected = "< 1e-08; lambda_k >= 1/2 for k <= S-2, <= 1/2 for k >= S+1";
      });

  add("AC-07", "diaphragm d_s/d in {1, 1.5, 3} leaves core coefficients bit-identical",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_fine();
        const PlaneField f = mode_field(b, 0, ModeShape::psi, Plane::source) +
                             cplx(0.2, 0.7) * mode_field(b, 3, ModeShape::chi, Plane::source) +
                             cplx(-0.4, 0.1) * mode_field(b, 2, ModeShape::phi, Plane::source);
        const ModeCoefficients ref = project_core_wings(f, b);
        int differing = 0;
        for (double rho : {1.0, 1.5, 3.0}) {
          const ModeCoefficients m = project_core_wings(apply_diaphragm(f, DiaphragmSpec(rho)), b);
          for (int k = 0; k < b.size(); ++k) differing += m.c_core[k] != ref.c_core[k];
        }
        res.passed = differing == 0;
        res.measured = std::to_string(differing) + " differing coefficients";
        res.expected = "0";
      });

  add("AC-08", "diagonal of the full covariance matches the variance integrals (every family)",
      [](Ctx& x, CheckResult& res) {
        double worst = 0.0;
        auto compare = [&](const ProlateBasis& b, const SqueezingProfile& p) {
          const auto cov = full_covariance(b, p);
          const auto rows = mode_variance_table(b, p);
          for (int k = 0; k < b.size(); ++k)
            worst = std::max({worst, std::abs(cov.var1(k) - rows[k].var1),
                              std::abs(cov.var2(k) - rows[k].var2)});
        };
        for (const auto& p : reference_families()) compare(x.basis_ref(), p);
        compare(x.basis_run(), x.profile_run());
        set_max(res, worst, 1e-8, "max |diag - variance|");
      });

  add("AC-09", "uncertainty product >= 1/16 for 20 randomized profiles",
      [](Ctx& x, CheckResult& res) {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = kInf;
        for (int t = 0; t < 20; ++t) {
          const double r0 = 2.0 * u(rng), qc = 0.5 + 4.0 * u(rng), th = pi * u(rng);
          const double beta = 0.05 * u(rng), ph = u(rng);
          SqueezingProfile p = SqueezingProfile::vacuum();
          if (t % 3 == 0) {
            p = SqueezingProfile::gaussian(r0, qc, th, beta, ph);
          } else if (t % 3 == 1) {
            p = SqueezingProfile::constant_band(r0, qc, th, beta, ph);
          } else {
            ProfileTable tab;
            for (int i = 0; i <= 6; ++i) {
              tab.q.push_back(qc * i / 3.0);
              tab.r.push_back(i == 6 ? 0.0 : r0 * u(rng));
              tab.theta.push_back(th + 0.3 * u(rng));
              tab.phi.push_back(ph);
            }
            p = SqueezingProfile::tabulated(tab);
          }
          worst = std::min(worst, heisenberg_margin(full_covariance(x.basis_ref(), p)));
        }
        res.passed = worst >= -1e-10;
        res.measured = "min (var1 var2 - cov^2 - 1/16) = " + fmt(worst);
        res.expected = ">= -1e-10";
      });

  add("AC-10", "1e5 Monte-Carlo draws reproduce every analytic variance within 5 SE; seeds are reproducible",
      [](Ctx& x, CheckResult& res) {
        double worst = 0.0;
        bool same = true;
        for (const auto& p : {flat(1.0), SqueezingProfile::gaussian(0.8, 1.5, 0.4, 0.05)}) {
          const auto cov = full_covariance(x.basis_ref(), p);
          const auto a = sample(cov, {}, 100000, 20240917);
          worst = std::max(worst, max_z_diagonal(empirical_covariance(a), cov));
          const auto b = sample(cov, {}, 100000, 20240917);
          same = same && (a.draws.array() == b.draws.array()).all();
        }
        res.passed = worst < 5.0 && same;
        res.measured = "max |z| = " + fmt(worst) + (same ? ", batches identical" : ", batches differ");
        res.expected = "< 5, identical";
      });

  add("AC-11", "N/S = q_c/c, q_c = c gives N = S, verdict monotone in q_c",
      [](Ctx&, CheckResult& res) {
        const ImagingConfig im{2e-3, 2e-3, 5e-3, 0.5e-6, 0.1};
        const double c = band_parameter(im);
        double worst = 0.0;
        int last = -1;
        bool monotone = true;
        for (double f = 0.01; f < 40.0; f *= 1.13) {
          const auto b = budget_for_band(im, f * c);
          worst = std::max(worst, std::abs(b.N / b.S - b.q_c / b.c) / b.margin);
          monotone = monotone && static_cast<int>(b.verdict) >= last;
          last = static_cast<int>(b.verdict);
        }
        const auto edge = budget_for_band(im, c);
        res.passed = worst < 1e-12 && edge.N == edge.S && edge.verdict == Verdict::marginal && monotone;
        res.measured = "max rel |N/S - q_c/c| = " + fmt(worst) + ", q_c=c: N-S = " +
                       fmt(edge.N - edge.S) + " " + std::string(to_string(edge.verdict)) +
                       (monotone ? ", monotone" : ", not monotone");
        res.expected = "< 1e-12, 0 marginal, monotone";
      });

  add("AC-12", "squeezing band c/2 degrades mode 0 against 3c; modes k > S revert toward 1/4",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_wide();
        const double c = b.c(), S = b.band().shannon_number();
        const auto narrow = overlap_table(b, SqueezingProfile::constant_band(1.0, c / 2), c / 2);
        const auto broad = overlap_table(b, SqueezingProfile::constant_band(1.0, 3 * c), 3 * c);
        const double d0 = 0.25 - narrow[0].min_var;
        bool revert = true;
        double prev = kInf, largest = 0.0;
        for (const auto& row : narrow) {
          if (row.k <= S) continue;
          const double d = 0.25 - row.min_var;
          revert = revert && d < 0.25 * d0 && d <= prev + 1e-15;
          prev = d;
          largest = std::max(largest, d);
        }
        res.passed = narrow[0].min_var > broad[0].min_var && revert;
        res.measured = "mode 0: " + fmt(narrow[0].min_var) + " (c/2) vs " + fmt(broad[0].min_var) +
                       " (3c); largest deficit for k > S = " + fmt(largest) +
                       " vs mode-0 deficit " + fmt(d0);
        res.expected = "c/2 > 3c; deficits for k > S non-increasing and < 1/4 of mode 0";
      });

  // ---- pswf_core -----------------------------------------------------------

  add("PSWF-01", "(config) core samples are orthonormal", [](Ctx& x, CheckResult& res) {
    const auto& b = x.basis_run();
    const auto& rule = b.rule();
    double worst = 0.0;
    for (int j = 0; j < b.size(); ++j)
      for (int k = j; k < b.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
          acc += rule.weights[i] * b.core_samples(j)[i] * b.core_samples(k)[i];
        worst = std::max(worst, std::abs(acc - (j == k ? 1.0 : 0.0)));
      }
    set_max(res, worst, 1e-10, "max |G - I|");
  });

  add("PSWF-02", "(config) eigenvalues in (0, 1), strictly decreasing, phi_k(1) > 0",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_run();
        bool ok = true;
        for (int k = 0; k < b.size(); ++k) {
          ok = ok && b.lambda(k) > 0.0 && b.lambda(k) < 1.0 + 1e-12 && b.eval_phi(k, 1.0) > 0.0;
          if (k > 0) ok = ok && b.lambda(k) < b.lambda(k - 1);
        }
        res.passed = ok;
        res.measured = "lambda_0 = " + fmt(b.lambda(0)) + ", lambda_{K-1} = " +
                       fmt(b.lambda(b.size() - 1));
        res.expected = "ordered spectrum in (0, 1)";
      });

  add("PSWF-03", "(config) psi_k(-s) = (-1)^k psi_k(s)", [](Ctx& x, CheckResult& res) {
    const auto& b = x.basis_run();
    double worst = 0.0;
    for (int k = 0; k < b.size(); ++k)
      for (double s : {0.1, 0.5, 0.99, 1.7, 3.2}) {
        const double sign = k % 2 ? -1.0 : 1.0;
        worst = std::max(worst, std::abs(b.eval_psi(k, -s) - sign * b.eval_psi(k, s)));
      }
    set_max(res, worst, 1e-12, "max parity defect");
  });

  add("PSWF-04", "(config) eigenvalues stable under doubling the quadrature order",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_run();
        const auto fine = nystrom_spectrum(b.band(), 2 * b.order());
        double worst = 0.0;
        for (int k = 0; k < b.size(); ++k) worst = std::max(worst, std::abs(fine[k] - b.lambda(k)));
        set_max(res, worst, 1e-10, "max |lambda(M) - lambda(2M)|");
      });

  // ---- mode_algebra --------------------------------------------------------

  add("MODE-01", "lens transform preserves the norm of a contained field",
      [](Ctx& x, CheckResult& res) {
        const PlaneField g = PlaneField::sample(Plane::source, 8.0, 1.0 / 64.0, [](double s, Region) {
          return cplx(std::exp(-0.5 * s * s), 0.3 * s * std::exp(-0.5 * s * s));
        });
        const PlaneField out = fourier_T(g, x.basis_fine().band());
        set_max(res, std::abs(out.norm_squared() / g.norm_squared() - 1.0), 1e-8,
                "|ratio - 1|");
      });

  add("MODE-02", "prolates are orthonormal on the real line (core + wing projections)",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_fine();
        double worst = 0.0;
        for (int j = 0; j < b.size(); ++j) {
          const auto a = prolate_coefficients(
              project_core_wings(mode_field(b, j, ModeShape::psi, Plane::object), b), b);
          for (int k = 0; k < b.size(); ++k) worst = std::max(worst, std::abs(a[k] - cplx(j == k)));
        }
        set_max(res, worst, 1e-7, "max |<psi_j, psi_k> - delta|");
      });

  add("MODE-03", "synthesized object field projects back onto its amplitudes",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_fine();
        const std::vector<cplx> a{cplx(0.3, -0.1), 1.2, cplx(0.0, 0.8), -0.5, cplx(0.25, 0.25), 0.1};
        const auto back = prolate_coefficients(project_core_wings(synthesize_object_field(a, b), b), b);
        double worst = 0.0;
        for (int k = 0; k < b.size(); ++k) worst = std::max(worst, std::abs(back[k] - a[k]));
        set_max(res, worst, 1e-8, "max |a' - a|");
      });

  // ---- squeeze_model -------------------------------------------------------

  add("SQZ-01", "(config) vacuum covariance is I/4", [](Ctx& x, CheckResult& res) {
    const auto cov = full_covariance(x.basis_run(), SqueezingProfile::vacuum());
    const auto D = cov.sigma.rows();
    set_max(res, (cov.sigma - 0.25 * Eigen::MatrixXd::Identity(D, D)).cwiseAbs().maxCoeff(), 1e-9,
            "max |Sigma - I/4|");
  });

  add("SQZ-02", "constant r, theta: distinct modes are uncorrelated", [](Ctx& x, CheckResult& res) {
    const auto cov = full_covariance(x.basis_ref(), flat(0.8, 0.4));
    double worst = 0.0;
    for (int j = 0; j < cov.K; ++j)
      for (int k = 0; k < cov.K; ++k)
        if (j != k) worst = std::max(worst, cov.sigma.block(2 * j, 2 * k, 2, 2).cwiseAbs().maxCoeff());
    set_max(res, worst, 1e-8, "max off-diagonal block entry");
  });

  add("SQZ-03", "larger constant r lowers the squeezed and raises the anti-squeezed variance",
      [](Ctx& x, CheckResult& res) {
        bool ok = true;
        for (int k : {0, 1}) {
          double sq = 0.25, anti = 0.25;
          for (double r : {0.25, 0.5, 1.0, 1.5, 2.5}) {
            const auto v = mode_variances(x.basis_ref(), flat(r), k);
            const double s = std::min(v.var1, v.var2), a = std::max(v.var1, v.var2);
            ok = ok && s < sq && a > anti;
            sq = s;
            anti = a;
          }
        }
        res.passed = ok;
        res.measured = ok ? "strictly monotone" : "not monotone";
        res.expected = "strictly monotone";
      });

  add("SQZ-04", "wider squeezing band never raises a mode's minimum variance",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_ref();
        std::vector<double> prev(static_cast<std::size_t>(b.size()), 0.25);
        double worst = -kInf;
        for (double f : {0.25, 0.5, 1.0, 2.0, 3.0}) {
          const auto rows = mode_variance_table(b, SqueezingProfile::constant_band(1.0, f * b.c()));
          for (std::size_t k = 0; k < rows.size(); ++k) {
            const double m = std::min(rows[k].var1, rows[k].var2);
            worst = std::max(worst, m - prev[k]);
            prev[k] = m;
          }
        }
        res.passed = worst <= 1e-12;
        res.measured = "max increase = " + fmt(worst);
        res.expected = "<= 1e-12";
      });

  add("SQZ-05", "input phase phi(q) does not change the covariance", [](Ctx& x, CheckResult& res) {
    const auto a = full_covariance(x.basis_ref(), SqueezingProfile::gaussian(1.0, 2.0, 0.3, 0.05, 0.0));
    const auto b = full_covariance(x.basis_ref(), SqueezingProfile::gaussian(1.0, 2.0, 0.3, 0.05, 1.9));
    set_max(res, (a.sigma - b.sigma).cwiseAbs().maxCoeff(), 1e-12, "max |Sigma(phi) - Sigma(0)|");
  });

  add("SQZ-06", "(config) covariance symmetric, positive definite, uncertainty bound",
      [](Ctx& x, CheckResult& res) {
        const auto& cov = x.cov_run();
        const double asym = (cov.sigma - cov.sigma.transpose()).cwiseAbs().maxCoeff();
        const double h = heisenberg_margin(cov);
        res.passed = asym == 0.0 && h >= -1e-10;
        res.measured = "asymmetry " + fmt(asym) + ", min uncertainty margin " + fmt(h);
        res.expected = "0, >= -1e-10";
      });

  add("SQZ-07", "(config) |U|^2 - |V|^2 = 1 at 1000 random q", [](Ctx& x, CheckResult& res) {
    const auto& p = x.profile_run();
    std::mt19937_64 rng(17);
    const double span = std::max(4.0 * x.cfg.c(), p.far_field().start + 1.0);
    std::uniform_real_distribution<double> u(-span, span);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto uv = solve_uv(p, u(rng));
      // Rounding of cosh^2 - sinh^2 grows with e^{2r}.
      worst = std::max(worst, std::abs(std::norm(uv.U) - std::norm(uv.V) - 1.0) /
                                  std::max(1.0, std::norm(uv.U)));
    }
    set_max(res, worst, 1e-12, "max relative unitarity defect");
  });

  // ---- photon_budget -------------------------------------------------------

  add("BUD-01", "(config) budget margin equals N/S and matches the verdict",
      [](Ctx& x, CheckResult& res) {
        const auto b = budget(x.cfg.imaging, x.profile_run(), x.cfg.band_threshold);
        const bool finite = std::isfinite(b.margin);
        const double err = finite && b.S > 0 ? std::abs(b.N / b.S - b.margin) / std::max(1.0, b.margin) : 0.0;
        const Verdict want = b.margin < 1.0 ? Verdict::insufficient
                             : b.margin < kSufficientMargin ? Verdict::marginal
                                                            : Verdict::sufficient;
        res.passed = err < 1e-12 && b.verdict == want &&
                     std::abs(coherence_bound(x.cfg.imaging) - x.cfg.imaging.d / b.S) <=
                         1e-12 * coherence_bound(x.cfg.imaging);
        res.measured = "q_c = " + fmt(b.q_c) + ", N/S = " + fmt(b.margin) + ", " +
                       std::string(to_string(b.verdict));
        res.expected = "N/S = q_c/c to 1e-12, consistent verdict, l_c bound = d/S";
      });

  add("BUD-02", "effective band recovers constant cutoffs and the gaussian half maximum",
      [](Ctx&, CheckResult& res) {
        double worst = 0.0;
        for (double q0 : {0.3, 2.0, 17.5})
          worst = std::max(worst, std::abs(effective_band(SqueezingProfile::constant_band(1.2, q0)).q_c - q0));
        for (double s : {0.5, 3.0})
          worst = std::max(worst, std::abs(effective_band(SqueezingProfile::gaussian(1.0, s)).q_c -
                                           s * std::sqrt(2 * std::log(2.0))));
        set_max(res, worst, 1e-9, "max |q_c - oracle|");
      });

  add("BUD-03", "modes with band overlap below 10% keep minimum variance above 0.2",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_wide();
        double lowest = kInf;
        int n = 0;
        for (double f : {0.1, 0.25, 0.5, 1.0})
          for (const auto& row : overlap_table(b, SqueezingProfile::constant_band(1.0, f * b.c()), f * b.c()))
            if (row.overlap < 0.1) {
              ++n;
              lowest = std::min(lowest, row.min_var);
            }
        res.passed = n > 0 && lowest > 0.2;
        res.measured = std::to_string(n) + " low-overlap modes, lowest min variance " + fmt(lowest);
        res.expected = "> 0.2";
      });

  add("BUD-04", "squeezing band 3c brings modes k <= S within 5% of e^{-2r}/4",
      [](Ctx& x, CheckResult& res) {
        const auto& b = x.basis_wide();
        const double c = b.c(), S = b.band().shannon_number(), ideal = std::exp(-2.0) / 4;
        double worst = 0.0;
        int at = -1;
        for (const auto& row : overlap_table(b, SqueezingProfile::constant_band(1.0, 3 * c), 3 * c)) {
          if (row.k > S) continue;
          const double dev = std::abs(row.min_var / ideal - 1.0);
          if (dev > worst) {
            worst = dev;
            at = row.k;
          }
        }
        res.passed = worst <= 0.05;
        res.measured = "max relative deviation " + fmt(worst) + " at k = " + std::to_string(at);
        res.expected = "<= 0.05 (prolate tails beyond |q| = 3c prevent this)";
      },
      true);

  // ---- mc_homodyne ---------------------------------------------------------

  add("MC-01", "(config) sampled state: variances within 5 SE, whitened draws pass chi-square",
      [](Ctx& x, CheckResult& res) {
        const auto& cov = x.cov_run();
        const auto batch = sample(cov, {}, x.cfg.mc_n, x.cfg.seed);
        const double z = max_z_diagonal(empirical_covariance(batch), cov);
        const auto w = whiteness_test(batch, cov);
        res.passed = z < 5.0 && w.passed;
        res.measured = "max |z| = " + fmt(z) + ", whiteness p = " + fmt(w.p_value);
        res.expected = "< 5, p >= 0.001";
      });

  add("MC-02", "(config) classical displacement shifts the mean only", [](Ctx& x, CheckResult& res) {
    const auto& cov = x.cov_run();
    const double amp = x.cfg.classical_amplitude != 0.0 ? x.cfg.classical_amplitude : 1.0;
    const auto d = classical_wave_displacement(cov, amp, x.cfg.classical_phase);
    const std::size_t n = std::min<std::size_t>(x.cfg.mc_n, 100000);
    const auto plain = empirical_covariance(sample(cov, {}, n, x.cfg.seed));
    const auto shifted = empirical_covariance(sample(cov, d, n, x.cfg.seed));
    double zmean = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      zmean = std::max(zmean, std::abs(shifted.mean(i) - d(i)) /
                                  std::sqrt(shifted.sigma(i, i) / static_cast<double>(n)));
    const double dcov = (shifted.sigma - plain.sigma).cwiseAbs().maxCoeff();
    res.passed = zmean < 5.0 && dcov < 1e-10;
    res.measured = "max mean |z| = " + fmt(zmean) + ", max covariance change " + fmt(dcov);
    res.expected = "< 5, < 1e-10";
  });

  add("MC-03", "(config) identical seeds give bit-identical batches", [](Ctx& x, CheckResult& res) {
    const std::size_t n = std::min<std::size_t>(x.cfg.mc_n, 50000);
    const auto a = sample(x.cov_run(), {}, n, x.cfg.seed);
    const auto b = sample(x.cov_run(), {}, n, x.cfg.seed);
    res.passed = (a.draws.array() == b.draws.array()).all();
    res.measured = res.passed ? "identical" : "different";
    res.expected = "identical";
  });

  // ---- configuration -------------------------------------------------------

  add("CFG-01", "(config) configuration survives a write/read round trip",
      [](Ctx& x, CheckResult& res) {
        const RunConfig back = RunConfig::parse(x.cfg.to_json(), x.cfg.base_dir);
        res.passed = back == x.cfg && back.to_json() == x.cfg.to_json();
        res.measured = res.passed ? "lossless" : "differs";
        res.expected = "lossless";
      });

  return r;
}

}  // namespace

std::string CheckResult::status() const {
  if (expected_failure) return passed ? "XPASS" : "XFAIL";
  return passed ? "PASS" : "FAIL";
}

bool VerifyReport::all_ok() const {
  for (const auto& c : checks)
    if (!c.ok()) return false;
  return true;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  int pass = 0, fail = 0, xfail = 0;
  for (const auto& c : checks) {
    char head[32];
    std::snprintf(head, sizeof head, "%-5s %-8s ", c.status().c_str(), c.id.c_str());
    os << head << c.description << "\n      measured: " << c.measured
       << " | expected: " << c.expected << '\n';
    if (c.expected_failure)
      ++xfail;
    else if (c.passed)
      ++pass;
    else
      ++fail;
  }
  os << pass << " passed, " << fail << " failed, " << xfail << " expected failures\n";
  return os.str();
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j.push_back({{"id", c.id},
                 {"status", c.status()},
                 {"description", c.description},
                 {"measured", c.measured},
                 {"expected", c.expected},
                 {"seconds", c.seconds}});
  return j.dump(2);
}

std::vector<CheckInfo> list_checks() {
  std::vector<CheckInfo> out;
  for (const auto& c : registry()) out.push_back(c.info);
  return out;
}

VerifyReport run_verification(const RunConfig& cfg, const std::string& prefix) {
  Ctx ctx(cfg);
  VerifyReport rep;
  for (const auto& c : registry()) {
    if (c.info.id.rfind(prefix, 0) != 0) continue;
    CheckResult res;
    res.id = c.info.id;
    res.description = c.info.description;
    res.expected_failure = c.info.expected_failure;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(ctx, res);
    } catch (const std::exception& e) {
      res.passed = false;
      res.measured = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.checks.push_back(std::move(res));
  }
  return rep;
}

}  // namespace psq
