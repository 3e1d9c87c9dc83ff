// Acceptance run: one line per criterion, nonzero exit if any fails.
// Written against the public API with its own reference computations; it
// does not reuse the library's verify registry.
#include "prolate_squeeze/budget.hpp"
#include "prolate_squeeze/homodyne.hpp"
#include "prolate_squeeze/mode_algebra.hpp"
#include "prolate_squeeze/pswf.hpp"
#include "prolate_squeeze/squeeze.hpp"

#include "legendre_oracle.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

namespace {

using namespace psq;
using std::numbers::pi;
using cplx = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

SqueezingProfile flat(double r, double th = 0.0) { return SqueezingProfile::constant_band(r, kInf, th); }

const ProlateBasis& basis_c2() {
  static const ProlateBasis b = build_basis(BandParameter(2.0), 6, 200);
  return b;
}

std::vector<SqueezingProfile> families() {
  ProfileTable t;
  t.q = {0.0, 0.8, 2.0, 3.5, 5.0};
  t.r = {1.0, 0.9, 0.5, 0.1, 0.0};
  t.theta = {0.1, 0.1, 0.25, 0.4, 0.4};
  t.phi = {-0.2, -0.2, -0.2, -0.2, -0.2};
  return {SqueezingProfile::constant_band(1.3, 2.5, 0.35, 0.02, 0.6),
          SqueezingProfile::gaussian(1.3, 1.7, 0.15, 0.03, 1.1), SqueezingProfile::tabulated(t)};
}

Outcome vacuum_baseline() {
  double worst = 0.0;
  for (double c : {2.0, 2.0 * pi}) {
    const auto b = build_basis(BandParameter(c), 8, 64);
    for (int k = 0; k < b.size(); ++k) {
      const auto v = mode_variances(b, SqueezingProfile::vacuum(), k);
      worst = std::max({worst, std::abs(v.var1 - 0.25), std::abs(v.var2 - 0.25)});
    }
    const auto cov = full_covariance(b, SqueezingProfile::vacuum());
    for (int k = 0; k < b.size(); ++k)
      worst = std::max({worst, std::abs(cov.var1(k) - 0.25), std::abs(cov.var2(k) - 0.25)});
  }
  return {worst < 1e-9, "max |var - 0.25| = " + num(worst) + " (tol 1e-9)"};
}

Outcome constant_squeezing() {
  double worst = 0.0;
  bool parity_ok = true;
  for (double r : {0.5, 1.0, 2.0}) {
    const double sq = std::exp(-2 * r) / 4, anti = std::exp(2 * r) / 4;
    for (int k = 0; k < 6; ++k) {
      const auto v = mode_variances(basis_c2(), flat(r), k);
      // odd modes squeeze A_1, even modes squeeze A_2
      const double v_sq = k % 2 ? v.var1 : v.var2;
      const double v_anti = k % 2 ? v.var2 : v.var1;
      parity_ok = parity_ok && v_sq < v_anti;
      worst = std::max({worst, std::abs(v_sq - sq), std::abs(v_anti - anti)});
    }
  }
  return {worst < 1e-7 && parity_ok,
          "max |var - e^{-+2r}/4| = " + num(worst) + " over r in {0.5,1,2}, k<6 (tol 1e-7)" +
              (parity_ok ? "" : ", parity assignment wrong")};
}

Outcome unitarity() {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  double worst = 0.0;
  for (const auto& p : families())
    for (int i = 0; i < 1000; ++i) {
      const auto uv = solve_uv(p, u(rng));
      worst = std::max(worst, std::abs(std::norm(uv.U) - std::norm(uv.V) - 1.0));
    }
  return {worst < 1e-12, "max ||U|^2-|V|^2-1| = " + num(worst) + " (tol 1e-12)"};
}

Outcome propagation() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& b = basis_c2();
  double worst = 0.0;
  for (int k = 0; k <= 5; ++k) {
    const cplx phase = std::pow(cplx(0.0, -1.0), k);
    for (auto shape : {ModeShape::phi, ModeShape::chi}) {
      const auto out = fourier_T(mode_field(b, k, shape, Plane::source), b.band());
      const auto xs = out.coords();
      const auto vs = out.values();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i]) > 3.0) continue;
        // the transform of the jump in theta_k at |s| = 1 is its midpoint
        if (shape == ModeShape::chi && std::abs(std::abs(xs[i]) - 1.0) < 1e-12) continue;
        const double ref = shape == ModeShape::phi ? b.eval_psi(k, xs[i]) : b.eval_theta(k, xs[i]);
        worst = std::max(worst, std::abs(vs[i] - phase * ref));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-6 && secs < 60.0,
          "max pointwise error = " + num(worst) + " (tol 1e-6), " + num(secs) + " s (limit 60)"};
}

// int_{-1}^{1} psi_k(x) e^{-iqx} dx by composite Simpson against
// (-i)^k sqrt(2 pi lambda_k / c) psi_k(q/c).
Outcome finite_fourier() {
  const auto& b = basis_c2();
  const double c = b.c();
  const int n = 4000;
  double worst = 0.0;
  for (int k = 0; k <= 5; ++k) {
    std::vector<double> psi(n + 1);
    for (int i = 0; i <= n; ++i) psi[i] = b.eval_psi(k, -1.0 + 2.0 * i / n);
    const cplx phase = std::pow(cplx(0.0, -1.0), k);
    for (int m = 0; m < 50; ++m) {
      const double q = -2.5 * c + 5.0 * c * m / 49.0;
      cplx lhs = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double x = -1.0 + 2.0 * i / n;
        const double w = (2.0 / n / 3.0) * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
        lhs += w * psi[i] * std::polar(1.0, -q * x);
      }
      worst = std::max(worst, std::abs(lhs - phase * std::sqrt(2 * pi * b.lambda(k) / c) *
                                                  b.eval_psi(k, q / c)));
    }
  }
  return {worst < 1e-7, "max residual at 50 q, k<=5 = " + num(worst) + " (tol 1e-7)"};
}

Outcome spectrum() {
  double worst = 0.0;
  for (double c : {1.0, 2.0, 2.0 * pi, 5.0 * pi}) {
    double sum = 0.0;
    for (double l : nystrom_spectrum(BandParameter(c), 240)) sum += l;
    worst = std::max(worst, std::abs(sum - 2 * c / pi));
  }
  bool plunge = true;
  std::string d;
  for (int S : {4, 8}) {
    const double c = pi * S / 2;
    const auto b = build_basis(BandParameter(c), S + 4, 200);
    // independent eigenvalues from the differential-operator oracle
    const psq::testing::LegendreOracle oracle(c, 80);
    for (int k = 0; k < b.size(); ++k) {
      if (std::abs(b.lambda(k) - oracle.lambda(k)) > 1e-8) plunge = false;
      if (k <= S - 2 && b.lambda(k) < 0.5) plunge = false;
      if (k >= S + 1 && b.lambda(k) > 0.5) plunge = false;
    }
    d += ", S=" + std::to_string(S) + ": lambda_{S-1}=" + num(b.lambda(S - 1)) +
         " lambda_S=" + num(b.lambda(S));
  }
  return {worst < 1e-8 && plunge, "max |sum lambda - 2c/pi| = " + num(worst) + " (tol 1e-8)" + d};
}

Outcome diaphragm() {
  const auto& b = basis_c2();
  const PlaneField f = cplx(0.6, 0.1) * mode_field(b, 1, ModeShape::psi, Plane::source) +
                       cplx(-0.3, 0.9) * mode_field(b, 4, ModeShape::chi, Plane::source) +
                       mode_field(b, 0, ModeShape::phi, Plane::source);
  const auto ref = project_core_wings(f, b);
  int diff = 0;
  for (double rho : {1.0, 1.5, 3.0}) {
    const auto m = project_core_wings(apply_diaphragm(f, DiaphragmSpec(rho)), b);
    for (int k = 0; k < b.size(); ++k) diff += m.c_core[k] != ref.c_core[k];
  }
  return {diff == 0, std::to_string(diff) + " core coefficients changed for d_s/d in {1,1.5,3} (want 0)"};
}

Outcome covariance_consistency() {
  const auto b = build_basis(BandParameter(2.0), 6, 64);
  double worst = 0.0;
  auto profiles = families();
  profiles.push_back(SqueezingProfile::vacuum());
  for (const auto& p : profiles) {
    const auto cov = full_covariance(b, p);
    for (int k = 0; k < b.size(); ++k) {
      const auto v = mode_variances(b, p, k);
      worst = std::max({worst, std::abs(cov.var1(k) - v.var1), std::abs(cov.var2(k) - v.var2)});
    }
  }
  return {worst < 1e-8, "max |diag(Sigma) - variance| = " + num(worst) + " over 4 families (tol 1e-8)"};
}

Outcome heisenberg() {
  const auto b = build_basis(BandParameter(2.0), 6, 64);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = kInf;
  for (int t = 0; t < 20; ++t) {
    const double r0 = 2.5 * u(rng), qc = 0.3 + 5.0 * u(rng), th = 2 * pi * u(rng);
    const double beta = 0.1 * u(rng);
    const auto p = t % 2 ? SqueezingProfile::constant_band(r0, qc, th, beta, u(rng))
                         : SqueezingProfile::gaussian(r0, qc, th, beta, u(rng));
    const auto cov = full_covariance(b, p);
    for (int k = 0; k < cov.K; ++k)
      worst = std::min(worst, cov.var1(k) * cov.var2(k) - cov.cov12(k) * cov.cov12(k) - 1.0 / 16);
  }
  return {worst >= -1e-10, "min (det - 1/16) over 20 profiles = " + num(worst) + " (tol -1e-10)"};
}

Outcome monte_carlo() {
  const auto b = build_basis(BandParameter(2.0), 6, 64);
  double worst = 0.0;
  bool same = true;
  std::uint64_t seed = 7;
  for (const auto& p : {SqueezingProfile::vacuum(), flat(1.0),
                        SqueezingProfile::gaussian(1.0, 2.0, 0.3, 0.02)}) {
    const auto cov = full_covariance(b, p);
    const auto batch = sample(cov, {}, 100000, seed);
    const auto e = empirical_covariance(batch);
    for (int i = 0; i < 2 * cov.K; ++i)
      worst = std::max(worst, std::abs(e.sigma(i, i) - cov.sigma(i, i)) / e.se(i, i));
    const auto again = sample(cov, {}, 100000, seed);
    same = same && (batch.draws.array() == again.draws.array()).all();
    ++seed;
  }
  return {worst < 5.0 && same, "max |empirical - analytic| / SE = " + num(worst) +
                                   " (tol 5), repeat seeds " + (same ? "bit-identical" : "DIFFER")};
}

Outcome budget_identities() {
  const ImagingConfig im{2e-3, 2e-3, 5e-3, 0.5e-6, 0.1};
  const double c = band_parameter(im);
  double worst = 0.0;
  int last = -1;
  bool monotone = true;
  for (double f = 0.05; f < 50.0; f *= 1.21) {
    const auto r = budget_for_band(im, f * c);
    worst = std::max(worst, std::abs(r.N / r.S - r.q_c / c));
    monotone = monotone && static_cast<int>(r.verdict) >= last;
    last = static_cast<int>(r.verdict);
  }
  const auto edge = budget_for_band(im, c);
  const bool ok = worst < 1e-12 && edge.N == edge.S && monotone;
  return {ok, "max |N/S - q_c/c| = " + num(worst) + " (tol 1e-12), q_c=c: N-S = " +
                  num(edge.N - edge.S) + ", verdict " + (monotone ? "monotone" : "NOT monotone")};
}

Outcome band_overlap_degradation() {
  const double c = 2.0 * pi;  // S = 4
  const auto b = build_basis(BandParameter(c), 10, 96);
  const double S = b.band().shannon_number();
  auto min_var = [&](double qc, int k) {
    const auto v = mode_variances(b, SqueezingProfile::constant_band(1.0, qc), k);
    return std::min(v.var1, v.var2);
  };
  const double narrow0 = min_var(c / 2, 0), broad0 = min_var(3 * c, 0);
  const double d0 = 0.25 - narrow0;
  bool revert = true;
  double prev = kInf, last = 0.0;
  for (int k = static_cast<int>(S) + 1; k < b.size(); ++k) {
    const double d = 0.25 - min_var(c / 2, k);
    revert = revert && d < 0.25 * d0 && d <= prev;
    prev = d;
    last = min_var(c / 2, k);
  }
  return {narrow0 > broad0 && revert,
          "mode 0 min var " + num(narrow0) + " (q_c=c/2) > " + num(broad0) +
              " (q_c=3c); k>S deficits shrinking, k=9 min var " + num(last)};
}

}  // namespace

int main() {
  struct Row {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Row rows[] = {
      {"AC-01", "vacuum baseline", vacuum_baseline},
      {"AC-02", "constant squeezing closed form", constant_squeezing},
      {"AC-03", "U/V unitarity", unitarity},
      {"AC-04", "propagation relations", propagation},
      {"AC-05", "finite-Fourier residual", finite_fourier},
      {"AC-06", "spectrum trace and plunge", spectrum},
      {"AC-07", "diaphragm invariance", diaphragm},
      {"AC-08", "covariance consistency", covariance_consistency},
      {"AC-09", "uncertainty bound", heisenberg},
      {"AC-10", "Monte-Carlo statistics", monte_carlo},
      {"AC-11", "budget identities", budget_identities},
      {"AC-12", "band-overlap degradation", band_overlap_degradation},
  };
  int failed = 0;
  for (const auto& r : rows) {
    Outcome o;
    try {
      o = r.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s  %s: %s\n", r.id, o.pass ? "PASS" : "FAIL", r.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(rows)) - failed, std::size(rows));
  return failed == 0 ? 0 : 1;
}
