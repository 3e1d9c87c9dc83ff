// prolate-squeeze <basis|variances|budget|simulate|verify> --config <path>
//                 [--out <dir>] [--seed <u64>]
//
// Exit status: 0 success, 1 failed check or numerical error, 2 usage or
// configuration error.
#include "prolate_squeeze/budget.hpp"
#include "prolate_squeeze/config.hpp"
#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/homodyne.hpp"
#include "prolate_squeeze/pswf.hpp"
#include "prolate_squeeze/squeeze.hpp"
#include "prolate_squeeze/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  psq::RunConfig cfg;
  fs::path out;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw psq::Error("cannot write " + path.string());
  f << text;
  std::cout << "wrote " << path.string() << '\n';
}

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.precision(17);
  return os;
}

int cmd_basis(const Run& run) {
  const auto basis = run.cfg.build_basis();
  for (const auto& w : basis.warnings()) std::cerr << "warning: " << w << '\n';
  const int K = basis.size();
  if (run.cfg.wants("csv")) {
    auto os = csv_stream();
    os << "k,lambda\n";
    for (int k = 0; k < K; ++k) os << k << ',' << basis.lambda(k) << '\n';
    write_file(run.out / "lambdas.csv", os.str());

    // psi_k on |s| <= min(3, validity bound), 601 points.
    auto ps = csv_stream();
    const double smax = std::min(3.0, basis.validity_bound());
    ps << "s";
    for (int k = 0; k < K; ++k) ps << ",psi_" << k;
    ps << '\n';
    std::vector<double> psi(static_cast<std::size_t>(K));
    for (int i = 0; i <= 600; ++i) {
      const double s = -smax + 2.0 * smax * i / 600.0;
      basis.eval_psi_all(s, psi);
      ps << s;
      for (double v : psi) ps << ',' << v;
      ps << '\n';
    }
    write_file(run.out / "psi_curves.csv", ps.str());
  }
  if (run.cfg.wants("json")) write_file(run.out / "basis.json", basis.to_json());
  std::printf("c = %.12g, S = %.12g, K = %d, M = %d\n", basis.c(), basis.band().shannon_number(),
              K, basis.order());
  return 0;
}

int cmd_variances(const Run& run) {
  const auto basis = run.cfg.build_basis();
  const auto profile = run.cfg.resolve_profile();
  const auto rows = psq::mode_variance_table(basis, profile);
  const auto cov = psq::full_covariance(basis, profile);
  const auto report = psq::squeezing_report(cov);
  if (run.cfg.wants("csv")) {
    write_file(run.out / "variances.csv", psq::variance_table_csv(rows));
    auto os = csv_stream();
    os << "k,parity,angle,min_var,max_var,dB,squeezed\n";
    for (const auto& m : report)
      os << m.k << ',' << (m.parity == 0 ? "even" : "odd") << ',' << m.angle << ',' << m.min_var
         << ',' << m.max_var << ',' << m.db << ',' << (m.squeezed ? 1 : 0) << '\n';
    write_file(run.out / "squeezing_report.csv", os.str());
  }
  if (run.cfg.wants("json")) write_file(run.out / "covariance.json", cov.to_json());
  std::printf("%4s %6s %20s %20s %12s\n", "k", "parity", "var1", "var2", "min_dB");
  for (std::size_t k = 0; k < rows.size(); ++k)
    std::printf("%4zu %6s %20.15g %20.15g %12.6f\n", k, k % 2 ? "odd" : "even", rows[k].var1,
                rows[k].var2, 10.0 * std::log10(std::min(rows[k].var1, rows[k].var2) / 0.25));
  return 0;
}

int cmd_budget(const Run& run) {
  const auto rep = psq::budget(run.cfg.imaging, run.cfg.resolve_profile(), run.cfg.band_threshold);
  write_file(run.out / "budget.txt", rep.to_table());
  if (run.cfg.wants("json")) write_file(run.out / "budget.json", rep.to_json() + "\n");
  std::cout << rep.to_table();
  return 0;
}

int cmd_simulate(const Run& run) {
  const auto basis = run.cfg.build_basis();
  const auto cov = psq::full_covariance(basis, run.cfg.resolve_profile());
  Eigen::VectorXd disp;
  if (run.cfg.classical_amplitude != 0.0)
    disp = psq::classical_wave_displacement(cov, run.cfg.classical_amplitude,
                                            run.cfg.classical_phase);
  const auto batch = psq::sample(cov, disp, run.cfg.mc_n, run.cfg.seed);
  const auto emp = psq::empirical_covariance(batch);
  const auto white = psq::whiteness_test(batch, cov);

  if (run.cfg.wants("csv")) {
    write_file(run.out / "samples.csv", psq::batch_csv(batch));
    auto os = csv_stream();
    os << "i,j,analytic,empirical,se,z\n";
    for (Eigen::Index i = 0; i < cov.sigma.rows(); ++i)
      for (Eigen::Index j = i; j < cov.sigma.cols(); ++j) {
        const double z = (emp.sigma(i, j) - cov.sigma(i, j)) / emp.se(i, j);
        os << i << ',' << j << ',' << cov.sigma(i, j) << ',' << emp.sigma(i, j) << ','
           << emp.se(i, j) << ',' << z << '\n';
      }
    write_file(run.out / "empirical_vs_analytic.csv", os.str());
  }
  if (run.cfg.wants("json")) write_file(run.out / "samples.json", psq::batch_sidecar_json(batch, cov));
  std::printf("n = %zu, seed = %llu, whiteness chi2 = %.6f (dof %.0f), p = %.6g: %s\n", batch.n(),
              static_cast<unsigned long long>(batch.seed), white.statistic, white.dof,
              white.p_value, white.passed ? "white" : "NOT white");
  return 0;
}

int cmd_verify(const Run& run, const std::string& only) {
  const auto rep = psq::run_verification(run.cfg, only);
  std::cout << rep.to_text();
  write_file(run.out / "verify.txt", rep.to_text());
  if (run.cfg.wants("json")) write_file(run.out / "verify.json", rep.to_json() + "\n");
  return rep.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prolate-mode squeezing toolkit"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, only;
  std::optional<std::uint64_t> seed;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "Monte-Carlo seed (overrides mc.seed)");
  };
  auto* basis = app.add_subcommand("basis", "prolate eigenvalues and mode functions");
  auto* variances = app.add_subcommand("variances", "quadrature variances and covariance");
  auto* budget = app.add_subcommand("budget", "coherence length and degrees-of-freedom budget");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo homodyne samples");
  auto* verify = app.add_subcommand("verify", "run every acceptance and invariant check");
  for (auto* s : {basis, variances, budget, simulate, verify}) common(s);
  verify->add_option("--only", only, "run checks whose id starts with this prefix");
  auto* list = app.add_subcommand("list-checks", "print the check registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& c : psq::list_checks())
      std::printf("%-8s %s%s\n", c.id.c_str(), c.description.c_str(),
                  c.expected_failure ? " [expected failure]" : "");
    return 0;
  }

  Run run;
  try {
    run.cfg = psq::RunConfig::load(config_path);
    if (seed) run.cfg.seed = *seed;
    run.out = out_dir.empty() ? fs::path(run.cfg.out_dir) : fs::path(out_dir);
    fs::create_directories(run.out);
  } catch (const psq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "cannot create output directory: " << e.what() << '\n';
    return 2;
  }

  try {
    if (basis->parsed()) return cmd_basis(run);
    if (variances->parsed()) return cmd_variances(run);
    if (budget->parsed()) return cmd_budget(run);
    if (simulate->parsed()) return cmd_simulate(run);
    return cmd_verify(run, only);
  } catch (const psq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
