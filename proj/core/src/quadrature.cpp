#include "prolate_squeeze/quadrature.hpp"

#include "prolate_squeeze/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

namespace psq::quad {

Rule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // final derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

Rule composite_gauss_legendre(std::span<const double> breakpoints, int n) {
  Rule out;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    if (!(breakpoints[p + 1] > breakpoints[p])) continue;
    const Rule panel = gauss_legendre(n, breakpoints[p], breakpoints[p + 1]);
    out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return out;
}

std::vector<double> gregory_weights(std::size_t n_intervals, double h, int order) {
  if (n_intervals == 0) throw DomainError("gregory_weights: need at least one interval");
  std::vector<double> w(n_intervals + 1, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  // corrections may not overlap between the two ends
  const int m = std::min<int>(order, static_cast<int>((n_intervals + 1) / 2));
  if (m < 2) return w;

  // Left-end correction sum_i a_i f(i) reproduces the Euler-Maclaurin
  // boundary series sum_j B_2j/(2j)! f^(2j-1)(0) for polynomials of degree < m.
  static constexpr std::array<double, 9> bernoulli_over{
      0.0, 1.0 / 12.0, 0.0, -1.0 / 120.0, 0.0, 1.0 / 252.0, 0.0, -1.0 / 240.0, 0.0};
  Eigen::MatrixXd vander(m, m);
  Eigen::VectorXd rhs(m);
  for (int d = 0; d < m; ++d) {
    for (int i = 0; i < m; ++i) vander(d, i) = (d == 0) ? 1.0 : std::pow(double(i), d);
    rhs(d) = bernoulli_over[d];
  }
  const Eigen::VectorXd a = vander.fullPivLu().solve(rhs);
  for (int i = 0; i < m; ++i) {
    w[i] += h * a(i);
    w[n_intervals - i] += h * a(i);
  }
  return w;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  std::vector<double> value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<void(double, std::span<double>)>& f, std::size_t dim,
           double a, double b, std::vector<double>& scratch) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> kron(dim, 0.0);
  std::vector<double> gauss(dim, 0.0);
  scratch.resize(dim);
  f(centre, scratch);
  for (std::size_t d = 0; d < dim; ++d) {
    kron[d] = kWgk[7] * scratch[d];
    gauss[d] = kWg[3] * scratch[d];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    for (double x : {centre - dx, centre + dx}) {
      f(x, scratch);
      for (std::size_t d = 0; d < dim; ++d) {
        kron[d] += kWgk[j] * scratch[d];
        if (j % 2 == 1) gauss[d] += kWg[j / 2] * scratch[d];
      }
    }
  }
  Panel p{a, b, std::vector<double>(dim), 0.0};
  for (std::size_t d = 0; d < dim; ++d) {
    p.value[d] = kron[d] * half;
    p.error = std::max(p.error, std::abs((kron[d] - gauss[d]) * half));
  }
  return p;
}

}  // namespace

VectorResult integrate(const std::function<void(double, std::span<double>)>& f,
                       std::size_t dim, double a, double b,
                       std::span<const double> breakpoints, const Options& opt) {
  VectorResult res;
  res.value.assign(dim, 0.0);
  if (!(b > a)) return res;

  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> scratch;
  std::priority_queue<Panel> queue;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    queue.push(gk15(f, dim, cuts[i], cuts[i + 1], scratch));

  auto totals = [&](std::vector<double>& value, double& err) {
    value.assign(dim, 0.0);
    err = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      const Panel& p = copy.top();
      for (std::size_t d = 0; d < dim; ++d) value[d] += p.value[d];
      err += p.error;
      copy.pop();
    }
  };

  double err = 0.0;
  std::vector<double> value;
  totals(value, err);
  while (true) {
    double scale = 0.0;
    for (double v : value) scale = std::max(scale, std::abs(v));
    if (err <= std::max(opt.abs_tol, opt.rel_tol * scale)) break;
    if (static_cast<int>(queue.size()) >= opt.max_panels) break;
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      queue.push(worst);
      break;
    }
    Panel left = gk15(f, dim, worst.a, mid, scratch);
    Panel right = gk15(f, dim, mid, worst.b, scratch);
    for (std::size_t d = 0; d < dim; ++d) value[d] += left.value[d] + right.value[d] - worst.value[d];
    err += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }
  // re-sum to shed the drift of the incremental updates
  totals(res.value, res.error);
  res.panels = static_cast<int>(queue.size());
  return res;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const Options& opt) {
  const auto vr = integrate(
      [&f](double x, std::span<double> out) { out[0] = f(x); }, 1, a, b, breakpoints, opt);
  return Result{vr.value[0], vr.error, vr.panels};
}

}  // namespace psq::quad
