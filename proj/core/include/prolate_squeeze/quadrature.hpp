#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace psq::quad {

/// Gauss-Legendre rule on [a, b].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
Rule gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped onto [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Gauss-Legendre panels of order n between consecutive breakpoints.
Rule composite_gauss_legendre(std::span<const double> breakpoints, int n);

/// Weights of the end-corrected trapezoid (Gregory) rule on n_intervals
/// uniform intervals of width h. Corrections use up to `order` points at
/// each end; the rule is exact for polynomials of degree < order.
std::vector<double> gregory_weights(std::size_t n_intervals, double h, int order = 6);

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_panels = 20000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

struct VectorResult {
  std::vector<double> value;
  double error = 0.0;
  int panels = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a scalar function over
/// [a, b]. Breakpoints inside (a, b) always start a fresh panel, so jumps
/// placed there cost nothing.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {}, const Options& opt = {});

/// Vector-valued variant: `f(x, out)` fills `out` (length `dim`). Panels are
/// refined on the max-norm of the Kronrod/Gauss difference.
VectorResult integrate(const std::function<void(double, std::span<double>)>& f,
                       std::size_t dim, double a, double b,
                       std::span<const double> breakpoints = {}, const Options& opt = {});

}  // namespace psq::quad
