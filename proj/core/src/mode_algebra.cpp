#include "prolate_squeeze/mode_algebra.hpp"

#include "prolate_squeeze/error.hpp"
#include "prolate_squeeze/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace psq {

using std::numbers::pi;

namespace {

constexpr double kBoundaryEnergyTol = 1e-6;

// sin(k L) / k, continuous at k = 0
double sinc_window(double k, double L) noexcept {
  if (std::abs(k * L) < 1e-8) return L * (1.0 - (k * L) * (k * L) / 6.0);
  return std::sin(k * L) / k;
}

bool is_integral(double x) { return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, std::abs(x)); }

// Indicator of |x| < 1 with the half value on the boundary.
double open_indicator(double x) {
  const double ax = std::abs(x);
  if (std::abs(ax - 1.0) < 1e-13) return 0.5;
  return ax < 1.0 ? 1.0 : 0.0;
}

// int_{|x|>L} [int g(u) e^{-i W u x} du] [int h(v) e^{-i V v x} dv] dx
//   = int int g(u) h(v) (2 pi delta(W u + V v) - 2 sin(k L) / k) du dv,  k = W u + V v.
// The delta term is integrated over the variable with the smaller bandwidth
// so the point-evaluated partner stays inside [-1, 1].
cplx exterior_product(const BandlimitedTail& f, const BandlimitedTail& h, double L) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.rule.size(); ++i) {
    const cplx gi = f.rule.weights[i] * f.density[i];
    cplx row = 0.0;
    for (std::size_t j = 0; j < h.rule.size(); ++j)
      row += h.rule.weights[j] * h.density[j] *
             sinc_window(f.bandwidth * f.rule.nodes[i] + h.bandwidth * h.rule.nodes[j], L);
    acc += gi * row;
  }
  acc *= -2.0;
  if (f.bandwidth >= h.bandwidth) {
    for (std::size_t j = 0; j < h.rule.size(); ++j)
      acc += (2.0 * pi / f.bandwidth) * h.rule.weights[j] * h.density[j] *
             f.density_at(-h.bandwidth * h.rule.nodes[j] / f.bandwidth);
  } else {
    for (std::size_t i = 0; i < f.rule.size(); ++i)
      acc += (2.0 * pi / h.bandwidth) * f.rule.weights[i] * f.density[i] *
             h.density_at(-f.bandwidth * f.rule.nodes[i] / h.bandwidth);
  }
  return acc;
}

// int_{|x|>L} |f|^2
double exterior_energy(const BandlimitedTail& t, double L) {
  const std::size_t n = t.rule.size();
  double direct = 0.0;
  for (std::size_t i = 0; i < n; ++i) direct += t.rule.weights[i] * std::norm(t.density[i]);
  cplx cross = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cross += t.rule.weights[i] * t.rule.weights[j] * t.density[i] * std::conj(t.density[j]) *
               sinc_window(t.bandwidth * (t.rule.nodes[i] - t.rule.nodes[j]), L);
  return (2.0 * pi / t.bandwidth) * direct - 2.0 * cross.real();
}

BandlimitedTail chi_tail(const ProlateBasis& basis, int k) {
  const double gap = 1.0 - basis.lambda(k);
  const double scale = gap < 1e-14 ? 0.0 : 1.0 / std::sqrt(gap);
  std::vector<cplx> a(basis.size(), 0.0);
  a[k] = scale;
  return prolate_tail(basis, a);
}

bool same_rule(const quad::Rule& a, const quad::Rule& b) {
  return a.nodes == b.nodes && a.weights == b.weights;
}

}  // namespace

std::string_view to_string(Plane p) noexcept { return p == Plane::source ? "source" : "object"; }

cplx i_pow(int k) noexcept {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

cplx BandlimitedTail::eval(double x) const {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j)
    acc += rule.weights[j] * density[j] * std::polar(1.0, -bandwidth * rule.nodes[j] * x);
  return acc;
}

void PlaneField::build_grid(double extent, double step) {
  if (!(extent > 1.0) || !(step > 0.0) || !std::isfinite(extent))
    throw DomainError("plane grid: need extent L > 1 and step h > 0");
  if (!is_integral(1.0 / step) || !is_integral((extent - 1.0) / step))
    throw DomainError("plane grid: 1/h and (L - 1)/h must be integers");
  extent_ = extent;
  step_ = step;
  const auto n_wing = static_cast<std::size_t>(std::llround((extent - 1.0) / step));
  const auto n_core = static_cast<std::size_t>(std::llround(2.0 / step));
  coords_.clear();
  panels_.clear();
  weights_.clear();
  auto add_panel = [&](Region region, double a, double b, std::size_t intervals) {
    Panel p{region, coords_.size(), intervals + 1, a, b};
    for (std::size_t i = 0; i <= intervals; ++i)
      coords_.push_back(i == intervals ? b : a + static_cast<double>(i) * step);
    const auto w = quad::gregory_weights(intervals, step);
    weights_.insert(weights_.end(), w.begin(), w.end());
    panels_.push_back(p);
  };
  add_panel(Region::left_wing, -extent, -1.0, n_wing);
  add_panel(Region::core, -1.0, 1.0, n_core);
  add_panel(Region::right_wing, 1.0, extent, n_wing);
  values_.assign(coords_.size(), 0.0);
}

PlaneField PlaneField::zeros(Plane plane, double extent, double step) {
  PlaneField f;
  f.plane_ = plane;
  f.build_grid(extent, step);
  return f;
}

PlaneField PlaneField::sample(Plane plane, double extent, double step, const Sampler& fn) {
  PlaneField f = zeros(plane, extent, step);
  for (const Panel& p : f.panels_)
    for (std::size_t i = p.first; i < p.first + p.count; ++i) f.values_[i] = fn(f.coords_[i], p.region);
  return f;
}

double PlaneField::norm_squared() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += weights_[i] * std::norm(values_[i]);
  if (tail_) acc += exterior_energy(*tail_, extent_);
  return acc;
}

double PlaneField::boundary_energy_fraction() const {
  const double edge = 0.95 * extent_;
  double outer = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double e = weights_[i] * std::norm(values_[i]);
    total += e;
    if (std::abs(coords_[i]) >= edge) outer += e;
  }
  return total > 0.0 ? outer / total : 0.0;
}

PlaneField& PlaneField::operator+=(const PlaneField& other) {
  if (other.plane_ != plane_ || other.coords_ != coords_)
    throw DomainError("field addition: planes or grids differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  if (other.tail_) {
    if (!tail_) {
      tail_ = other.tail_;
    } else {
      if (tail_->bandwidth != other.tail_->bandwidth || !same_rule(tail_->rule, other.tail_->rule))
        throw DomainError("field addition: exterior tails use different bandwidths or rules");
      for (std::size_t j = 0; j < tail_->density.size(); ++j)
        tail_->density[j] += other.tail_->density[j];
      tail_->density_at = [a = tail_->density_at, b = other.tail_->density_at](double u) {
        return a(u) + b(u);
      };
    }
  }
  return *this;
}

PlaneField& PlaneField::operator*=(cplx scale) {
  for (cplx& v : values_) v *= scale;
  if (tail_) {
    for (cplx& v : tail_->density) v *= scale;
    tail_->density_at = [a = tail_->density_at, scale](double u) { return scale * a(u); };
  }
  return *this;
}

std::string PlaneField::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "coordinate,re,im\n";
  for (std::size_t i = 0; i < values_.size(); ++i)
    os << coords_[i] << ',' << values_[i].real() << ',' << values_[i].imag() << '\n';
  return os.str();
}

PlaneField PlaneField::from_csv(Plane plane, std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line) || line.rfind("coordinate", 0) != 0)
    throw DomainError("field CSV: missing header 'coordinate,re,im'");
  std::vector<double> xs;
  std::vector<cplx> vs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double x, re, im;
    char c1, c2;
    if (!(row >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
      throw DomainError("field CSV: malformed row '" + line + "'");
    xs.push_back(x);
    vs.push_back({re, im});
  }
  if (xs.size() < 4) throw DomainError("field CSV: too few rows");
  const double extent = -xs.front();
  const double step = xs[1] - xs[0];
  PlaneField f = zeros(plane, extent, std::abs(1.0 / std::round(1.0 / step)));
  if (f.coords_.size() != xs.size())
    throw DomainError("field CSV: row count does not match a [-L, L] grid with core edges doubled");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - f.coords_[i]) > 1e-9)
      throw DomainError("field CSV: coordinates are not on the expected grid");
    f.values_[i] = vs[i];
  }
  return f;
}

std::string ModeCoefficients::to_json() const {
  auto arr = [](const std::vector<cplx>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const cplx& z : v) a.push_back({z.real(), z.imag()});
    return a;
  };
  nlohmann::json j;
  j["K"] = size();
  j["c_core"] = arr(c_core);
  j["d_wings"] = arr(d_wings);
  j["residual"] = residual;
  return j.dump(1);
}

ModeCoefficients ModeCoefficients::from_json(std::string_view text) {
  ModeCoefficients m;
  try {
    const auto j = nlohmann::json::parse(text);
    auto arr = [](const nlohmann::json& a) {
      std::vector<cplx> out;
      for (const auto& z : a) out.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
      return out;
    };
    m.c_core = arr(j.at("c_core"));
    m.d_wings = arr(j.at("d_wings"));
    m.residual = j.value("residual", 0.0);
    if (m.c_core.size() != m.d_wings.size() || j.at("K").get<std::size_t>() != m.c_core.size())
      throw DomainError("mode coefficients JSON: inconsistent lengths");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("mode coefficients JSON: ") + e.what());
  }
  return m;
}

DiaphragmSpec::DiaphragmSpec(double r) : ratio(r) {
  if (!(r > 0.0)) throw DomainError("diaphragm ratio d_s/d must be > 0");
}

BandlimitedTail prolate_tail(const ProlateBasis& basis, std::span<const cplx> psi_coeffs) {
  const int K = basis.size();
  if (static_cast<int>(psi_coeffs.size()) != K)
    throw DomainError("prolate_tail: need one coefficient per mode");
  const double scale = std::sqrt(basis.c() / (2.0 * pi));
  std::vector<cplx> weightk(K);
  for (int k = 0; k < K; ++k) weightk[k] = psi_coeffs[k] * i_pow(k) * scale;

  BandlimitedTail t;
  t.bandwidth = basis.c();
  t.rule = basis.rule();
  t.density.assign(t.rule.size(), 0.0);
  for (int k = 0; k < K; ++k) {
    if (weightk[k] == cplx(0.0)) continue;
    const auto samples = basis.core_samples(k);
    for (std::size_t j = 0; j < t.rule.size(); ++j) t.density[j] += weightk[k] * samples[j];
  }
  t.density_at = [basis, weightk](double u) {
    cplx acc = 0.0;
    for (int k = 0; k < basis.size(); ++k)
      if (weightk[k] != cplx(0.0)) acc += weightk[k] * basis.eval_phi(k, u);
    return acc;
  };
  return t;
}

PlaneField mode_field(const ProlateBasis& basis, int k, ModeShape shape, Plane plane,
                      double extent, double step) {
  const double lam = basis.lambda(k);
  const double gap = 1.0 - lam;
  const double inv_gap = gap < 1e-14 ? 0.0 : 1.0 / std::sqrt(gap);
  // Wing samples use psi directly so the edge points at |x| = 1 get the
  // one-sided wing value.
  auto chi = [&](double x) { return basis.eval_psi(k, x) * inv_gap; };
  PlaneField f = PlaneField::sample(plane, extent, step, [&](double x, Region r) -> cplx {
    const bool core = r == Region::core;
    switch (shape) {
      case ModeShape::phi: return core ? basis.eval_phi(k, x) : 0.0;
      case ModeShape::chi: return core ? 0.0 : chi(x);
      case ModeShape::psi: return basis.eval_psi(k, x);
      case ModeShape::theta: return core ? std::sqrt(gap) * basis.eval_phi(k, x) : -std::sqrt(lam) * chi(x);
    }
    return 0.0;
  });
  std::vector<cplx> a(basis.size(), 0.0);
  switch (shape) {
    case ModeShape::phi: return f;
    case ModeShape::chi: a[k] = inv_gap; break;
    case ModeShape::psi: a[k] = 1.0; break;
    case ModeShape::theta: a[k] = -std::sqrt(lam) * inv_gap; break;
  }
  f.set_tail(prolate_tail(basis, a));
  return f;
}

PlaneField fourier_T(const PlaneField& source, BandParameter band) {
  return fourier_T(source, band, source.extent(), source.step());
}

PlaneField fourier_T(const PlaneField& source, BandParameter band, double out_extent,
                     double out_step) {
  if (source.plane() != Plane::source) throw DomainError("fourier_T: input must be a source-plane field");
  if (!source.tail()) {
    const double frac = source.boundary_energy_fraction();
    if (frac > kBoundaryEnergyTol) {
      std::ostringstream os;
      os << "fourier_T: " << frac << " of the field energy lies within 5% of the grid edge L = "
         << source.extent() << "; enlarge the grid or attach the band-limited exterior";
      throw TruncationError(os.str(), frac, 2.0 * source.extent());
    }
  }
  const double c = band.value();
  const double prefactor = std::sqrt(c / (2.0 * pi));
  PlaneField out = PlaneField::zeros(Plane::object, out_extent, out_step);
  const auto xs = source.coords();
  const auto fs = source.values();
  const auto& ws = source.weights();
  const auto& tail = source.tail();
  const double L = source.extent();
  auto sv = out.values();
  const auto ss = out.coords();

  std::vector<cplx> weighted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) weighted[i] = ws[i] * fs[i];

  parallel_for(ss.size(), [&](std::size_t n) {
    const double omega = c * ss[n];
    cplx acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (weighted[i] == cplx(0.0)) continue;
      acc += weighted[i] * std::polar(1.0, -omega * xs[i]);
    }
    if (tail) {
      const double W = tail->bandwidth;
      const double ind = open_indicator(omega / W);
      if (ind > 0.0) acc += ind * (2.0 * pi / W) * tail->density_at(-omega / W);
      cplx osc = 0.0;
      for (std::size_t j = 0; j < tail->rule.size(); ++j)
        osc += tail->rule.weights[j] * tail->density[j] * sinc_window(W * tail->rule.nodes[j] + omega, L);
      acc -= 2.0 * osc;
    }
    sv[n] = prefactor * acc;
  });
  return out;
}

ModeCoefficients project_core_wings(const PlaneField& field, const ProlateBasis& basis) {
  const int K = basis.size();
  const double L = field.extent();
  if (!field.tail() && field.boundary_energy_fraction() > kBoundaryEnergyTol) {
    // Without an exterior model the wing integrals are cut at L.
    std::vector<int> affected;
    for (int k = 0; k < K; ++k) {
      const double gap = 1.0 - basis.lambda(k);
      if (gap < 1e-14) continue;
      const auto inside = quad::integrate(
          [&](double s) { const double p = basis.eval_psi(k, s); return p * p; }, 1.0, L);
      const double beyond = 1.0 - 2.0 * inside.value / gap;
      if (beyond > kBoundaryEnergyTol) affected.push_back(k);
    }
    if (!affected.empty()) {
      std::ostringstream os;
      os << "project_core_wings: grid extent L = " << L
         << " truncates the wing functions of modes [";
      for (std::size_t i = 0; i < affected.size(); ++i) os << (i ? ", " : "") << affected[i];
      os << "] while the field still carries energy at the edge";
      throw TruncationError(os.str(), field.boundary_energy_fraction(), 2.0 * L, affected);
    }
  }

  ModeCoefficients out;
  out.c_core.assign(K, 0.0);
  out.d_wings.assign(K, 0.0);
  const auto xs = field.coords();
  const auto fs = field.values();
  const auto& ws = field.weights();
  std::vector<double> psi(K);
  std::vector<double> inv_sqrt_lam(K), inv_sqrt_gap(K);
  for (int k = 0; k < K; ++k) {
    inv_sqrt_lam[k] = 1.0 / std::sqrt(basis.lambda(k));
    const double gap = 1.0 - basis.lambda(k);
    inv_sqrt_gap[k] = gap < 1e-14 ? 0.0 : 1.0 / std::sqrt(gap);
  }
  for (const Panel& p : field.panels()) {
    const bool core = p.region == Region::core;
    for (std::size_t i = p.first; i < p.first + p.count; ++i) {
      if (fs[i] == cplx(0.0)) continue;
      // psi_k at the core edge from the wing side equals the core-side value;
      // only the normalisation differs.
      basis.eval_psi_all(xs[i], psi);
      const cplx wf = ws[i] * fs[i];
      for (int k = 0; k < K; ++k) {
        if (core)
          out.c_core[k] += wf * psi[k] * inv_sqrt_lam[k];
        else
          out.d_wings[k] += wf * psi[k] * inv_sqrt_gap[k];
      }
    }
  }
  if (field.tail()) {
    for (int k = 0; k < K; ++k) {
      if (inv_sqrt_gap[k] == 0.0) continue;
      out.d_wings[k] += exterior_product(*field.tail(), chi_tail(basis, k), L);
    }
  }
  double captured = 0.0;
  for (int k = 0; k < K; ++k) captured += std::norm(out.c_core[k]) + std::norm(out.d_wings[k]);
  out.residual = std::max(0.0, field.norm_squared() - captured);
  return out;
}

std::vector<cplx> prolate_coefficients(const ModeCoefficients& coeffs, const ProlateBasis& basis) {
  if (coeffs.size() != basis.size()) throw DomainError("prolate_coefficients: size mismatch");
  std::vector<cplx> out(coeffs.size());
  for (int k = 0; k < coeffs.size(); ++k) {
    const double lam = basis.lambda(k);
    out[k] = std::sqrt(lam) * coeffs.c_core[k] + std::sqrt(1.0 - lam) * coeffs.d_wings[k];
  }
  return out;
}

std::vector<cplx> object_amplitudes(const ModeCoefficients& coeffs) {
  std::vector<cplx> a(coeffs.size());
  for (int k = 0; k < coeffs.size(); ++k) a[k] = std::conj(i_pow(k)) * coeffs.c_core[k];
  return a;
}

PlaneField apply_diaphragm(const PlaneField& field, DiaphragmSpec dia) {
  if (dia.ratio >= field.extent()) return field;
  PlaneField out = field;
  const auto xs = out.coords();
  auto vs = out.values();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i]) > dia.ratio) vs[i] = 0.0;
  out.set_tail(std::nullopt);
  return out;
}

PlaneField synthesize_object_field(std::span<const cplx> amplitudes, const ProlateBasis& basis,
                                   double extent, double step) {
  const int K = basis.size();
  if (static_cast<int>(amplitudes.size()) != K)
    throw DomainError("synthesize_object_field: need K = " + std::to_string(K) + " amplitudes");
  std::vector<double> psi(K);
  PlaneField f = PlaneField::sample(Plane::object, extent, step, [&](double s, Region) {
    basis.eval_psi_all(s, psi);
    cplx acc = 0.0;
    for (int k = 0; k < K; ++k) acc += amplitudes[k] * psi[k];
    return acc;
  });
  f.set_tail(prolate_tail(basis, amplitudes));
  return f;
}

}  // namespace psq
