#include "indet/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "indet/errors.hpp"
#include "indet/matrix.hpp"
#include "indet/rng.hpp"

namespace indet {

namespace {

constexpr double kIntegralTol = 1e-10;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Composite breakpoints: the union of both knot sets plus a uniform mesh.
std::vector<double> panels(const std::vector<double>& knots, std::size_t uniform) {
  std::vector<double> pts = knots;
  for (std::size_t i = 0; i <= uniform; ++i) pts.push_back(static_cast<double>(i) / static_cast<double>(uniform));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class Fn>
double integrate(const std::vector<double>& breaks, const std::vector<double>& x, const std::vector<double>& w,
                 Fn&& fn) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double piece = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) piece += w[k] * fn(mid + half * x[k]);
    sum += half * piece;
  }
  return sum;
}

}  // namespace

DensitySpec::DensitySpec(DensityKind kind, std::vector<double> knots, std::vector<double> values)
    : kind_(kind), knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2) throw InvalidInput("density: need at least two knots");
  for (double k : knots_)
    if (!std::isfinite(k)) throw InvalidInput("density: knots must be finite");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    if (!(knots_[i] < knots_[i + 1])) throw InvalidInput("density: knots must be strictly increasing");
  const std::size_t expected = kind_ == DensityKind::PiecewiseConstant ? knots_.size() - 1 : knots_.size();
  if (values_.size() != expected)
    throw InvalidInput("density: expected " + std::to_string(expected) + " values, got " +
                       std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("density: values must be finite and nonnegative");
  const double total = integral();
  if (std::abs(total - 1.0) > kIntegralTol)
    throw InvalidInput("density: integral is " + fmt(total) + ", expected 1");
}

DensitySpec DensitySpec::uniform(double lower, double upper) {
  if (!(lower < upper)) throw InvalidInput("density: support must satisfy a < A");
  return DensitySpec(DensityKind::PiecewiseConstant, {lower, upper}, {1.0 / (upper - lower)});
}

DensitySpec DensitySpec::linear(double left, double right, double lower, double upper) {
  return DensitySpec(DensityKind::PiecewiseLinear, {lower, upper}, {left, right});
}

std::size_t DensitySpec::piece(double x) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, knots_.size() - 2);
}

double DensitySpec::operator()(double x) const {
  if (!(x >= lower() && x <= upper()))
    throw OutOfSupport("density: " + fmt(x) + " outside [" + fmt(lower()) + ", " + fmt(upper()) + "]");
  const std::size_t i = piece(x);
  if (kind_ == DensityKind::PiecewiseConstant) return values_[i];
  const double t = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double DensitySpec::cdf(double x) const {
  if (!(x >= lower() && x <= upper()))
    throw OutOfSupport("cdf: " + fmt(x) + " outside [" + fmt(lower()) + ", " + fmt(upper()) + "]");
  const std::size_t last = piece(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    const double width = knots_[i + 1] - knots_[i];
    acc += kind_ == DensityKind::PiecewiseConstant ? width * values_[i]
                                                   : 0.5 * width * (values_[i] + values_[i + 1]);
  }
  const double dx = x - knots_[last];
  if (kind_ == DensityKind::PiecewiseConstant) return acc + dx * values_[last];
  return acc + 0.5 * dx * (values_[last] + (*this)(x));
}

double DensitySpec::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double width = knots_[i + 1] - knots_[i];
    acc += kind_ == DensityKind::PiecewiseConstant ? width * values_[i]
                                                   : 0.5 * width * (values_[i] + values_[i + 1]);
  }
  return acc;
}

double DensitySpec::min() const { return *std::min_element(values_.begin(), values_.end()); }

DensitySpec DensitySpec::normalized() const {
  const double a = lower(), len = length();
  std::vector<double> k(knots_.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = (knots_[i] - a) / len;
  k.front() = 0.0;
  k.back() = 1.0;
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * len;
  return DensitySpec(Unchecked{}, kind_, std::move(k), std::move(v));
}

DensitySpec DensitySpec::affine(double scale, double shift) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * values_[i] + shift;
  return DensitySpec(Unchecked{}, kind_, knots_, std::move(v));
}

double condition_continuous_value(const DensitySpec& f, const DensitySpec& g) {
  return f.min() * f.length() + g.min() * g.length();
}

bool check_condition_continuous(const DensitySpec& f, const DensitySpec& g) {
  return condition_continuous_value(f, g) >= 1.0 - tol::kSumToOne;
}

ContinuousCoupling::ContinuousCoupling(DensitySpec f, DensitySpec g)
    : f_(std::move(f)), g_(std::move(g)), f_unit_(f_.normalized()), g_unit_(g_.normalized()) {
  const double h = condition_continuous_value(f_, g_);
  if (h < 1.0 - tol::kSumToOne)
    throw ConditionHViolation("continuous condition violated: min f + min g = " + fmt(h) + " < 1");
}

double density_eval(const ContinuousCoupling& c, double u, double v) {
  const double fu = c.f()(u), gv = c.g()(v);  // support checks
  (void)fu;
  (void)gv;
  const double lu = c.f().length(), lv = c.g().length();
  const double s = (u - c.f().lower()) / lu, t = (v - c.g().lower()) / lv;
  const double unit = c.f_unit()(std::clamp(s, 0.0, 1.0)) + c.g_unit()(std::clamp(t, 0.0, 1.0)) - 1.0;
  return unit / (lu * lv);
}

double cdf_eval(const ContinuousCoupling& c, double u, double v) {
  const double fu = c.f().cdf(u), gv = c.g().cdf(v);
  const double s = (u - c.f().lower()) / c.f().length(), t = (v - c.g().lower()) / c.g().length();
  return t * fu + s * gv - s * t;
}

double UncheckedContinuousCoupling::operator()(double u, double v) const {
  const double lu = upper_a - a, lv = upper_b - b;
  return f(u) / lv + g(v) / lu - 1.0 / (lu * lv);
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidInput("gauss_legendre: n must be positive");
  std::vector<double> x(n), w(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        const double jj = static_cast<double>(j);
        p0 = ((2.0 * jj - 1.0) * z * p1 - (jj - 1.0) * p2) / jj;
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

RecoveredMargins margins_of_density(const ContinuousCoupling& c, std::size_t n_quad) {
  if (n_quad < 16) throw InvalidInput("margins_of_density: n_quad must be at least 16");
  const auto [x, w] = gauss_legendre(n_quad);
  const auto& fk = c.f().knots();
  const auto& gk = c.g().knots();

  RecoveredMargins out{c.f(), c.g()};
  // The closed form integrates exactly; quadrature is the independent witness.
  for (std::size_t i = 0; i + 1 < fk.size(); ++i) {
    const double half = 0.5 * (fk[i + 1] - fk[i]), mid = 0.5 * (fk[i + 1] + fk[i]);
    for (double xi : x) {
      const double u = mid + half * xi;
      const double m = integrate(gk, x, w, [&](double v) { return density_eval(c, u, v); });
      out.max_error_f = std::max(out.max_error_f, std::abs(m - c.f()(u)));
    }
  }
  for (std::size_t i = 0; i + 1 < gk.size(); ++i) {
    const double half = 0.5 * (gk[i + 1] - gk[i]), mid = 0.5 * (gk[i + 1] + gk[i]);
    for (double xi : x) {
      const double v = mid + half * xi;
      const double m = integrate(fk, x, w, [&](double u) { return density_eval(c, u, v); });
      out.max_error_g = std::max(out.max_error_g, std::abs(m - c.g()(v)));
    }
  }
  out.total_mass = integrate(fk, x, w, [&](double u) {
    return integrate(gk, x, w, [&](double v) { return density_eval(c, u, v); });
  });
  return out;
}

std::pair<DensitySpec, DensitySpec> construct_margins(double alpha, const DensitySpec& r, const DensitySpec& s) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("construct_margins: alpha must lie in [0,1]");
  if (r.lower() != 0.0 || r.upper() != 1.0 || s.lower() != 0.0 || s.upper() != 1.0)
    throw InvalidInput("construct_margins: r and s must be supported on [0,1]");
  const DensitySpec f = r.affine(1.0 - alpha, alpha);
  const DensitySpec g = s.affine(alpha, 1.0 - alpha);
  return {DensitySpec(f.kind(), f.knots(), f.values()), DensitySpec(g.kind(), g.knots(), g.values())};
}

MarginDecomposition decompose_margins(const DensitySpec& f, const DensitySpec& g) {
  if (f.lower() != 0.0 || f.upper() != 1.0 || g.lower() != 0.0 || g.upper() != 1.0)
    throw InvalidInput("decompose_margins: f and g must be supported on [0,1]");
  MarginDecomposition out;
  out.alpha = std::min(f.min(), 1.0);
  if (out.alpha > 0.0 && out.alpha < 1.0) {
    out.r = f.affine(1.0 / (1.0 - out.alpha), -out.alpha / (1.0 - out.alpha));
    out.s = g.affine(1.0 / out.alpha, -(1.0 - out.alpha) / out.alpha);
  }
  return out;
}

double ProductPerturbation::operator()(double s, double t) const {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double freq = 2.0 * std::numbers::pi * static_cast<double>(k + 1);
    a += phi[k] * std::sin(freq * s);
    b += psi[k] * std::sin(freq * t);
  }
  return a * b;
}

double ProductPerturbation::energy() const {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    a += 0.5 * phi[k] * phi[k];
    b += 0.5 * psi[k] * psi[k];
  }
  return a * b;
}

ProductPerturbation ProductPerturbation::random(std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  ProductPerturbation h;
  for (double& a : h.phi) a = 2.0 * rng.uniform01() - 1.0;
  for (double& b : h.psi) b = 2.0 * rng.uniform01() - 1.0;
  return h;
}

double l2_energy(const ContinuousCoupling& c, const ProductPerturbation& h, double eps) {
  const auto [x, w] = gauss_legendre(16);
  const auto su = panels(c.f_unit().knots(), 8);
  const auto sv = panels(c.g_unit().knots(), 8);
  const auto& f = c.f_unit();
  const auto& g = c.g_unit();
  return integrate(su, x, w, [&](double s) {
    const double fs = f(s);
    return integrate(sv, x, w, [&](double t) {
      const double val = fs + g(t) - 1.0 + eps * h(s, t);
      return val * val;
    });
  });
}

double admissible_step(const ContinuousCoupling& c, const ProductPerturbation& h) {
  constexpr std::size_t kGrid = 200;
  double step = 1.0;
  for (std::size_t i = 0; i <= kGrid; ++i) {
    const double s = static_cast<double>(i) / kGrid;
    const double fs = c.f_unit()(s);
    for (std::size_t j = 0; j <= kGrid; ++j) {
      const double t = static_cast<double>(j) / kGrid;
      const double hv = h(s, t);
      if (hv >= 0.0) continue;
      const double base = std::max(0.0, fs + c.g_unit()(t) - 1.0);
      step = std::min(step, base / -hv);
    }
  }
  return 0.5 * step;
}

L2OptimalityReport l2_optimality_check(const ContinuousCoupling& c, std::uint64_t seed, std::size_t trials) {
  L2OptimalityReport report;
  report.passed = true;
  const double base = l2_energy(c, ProductPerturbation{}, 0.0);
  for (std::size_t k = 0; k < trials; ++k) {
    const auto h = ProductPerturbation::random(seed, k);
    L2OptimalityReport::Trial trial;
    trial.eps = admissible_step(c, h);
    trial.base = base;
    trial.perturbed = l2_energy(c, h, trial.eps);
    if (trial.perturbed < base - 1e-12 * std::max(1.0, base)) report.passed = false;
    report.trials.push_back(trial);
  }
  return report;
}

}  // namespace indet
