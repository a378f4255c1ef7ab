#pragma once

// Continuous indetermination on a rectangle [a,A] x [b,B]:
//   c(u,v) = f(u)/(B-b) + g(v)/(A-a) - 1/((A-a)(B-b))
// Formulas are evaluated on [0,1]^2 after affine normalization, where they read
// c = f + g - 1 and H(s,t) = t F(s) + s G(t) - s t.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace indet {

enum class DensityKind { PiecewiseConstant, PiecewiseLinear };

/// Density with closed-form minimum, integral and CDF.
///   PiecewiseConstant: values[i] on [knots[i], knots[i+1]); values.size() == knots.size() - 1
///   PiecewiseLinear:   continuous, values[i] at knots[i];   values.size() == knots.size()
/// knots run from the lower to the upper end of the support.
class DensitySpec {
 public:
  DensitySpec(DensityKind kind, std::vector<double> knots, std::vector<double> values);

  static DensitySpec uniform(double lower = 0.0, double upper = 1.0);
  /// Linear from `left` at `lower` to `right` at `upper`.
  static DensitySpec linear(double left, double right, double lower = 0.0, double upper = 1.0);

  DensityKind kind() const noexcept { return kind_; }
  double lower() const noexcept { return knots_.front(); }
  double upper() const noexcept { return knots_.back(); }
  double length() const noexcept { return upper() - lower(); }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Throws OutOfSupport outside [lower, upper].
  double operator()(double x) const;
  double cdf(double x) const;
  double integral() const;
  double min() const;

  /// Same law expressed on [0,1]: x -> length * f(lower + x * length).
  DensitySpec normalized() const;
  /// scale * f + shift on the same knots. Not revalidated as a density.
  DensitySpec affine(double scale, double shift) const;

  friend bool operator==(const DensitySpec&, const DensitySpec&) = default;

 private:
  struct Unchecked {};
  DensitySpec(Unchecked, DensityKind kind, std::vector<double> knots, std::vector<double> values)
      : kind_(kind), knots_(std::move(knots)), values_(std::move(values)) {}
  std::size_t piece(double x) const;

  DensityKind kind_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// min f + min g after normalization to [0,1].
double condition_continuous_value(const DensitySpec& f, const DensitySpec& g);
bool check_condition_continuous(const DensitySpec& f, const DensitySpec& g);

class ContinuousCoupling {
 public:
  /// Throws ConditionHViolation when the coupling density would go negative.
  ContinuousCoupling(DensitySpec f, DensitySpec g);

  const DensitySpec& f() const noexcept { return f_; }
  const DensitySpec& g() const noexcept { return g_; }
  /// Margins rescaled to [0,1].
  const DensitySpec& f_unit() const noexcept { return f_unit_; }
  const DensitySpec& g_unit() const noexcept { return g_unit_; }

 private:
  DensitySpec f_;
  DensitySpec g_;
  DensitySpec f_unit_;
  DensitySpec g_unit_;
};

/// Throws OutOfSupport outside the rectangle.
double density_eval(const ContinuousCoupling& c, double u, double v);
double cdf_eval(const ContinuousCoupling& c, double u, double v);

/// Same formula on arbitrary callables, with no feasibility or normalization guarantee.
struct UncheckedContinuousCoupling {
  std::function<double(double)> f;
  std::function<double(double)> g;
  double a = 0.0, upper_a = 1.0, b = 0.0, upper_b = 1.0;
  double operator()(double u, double v) const;
};

struct RecoveredMargins {
  /// Closed-form margins of the coupling density.
  DensitySpec f;
  DensitySpec g;
  /// Quadrature cross-check: largest |integral of c over one axis - margin| at the nodes.
  double max_error_f = 0.0;
  double max_error_g = 0.0;
  double total_mass = 0.0;
};

/// n_quad Gauss-Legendre nodes per piece, n_quad >= 16.
RecoveredMargins margins_of_density(const ContinuousCoupling& c, std::size_t n_quad = 16);

/// f = (1-alpha) r + alpha, g = alpha s + 1 - alpha, for r, s densities on [0,1].
std::pair<DensitySpec, DensitySpec> construct_margins(double alpha, const DensitySpec& r, const DensitySpec& s);

struct MarginDecomposition {
  double alpha = 0.0;
  /// Present when 0 < alpha < 1; at the ends one margin is uniform.
  std::optional<DensitySpec> r;
  std::optional<DensitySpec> s;
};

/// Inverse of construct_margins with alpha = min f. Both inputs on [0,1].
MarginDecomposition decompose_margins(const DensitySpec& f, const DensitySpec& g);

/// h(s,t) = phi(s) psi(t) with phi, psi sums of sin(2 pi k x), k = 1..3:
/// zero mean (so zero margins) and zero on the boundary.
struct ProductPerturbation {
  std::array<double, 3> phi{};
  std::array<double, 3> psi{};
  double operator()(double s, double t) const;
  /// Integral of h^2 over [0,1]^2.
  double energy() const;
  static ProductPerturbation random(std::uint64_t seed, std::uint64_t stream);
};

/// Integral over [0,1]^2 of (c + eps h)^2, c the normalized coupling density.
double l2_energy(const ContinuousCoupling& c, const ProductPerturbation& h, double eps);

/// Largest eps (times a safety factor) keeping c + eps h >= 0 on a fine grid.
double admissible_step(const ContinuousCoupling& c, const ProductPerturbation& h);

struct L2OptimalityReport {
  struct Trial {
    double eps = 0.0;
    double base = 0.0;
    double perturbed = 0.0;
  };
  bool passed = false;
  std::vector<Trial> trials;
};

/// Checks that admissible zero-margin perturbations never lower the L2 energy of the coupling.
L2OptimalityReport l2_optimality_check(const ContinuousCoupling& c, std::uint64_t seed, std::size_t trials = 20);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n);

}  // namespace indet
