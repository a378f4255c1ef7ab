#include "indet/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "indet/errors.hpp"
#include "indet/kernels.hpp"
#include "indet/rng.hpp"

namespace indet {

std::string_view to_string(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::Independence: return "independence";
    case CouplingKind::Indetermination: return "indetermination";
  }
  return "unknown";
}

JointDistribution independence_coupling(const Margin& mu, const Margin& nu) {
  const std::size_t p = mu.size();
  const std::size_t q = nu.size();
  Matrix cells(p, q);
  const auto& k = simd::active();
  for (std::size_t u = 0; u < p; ++u) k.mul_outer(cells.row(u).data(), mu[u], nu.values().data(), q);
  return JointDistribution(std::move(cells));
}

SignedCouplingMatrix indetermination_closed_form(const Margin& mu, const Margin& nu) {
  const std::size_t p = mu.size();
  const std::size_t q = nu.size();
  const double pd = static_cast<double>(p);
  const double qd = static_cast<double>(q);
  const double shift = 1.0 / (pd * qd);

  std::vector<double> col_terms(q);
  for (std::size_t v = 0; v < q; ++v) col_terms[v] = nu[v] / pd;

  SignedCouplingMatrix out{Matrix(p, q), false};
  const auto& k = simd::active();
  for (std::size_t u = 0; u < p; ++u)
    k.add_outer(out.cells.row(u).data(), mu[u] / qd, col_terms.data(), shift, q);
  out.feasible = out.cells.min() >= -tol::kNegativeSlack;
  return out;
}

double condition_h_value(const Margin& mu, const Margin& nu) {
  return static_cast<double>(mu.size()) * mu.min() + static_cast<double>(nu.size()) * nu.min();
}

bool check_condition_h(const Margin& mu, const Margin& nu) {
  return condition_h_value(mu, nu) >= 1.0 - tol::kNegativeSlack;
}

JointDistribution indetermination_coupling(const Margin& mu, const Margin& nu) {
  const double h = condition_h_value(mu, nu);
  if (h < 1.0 - tol::kNegativeSlack) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "condition (H) violated: p*min(mu) + q*min(nu) = " << h << " < 1";
    throw ConditionHViolation(msg.str());
  }
  SignedCouplingMatrix signed_form = indetermination_closed_form(mu, nu);
  for (double& x : signed_form.cells.values()) x = std::max(x, 0.0);
  return JointDistribution(std::move(signed_form.cells));
}

double divergence_kl_to_uniform(const JointDistribution& pi) {
  const double pq = static_cast<double>(pi.rows() * pi.cols());
  double s = 0.0;
  for (double x : pi.cells().values())
    if (x > 0.0) s += x * std::log(pq * x);
  return std::max(s, 0.0);
}

double squared_norm(const Matrix& cells) {
  return simd::active().sum_squares(cells.values().data(), cells.size());
}

double couple_matching_probability(const JointDistribution& pi) { return squared_norm(pi.cells()); }

double divergence_l2_to_uniform(const JointDistribution& pi) {
  const double pq = static_cast<double>(pi.rows() * pi.cols());
  const double shift = 1.0 / pq;
  // Direct form keeps full relative precision near the minimum (pq||pi||^2 - 1 cancels).
  std::vector<double> uniform(pi.cells().size(), shift);
  return pq * simd::active().sum_sq_diff(pi.cells().values().data(), uniform.data(), uniform.size());
}

double full_monge_residual(const Matrix& cells) {
  const auto& k = simd::active();
  double r = 0.0;
  for (std::size_t u = 0; u + 1 < cells.rows(); ++u)
    r = std::max(r, k.adjacent_residual(cells.row(u).data(), cells.row(u + 1).data(), cells.cols()));
  return r;
}

bool is_full_monge(const Matrix& cells, double rel_tol) {
  if (cells.rows() < 2 || cells.cols() < 2) return true;
  const double scale = cells.max_abs();
  if (scale == 0.0) return true;
  return full_monge_residual(cells) <= rel_tol * scale;
}

JointDistribution perturb_coupling(const JointDistribution& pi, std::uint64_t seed, double amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw InvalidInput("amplitude must be >= 0");
  const std::size_t p = pi.rows();
  const std::size_t q = pi.cols();
  if (amplitude == 0.0 || p < 2 || q < 2) return pi;

  const Matrix& base = pi.cells();
  Rng rng(seed);
  Matrix step(p, q);
  const std::size_t moves = 4 * p * q;
  std::size_t accepted = 0;
  for (std::size_t m = 0; m < moves; ++m) {
    const auto u0 = static_cast<std::size_t>(rng.below(p));
    auto u1 = static_cast<std::size_t>(rng.below(p - 1));
    if (u1 >= u0) ++u1;
    const auto v0 = static_cast<std::size_t>(rng.below(q));
    auto v1 = static_cast<std::size_t>(rng.below(q - 1));
    if (v1 >= v0) ++v1;
    // +t on (u0,v0),(u1,v1); -t on (u0,v1),(u1,v0). Flip when the losing cells are empty.
    double sign = rng.uniform01() < 0.5 ? 1.0 : -1.0;
    const bool anti_ok = base(u0, v1) > 0.0 && base(u1, v0) > 0.0;
    const bool diag_ok = base(u0, v0) > 0.0 && base(u1, v1) > 0.0;
    if (sign > 0.0 && !anti_ok) sign = -1.0;
    if (sign < 0.0 && !diag_ok) sign = anti_ok ? 1.0 : 0.0;
    if (sign == 0.0) continue;
    const double t = sign * (0.5 + rng.uniform01());
    step(u0, v0) += t;
    step(u1, v1) += t;
    step(u0, v1) -= t;
    step(u1, v0) -= t;
    ++accepted;
  }
  const double step_scale = step.max_abs();
  if (accepted == 0 || step_scale == 0.0) {
    throw DegenerateInput("no zero-margin perturbation keeps every cell of the coupling nonnegative");
  }

  // Largest s with base + s*step >= 0.
  double s = amplitude / step_scale;
  const auto b = base.values();
  const auto d = step.values();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (d[i] < 0.0) s = std::min(s, b[i] / -d[i]);

  Matrix out(p, q);
  auto o = out.values();
  for (std::size_t i = 0; i < b.size(); ++i) o[i] = std::max(b[i] + s * d[i], 0.0);
  return JointDistribution(std::move(out));
}

std::pair<Margin, Margin> generate_feasible_margins(double alpha, const Margin& r, const Margin& s) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  const std::size_t p = r.size();
  const std::size_t q = s.size();
  std::vector<double> mu(p);
  std::vector<double> nu(q);
  for (std::size_t u = 0; u < p; ++u) mu[u] = (1.0 - alpha) * r[u] + alpha / static_cast<double>(p);
  for (std::size_t v = 0; v < q; ++v) nu[v] = alpha * s[v] + (1.0 - alpha) / static_cast<double>(q);
  return {Margin::normalized(std::move(mu)), Margin::normalized(std::move(nu))};
}

}  // namespace indet
