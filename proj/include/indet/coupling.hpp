#pragma once

// The two canonical couplings of a pair of discrete margins, their divergences
// to the uniform law, and the Full-Monge characterization of indetermination.
//
//   independence     pi_x(u,v) = mu_u * nu_v                     (KL projection of uniform)
//   indetermination  pi_+(u,v) = mu_u / q + nu_v / p - 1 / (pq)  (L2 projection of uniform)

#include <cstdint>
#include <string_view>
#include <utility>

#include "indet/matrix.hpp"

namespace indet {

enum class CouplingKind { Independence, Indetermination };

std::string_view to_string(CouplingKind kind);

JointDistribution independence_coupling(const Margin& mu, const Margin& nu);

/// Closed form without the positivity requirement. Always succeeds.
SignedCouplingMatrix indetermination_closed_form(const Margin& mu, const Margin& nu);

/// Strict variant: throws ConditionHViolation unless p*min(mu) + q*min(nu) >= 1 - 1e-12.
/// Cells within rounding of zero are clamped to zero.
JointDistribution indetermination_coupling(const Margin& mu, const Margin& nu);

/// p*min(mu) + q*min(nu); the quantity compared against 1.
double condition_h_value(const Margin& mu, const Margin& nu);
bool check_condition_h(const Margin& mu, const Margin& nu);

/// sum pi log(pq pi), with 0 log 0 = 0.
double divergence_kl_to_uniform(const JointDistribution& pi);
/// pq * sum (pi - 1/pq)^2 = pq * ||pi||^2 - 1.
double divergence_l2_to_uniform(const JointDistribution& pi);
/// Probability that two independent draws from pi coincide: ||pi||_2^2.
double couple_matching_probability(const JointDistribution& pi);
/// Sum of squared cells of an arbitrary (possibly signed) matrix.
double squared_norm(const Matrix& cells);

/// Largest adjacent 2x2 residual |c(u,v) + c(u+1,v+1) - c(u+1,v) - c(u,v+1)|. O(pq).
double full_monge_residual(const Matrix& cells);
/// True iff every adjacent residual is within rel_tol * max|cell|.
bool is_full_monge(const Matrix& cells, double rel_tol = tol::kFullMongeRelative);

/// Adds a random zero-margin matrix built from 2x2 swap moves that never push
/// mass out of an empty cell. `amplitude` bounds the largest cell change; the
/// step is clipped so every cell stays nonnegative. Throws DegenerateInput when
/// amplitude > 0 but no admissible move exists.
JointDistribution perturb_coupling(const JointDistribution& pi, std::uint64_t seed, double amplitude);

/// mu = (1-alpha) r + alpha/p, nu = alpha s + (1-alpha)/q; always satisfies condition (H).
std::pair<Margin, Margin> generate_feasible_margins(double alpha, const Margin& r, const Margin& s);

}  // namespace indet
