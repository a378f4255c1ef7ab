#include "indet/task_partition.hpp"

#include <algorithm>
#include <cmath>

#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/guessing.hpp"
#include "indet/rng.hpp"

namespace indet {

TaskPartition::TaskPartition(std::vector<std::size_t> assignment, std::size_t workers)
    : assignment_(std::move(assignment)), workers_(workers) {
  if (assignment_.empty()) throw InvalidInput("task partition needs at least one task");
  if (workers_ == 0 || workers_ > assignment_.size())
    throw InvalidInput("worker count must lie in [1, number of tasks]");
  for (auto w : assignment_)
    if (w >= workers_) throw InvalidInput("task assigned to a worker outside [0, workers)");
}

TaskPartition::TaskPartition(std::vector<std::size_t> assignment)
    : TaskPartition(assignment, assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1) {}

std::vector<std::size_t> TaskPartition::class_sizes() const {
  std::vector<std::size_t> sizes(workers_, 0);
  for (auto w : assignment_) ++sizes[w];
  return sizes;
}

std::size_t TaskPartition::empty_workers() const {
  const auto sizes = class_sizes();
  return static_cast<std::size_t>(std::count(sizes.begin(), sizes.end(), std::size_t{0}));
}

namespace {

void check_sizes(const Margin& mu, const TaskPartition& part) {
  if (mu.size() != part.tasks()) throw InvalidInput("margin and task partition differ in length");
}

}  // namespace

ClassSizeMoment class_size_moment(const Margin& mu, const TaskPartition& part, double rho) {
  check_sizes(mu, part);
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  const auto sizes = part.class_sizes();
  ClassSizeMoment out;
  for (std::size_t u = 0; u < mu.size(); ++u)
    out.value += mu[u] * std::pow(static_cast<double>(sizes[part.worker_of(u)]), rho);
  out.empty_workers = part.empty_workers();
  return out;
}

namespace {

double moment_core(const Margin& mu, std::size_t q, double rho) {
  if (q < 1 || q > mu.size()) throw InvalidInput("worker count must lie in [1, p]");
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  double s = 0.0;
  for (double m : mu.values()) s += std::pow(m, 1.0 / (1.0 + rho));
  return std::pow(s, 1.0 + rho);
}

}  // namespace

// Hoelder with exponents (1+rho)/1 and (1+rho)/rho on mu^(1/(1+rho)) = (mu A^rho)^(1/(1+rho)) A^(-rho/(1+rho)),
// using sum_u 1/A(u) = number of nonempty classes <= q.
double partition_moment_bound(const Margin& mu, std::size_t q, double rho) {
  return moment_core(mu, q, rho) / std::pow(static_cast<double>(q), rho);
}

double partition_moment_bound_unit_power(const Margin& mu, std::size_t q, double rho) {
  return moment_core(mu, q, rho) / static_cast<double>(q);
}

InducedCoupling induced_coupling(const Margin& mu, const TaskPartition& part) {
  check_sizes(mu, part);
  Matrix cells(mu.size(), part.workers());
  for (std::size_t u = 0; u < mu.size(); ++u) cells(u, part.worker_of(u)) = mu[u];
  JointDistribution pi(std::move(cells));
  Margin nu = pi.col_margin();
  return {std::move(pi), std::move(nu)};
}

PartitionOneShot partition_one_shot_bound(const Margin& mu, const TaskPartition& part) {
  check_sizes(mu, part);
  const auto induced = induced_coupling(mu, part);

  // Keep workers with positive mass only.
  std::vector<std::size_t> kept;
  for (std::size_t w = 0; w < part.workers(); ++w)
    if (induced.nu[w] > 0.0) kept.push_back(w);
  PartitionOneShot out;
  out.dropped_workers = part.workers() - kept.size();

  Matrix reduced(mu.size(), kept.size());
  for (std::size_t u = 0; u < mu.size(); ++u)
    for (std::size_t k = 0; k < kept.size(); ++k) reduced(u, k) = induced.pi(u, kept[k]);
  const JointDistribution pi_a(std::move(reduced));
  const Margin& nu_a = pi_a.col_margin();

  const GuessingInstance instance(pi_a, 1.0);
  out.m_value = one_shot(instance, Strategy::random_by_posterior());
  const double max_nu = nu_a.max();
  out.bound_pi_a = couple_matching_probability(pi_a) / max_nu;
  const SignedCouplingMatrix indet = indetermination_closed_form(mu, nu_a);
  out.condition_h = check_condition_h(mu, nu_a);
  out.bound_indet = squared_norm(indet.cells) / max_nu;
  return out;
}

double simulate_tasks_until_done(const Margin& mu, const TaskPartition& part, std::size_t samples,
                                 std::uint64_t seed, std::uint64_t stream) {
  check_sizes(mu, part);
  if (samples == 0) throw InvalidInput("simulation needs at least one sample");
  const auto induced = induced_coupling(mu, part);
  const GuessingInstance instance(induced.pi, 1.0);
  return rho_moment_monte_carlo(instance, Strategy::random_by_posterior(), samples, seed, stream);
}

}  // namespace indet
