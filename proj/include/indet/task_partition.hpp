#pragma once

// Task partitioning: p tasks split among q workers. Requesting task u launches
// its whole class A_{i(u)}; the one-shot view treats the worker as an
// observation that is a deterministic function of the task.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "indet/matrix.hpp"

namespace indet {

class TaskPartition {
 public:
  /// assignment[u] is the worker (in [0, workers)) of task u; workers <= p.
  TaskPartition(std::vector<std::size_t> assignment, std::size_t workers);
  /// Worker count taken as 1 + max assignment.
  explicit TaskPartition(std::vector<std::size_t> assignment);

  std::size_t tasks() const noexcept { return assignment_.size(); }
  std::size_t workers() const noexcept { return workers_; }
  std::size_t worker_of(std::size_t u) const { return assignment_[u]; }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
  /// |A_w| for each worker.
  std::vector<std::size_t> class_sizes() const;
  std::size_t empty_workers() const;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t workers_;
};

struct ClassSizeMoment {
  /// sum_u mu_u |A_{i(u)}|^rho
  double value = 0.0;
  /// Workers without tasks. Allowed; reported as a warning.
  std::size_t empty_workers = 0;
};

ClassSizeMoment class_size_moment(const Margin& mu, const TaskPartition& part, double rho);

/// q^(-rho) [sum_u mu_u^(1/(1+rho))]^(1+rho), a floor for class_size_moment over all
/// partitions into at most q classes.
double partition_moment_bound(const Margin& mu, std::size_t q, double rho);
/// The same expression with 1/q in place of q^(-rho). Equal to partition_moment_bound at
/// rho = 1; larger for rho > 1, where it is not a valid floor (p = q = 2, uniform mu, rho = 2:
/// value 2 against a singleton moment of 1).
double partition_moment_bound_unit_power(const Margin& mu, std::size_t q, double rho);

struct InducedCoupling {
  /// pi_A(u, w) = mu_u if task u belongs to worker w, else 0. p x workers.
  JointDistribution pi;
  /// nu_A(w) = sum of mu over the tasks of worker w.
  Margin nu;
};

InducedCoupling induced_coupling(const Margin& mu, const TaskPartition& part);

struct PartitionOneShot {
  /// One-shot success probability of posterior-random guessing on pi_A.
  double m_value = 0.0;
  /// ||pi_A||^2 / max nu_A
  double bound_pi_a = 0.0;
  /// ||C+(mu, nu_A)||^2 / max nu_A, with the signed closed form when condition (H) fails.
  double bound_indet = 0.0;
  bool condition_h = false;
  /// Workers with zero mass, dropped from nu_A.
  std::size_t dropped_workers = 0;
};

PartitionOneShot partition_one_shot_bound(const Margin& mu, const TaskPartition& part);

/// Seeded estimate of E[N(U)], the number of tasks a worker performs up to and
/// including the requested one when it works through its class in
/// posterior-random order. No bound is claimed for it.
double simulate_tasks_until_done(const Margin& mu, const TaskPartition& part, std::size_t samples,
                                 std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace indet
