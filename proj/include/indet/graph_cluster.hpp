#pragma once

// Graph clustering as maximization of W(w, X) = sum_{i,j} w(i,j) X(i,j) over
// equivalence relations X, for two local weightings of a weighted graph:
//   w_x(i,j) = a(i,j)/2M - a(i,.) a(.,j) / (2M)^2           (Newman-Girvan, deviation to independence)
//   w_+(i,j) = a(i,j) - a(i,.)/n - a(.,j)/n + 2M/n^2        (deviation to indetermination)

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "indet/association.hpp"
#include "indet/matrix.hpp"

namespace indet {

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;
};

class WeightedGraph {
 public:
  /// `a` must be square, symmetric, nonnegative, with positive total weight.
  explicit WeightedGraph(Matrix a);
  /// Undirected edge list, each edge listed once; self-loops add to a(i,i) once.
  static WeightedGraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t n() const noexcept { return a_.rows(); }
  const Matrix& adjacency() const noexcept { return a_; }
  /// 2M = sum_{i,j} a(i,j)
  double two_m() const noexcept { return two_m_; }
  const std::vector<double>& degrees() const noexcept { return degrees_; }

 private:
  Matrix a_;
  double two_m_ = 0.0;
  std::vector<double> degrees_;
};

/// Class labels over n items, renumbered 0..k-1 in order of first appearance.
class Partition {
 public:
  explicit Partition(std::vector<std::size_t> labels);
  static Partition singletons(std::size_t n);
  static Partition single_class(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t class_count() const noexcept { return classes_; }
  std::size_t operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  RelationalMatrix to_relation() const { return relational_encode(labels_); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t classes_ = 0;
};

/// Reflexive, symmetric, and X(i,j) + X(j,k) - X(i,k) <= 1 for all triples. O(n^3).
bool is_equivalence_relation(const RelationalMatrix& x);

struct LocalWeights {
  Matrix w;
  std::size_t n() const noexcept { return w.rows(); }
};

LocalWeights local_weights_independence(const WeightedGraph& g);
LocalWeights local_weights_indetermination(const WeightedGraph& g);

/// Sum of w(i,j) over same-class ordered pairs. The i == j terms are the same
/// for every partition; `include_diagonal` only shifts the score by trace(w).
double global_score(const LocalWeights& w, const Partition& part, bool include_diagonal = true);

struct LouvainOptions {
  std::uint64_t seed = 0;
  std::size_t max_passes = 32;
  bool include_diagonal = true;
};

struct LouvainResult {
  Partition partition{std::vector<std::size_t>{}};
  double score = 0.0;
  /// Aggregation levels performed.
  std::size_t passes = 0;
  /// Score after every local-move sweep; nondecreasing.
  std::vector<double> trace;
};

/// Local moves with aggregation, repeated until no improvement or max_passes,
/// then a final vertex-level sweep so no single relocation improves the score.
/// Ties in move gain go to the smallest class index. Deterministic given the seed.
LouvainResult louvain(const LocalWeights& w, const LouvainOptions& options = {});

/// Exact maximizer by enumerating set partitions (Bell(n) of them). Throws SizeExceeded when n > n_max.
std::pair<Partition, double> brute_force_best(const LocalWeights& w, std::size_t n_max = 10,
                                              bool include_diagonal = true);

/// Calls `visit` with every set partition of n items as a restricted growth string.
template <class Visit>
void for_each_set_partition(std::size_t n, Visit&& visit) {
  if (n == 0) return;
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max of rgs[0..i]
  for (;;) {
    visit(static_cast<const std::vector<std::size_t>&>(rgs));
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

}  // namespace indet
