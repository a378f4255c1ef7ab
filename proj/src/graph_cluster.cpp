#include "indet/graph_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "indet/errors.hpp"
#include "indet/kernels.hpp"
#include "indet/rng.hpp"

namespace indet {

WeightedGraph::WeightedGraph(Matrix a) : a_(std::move(a)) {
  const std::size_t n = a_.rows();
  if (n == 0 || a_.cols() != n) throw InvalidInput("adjacency matrix must be square and non-empty");
  const double scale = std::max(a_.max_abs(), 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = a_(i, j);
      if (!std::isfinite(x) || x < 0.0) throw InvalidInput("edge weights must be finite and nonnegative");
      if (std::fabs(x - a_(j, i)) > 1e-12 * scale) throw InvalidInput("adjacency matrix must be symmetric");
    }
  }
  degrees_ = a_.row_sums();
  two_m_ = a_.total();
  if (!(two_m_ > 0.0)) throw InvalidInput("graph total weight 2M must be positive");
}

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Matrix a(n, n);
  for (const Edge& e : edges) {
    if (e.i >= n || e.j >= n) throw InvalidInput("edge endpoint outside [0, n)");
    a(e.i, e.j) += e.weight;
    if (e.i != e.j) a(e.j, e.i) += e.weight;
  }
  return WeightedGraph(std::move(a));
}

Partition::Partition(std::vector<std::size_t> labels) : labels_(std::move(labels)) {
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (auto& l : labels_) {
    auto [it, inserted] = renumber.try_emplace(l, renumber.size());
    l = it->second;
  }
  classes_ = renumber.size();
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return Partition(std::move(labels));
}

Partition Partition::single_class(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

bool is_equivalence_relation(const RelationalMatrix& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!x(i, i)) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (x(i, j) != x(j, i)) return false;
      if (!x(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (x(j, k) && !x(i, k)) return false;
    }
  }
  return true;
}

LocalWeights local_weights_independence(const WeightedGraph& g) {
  const std::size_t n = g.n();
  const double two_m = g.two_m();
  const auto& deg = g.degrees();
  LocalWeights out{Matrix(n, n)};
  const auto& k = simd::active();
  for (std::size_t i = 0; i < n; ++i)
    k.affine_combine(out.w.row(i).data(), 1.0 / two_m, g.adjacency().row(i).data(),
                     deg[i] / (two_m * two_m), deg.data(), 0.0, n);
  return out;
}

LocalWeights local_weights_indetermination(const WeightedGraph& g) {
  const std::size_t n = g.n();
  const double nd = static_cast<double>(n);
  const double two_m = g.two_m();
  const auto& deg = g.degrees();
  LocalWeights out{Matrix(n, n)};
  const auto& k = simd::active();
  for (std::size_t i = 0; i < n; ++i)
    k.affine_combine(out.w.row(i).data(), 1.0, g.adjacency().row(i).data(), 1.0 / nd, deg.data(),
                     two_m / (nd * nd) - deg[i] / nd, n);
  return out;
}

double global_score(const LocalWeights& w, const Partition& part, bool include_diagonal) {
  const std::size_t n = w.n();
  if (part.size() != n || w.w.cols() != n) throw InvalidInput("partition size does not match the weights");
  // Bucket members per class, then sum each class block.
  std::vector<std::vector<std::size_t>> members(part.class_count());
  for (std::size_t i = 0; i < n; ++i) members[part[i]].push_back(i);
  double s = 0.0;
  for (const auto& cls : members)
    for (std::size_t i : cls)
      for (std::size_t j : cls)
        if (include_diagonal || i != j) s += w.w(i, j);
  return s;
}

namespace {

double trace(const Matrix& w) {
  double t = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) t += w(i, i);
  return t;
}

/// One level of local moves on a (possibly aggregated) weight matrix. Returns
/// true if any node moved. `objective` tracks the off-diagonal same-class sum.
bool local_moves(const Matrix& links, std::vector<std::size_t>& comm, Rng& rng, double& objective,
                 double diagonal, std::vector<double>& trace_out) {
  const std::size_t n = links.rows();
  std::vector<std::size_t> sizes(n, 0);
  for (auto c : comm) ++sizes[c];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> acc(n, 0.0);
  const double eps = 1e-12 * std::max(links.max_abs(), std::numeric_limits<double>::min());

  bool any = false;
  for (std::size_t sweep = 0; sweep < 10000; ++sweep) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    bool moved = false;
    for (std::size_t i : order) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) acc[comm[j]] += links(i, j) + links(j, i);
      const std::size_t from = comm[i];
      --sizes[from];
      std::size_t best = from;
      double best_gain = acc[from];
      bool empty_seen = false;
      // Ascending scan with strict improvement keeps the smallest index on ties.
      for (std::size_t c = 0; c < n; ++c) {
        if (c == from) continue;
        if (sizes[c] == 0) {
          if (empty_seen) continue;
          empty_seen = true;
        }
        if (acc[c] > best_gain + eps) {
          best = c;
          best_gain = acc[c];
        }
      }
      if (best != from) {
        objective += best_gain - acc[from];
        comm[i] = best;
        moved = true;
      }
      ++sizes[comm[i]];
    }
    trace_out.push_back(objective + diagonal);
    if (!moved) break;
    any = true;
  }
  return any;
}

}  // namespace

LouvainResult louvain(const LocalWeights& w, const LouvainOptions& options) {
  const std::size_t n = w.n();
  if (n == 0 || w.w.cols() != n) throw InvalidInput("local weights must be a non-empty square matrix");
  if (options.max_passes < 1) throw InvalidInput("max_passes must be >= 1");

  const double diagonal = options.include_diagonal ? trace(w.w) : 0.0;
  Rng rng(options.seed);
  LouvainResult result;

  std::vector<std::size_t> vertex_comm(n);
  std::iota(vertex_comm.begin(), vertex_comm.end(), std::size_t{0});
  Matrix links = w.w;
  double objective = 0.0;

  while (result.passes < options.max_passes) {
    const std::size_t k = links.rows();
    std::vector<std::size_t> comm(k);
    std::iota(comm.begin(), comm.end(), std::size_t{0});
    const bool moved = local_moves(links, comm, rng, objective, diagonal, result.trace);
    ++result.passes;
    if (!moved) break;

    // Aggregate: node c of the next level is a class of this level.
    const Partition level(comm);
    const std::size_t kk = level.class_count();
    Matrix next(kk, kk);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) next(level[a], level[b]) += links(a, b);
    for (auto& c : vertex_comm) c = level[c];
    // Intra-class weight moves onto the aggregated diagonal, which local moves never count.
    double intra = 0.0;
    for (std::size_t c = 0; c < kk; ++c) intra += next(c, c);
    objective = intra - trace(w.w);
    links = std::move(next);
    if (kk == 1) break;
  }

  // Vertex-level refinement of the flattened partition.
  {
    std::vector<std::size_t> comm = Partition(vertex_comm).labels();
    double refined = global_score(w, Partition(comm), false);
    local_moves(w.w, comm, rng, refined, diagonal, result.trace);
    vertex_comm = std::move(comm);
  }

  result.partition = Partition(vertex_comm);
  result.score = global_score(w, result.partition, options.include_diagonal);
  return result;
}

std::pair<Partition, double> brute_force_best(const LocalWeights& w, std::size_t n_max, bool include_diagonal) {
  const std::size_t n = w.n();
  if (n == 0) throw InvalidInput("local weights must be non-empty");
  if (n > n_max) throw SizeExceeded("brute force limited to n <= " + std::to_string(n_max) + ", got " + std::to_string(n));

  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_labels;
  const double diagonal = include_diagonal ? trace(w.w) : 0.0;
  for_each_set_partition(n, [&](const std::vector<std::size_t>& rgs) {
    double s = diagonal;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rgs[i] == rgs[j]) s += w.w(i, j) + w.w(j, i);
    if (s > best) {
      best = s;
      best_labels = rgs;
    }
  });
  return {Partition(std::move(best_labels)), best};
}

}  // namespace indet
