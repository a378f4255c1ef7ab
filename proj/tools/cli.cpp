#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "indet/association.hpp"
#include "indet/continuous.hpp"
#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/graph_cluster.hpp"
#include "indet/guessing.hpp"
#include "indet/io.hpp"
#include "indet/rng.hpp"
#include "indet/sampler.hpp"
#include "indet/task_partition.hpp"

namespace indet::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// Options shared by every subcommand.
struct Common {
  bool json_out = false;
  bool csv_out = false;
  bool header = false;
  std::string output_dir;
};

// State of one invocation, filled by the subcommand and turned into the report.
struct Run {
  std::string command;
  json inputs = json::object();
  std::optional<std::uint64_t> seed;
  bool stochastic = false;
  json outputs = json::object();
  // Written to stdout instead of the report when --csv is given.
  std::string csv;
  // Extra files for the output directory, by name.
  std::vector<std::pair<std::string, std::string>> artifacts;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

void record_input(Run& run, const std::string& name, const std::string& path) {
  run.inputs[name] = {{"path", path}, {"sha256", sha256_file(path)}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  io::write_matrix_csv(os, m);
  return os.str();
}

void check_margins(const Matrix& cells, const Margin& mu, const Margin& nu) {
  const auto rows = cells.row_sums();
  const auto cols = cells.col_sums();
  for (std::size_t u = 0; u < mu.size(); ++u)
    if (std::abs(rows[u] - mu[u]) > tol::kMargin) throw ToleranceBreach("row margin of the coupling drifted");
  for (std::size_t v = 0; v < nu.size(); ++v)
    if (std::abs(cols[v] - nu[v]) > tol::kMargin) throw ToleranceBreach("column margin of the coupling drifted");
}

bool has_extension(const std::string& path, const char* ext) {
  return fs::path(path).extension() == ext;
}

JointDistribution read_joint(const std::string& path, bool header) {
  if (has_extension(path, ".json")) return io::read_joint_json(path);
  return JointDistribution(io::read_matrix_csv(path, header));
}

Matrix read_any_matrix(const std::string& path, bool header) {
  if (has_extension(path, ".json")) {
    const json j = io::read_json_file(path);
    return io::matrix_from_json(j.is_object() ? j.at("cells") : j);
  }
  return io::read_matrix_csv(path, header);
}

json one_based(const std::vector<std::size_t>& labels) {
  json out = json::array();
  for (auto l : labels) out.push_back(l + 1);
  return out;
}

// ---------------------------------------------------------------- subcommands

struct CoupleArgs {
  std::string kind = "plus";
  std::string mu, nu;
  bool normalize = false;
  bool allow_signed = false;
};

void run_couple(const CoupleArgs& a, const Common& c, Run& run) {
  record_input(run, "mu", a.mu);
  record_input(run, "nu", a.nu);
  const Margin mu = io::read_margin_csv(a.mu, a.normalize, c.header);
  const Margin nu = io::read_margin_csv(a.nu, a.normalize, c.header);
  const bool plus = a.kind == "plus";

  Matrix cells;
  std::optional<JointDistribution> joint;
  if (!plus) {
    joint = independence_coupling(mu, nu);
  } else if (a.allow_signed) {
    auto s = indetermination_closed_form(mu, nu);
    if (s.feasible) joint = indetermination_coupling(mu, nu);
    else cells = std::move(s.cells);
  } else {
    joint = indetermination_coupling(mu, nu);
  }
  if (joint) cells = joint->cells();
  check_margins(cells, mu, nu);

  json& o = run.outputs;
  o["kind"] = plus ? "plus" : "times";
  o["cells"] = io::matrix_to_json(cells);
  o["row_margin"] = mu.values();
  o["col_margin"] = nu.values();
  o["condition_h"] = check_condition_h(mu, nu);
  o["condition_h_value"] = condition_h_value(mu, nu);
  o["feasible"] = joint.has_value();
  o["full_monge"] = is_full_monge(cells);
  o["couple_matching_probability"] = squared_norm(cells);
  if (joint) {
    o["divergence_l2_to_uniform"] = divergence_l2_to_uniform(*joint);
    o["divergence_kl_to_uniform"] = divergence_kl_to_uniform(*joint);
    run.artifacts.emplace_back("coupling.json", io::to_json(*joint).dump(2) + "\n");
  }
  run.csv = matrix_csv(cells);
  run.artifacts.emplace_back("coupling.csv", run.csv);
}

struct MongeArgs {
  std::string matrix;
  double rel_tol = tol::kFullMongeRelative;
};

void run_check_monge(const MongeArgs& a, const Common& c, Run& run) {
  record_input(run, "matrix", a.matrix);
  const Matrix m = read_any_matrix(a.matrix, c.header);
  const bool monge = is_full_monge(m, a.rel_tol);
  run.outputs["full_monge"] = monge;
  run.outputs["residual"] = full_monge_residual(m);
  run.outputs["max_abs"] = m.max_abs();
  run.outputs["rel_tol"] = a.rel_tol;
  // On a probability matrix, also compare with the indetermination coupling of its own margins.
  try {
    const JointDistribution pi(m);
    const auto closed = indetermination_closed_form(pi.row_margin(), pi.col_margin());
    const double diff = max_abs_diff(m, closed.cells);
    run.outputs["distance_to_own_indetermination"] = diff;
    if (monge && diff > 1e-9) throw ToleranceBreach("Full-Monge matrix differs from its indetermination coupling");
  } catch (const InvalidInput&) {
  }
  run.csv = std::string("full_monge,residual\n") + (monge ? "true" : "false") + "," +
            io::format_double(full_monge_residual(m)) + "\n";
}

struct DrawArgs {
  std::string mu, nu;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  bool histogram = false;
  bool normalize = false;
};

void run_draw(const DrawArgs& a, const Common& c, Run& run) {
  record_input(run, "mu", a.mu);
  record_input(run, "nu", a.nu);
  const Margin mu = io::read_margin_csv(a.mu, a.normalize, c.header);
  const Margin nu = io::read_margin_csv(a.nu, a.normalize, c.header);
  run.stochastic = true;
  run.seed = a.seed ? *a.seed : fresh_seed();
  const auto dec = decompose(mu, nu);
  const auto batch = draw(dec, mu, a.n, *run.seed);

  std::ostringstream pairs;
  json list = json::array();
  for (auto [u, v] : batch.pairs) {
    pairs << u + 1 << ',' << v + 1 << '\n';
    if (c.output_dir.empty()) list.push_back({u + 1, v + 1});
  }
  run.csv = pairs.str();
  run.outputs["n"] = a.n;
  run.outputs["stream"] = batch.stream;
  if (c.output_dir.empty()) run.outputs["pairs"] = std::move(list);
  run.artifacts.emplace_back("pairs.csv", run.csv);
  const json sidecar = {{"seed", *run.seed}, {"n", a.n}, {"generator_version", std::string(kGeneratorVersion)}};
  run.artifacts.emplace_back("pairs.json", sidecar.dump(2) + "\n");

  if (a.histogram) {
    const Matrix counts = histogram(batch, mu.size(), nu.size());
    if (counts.total() != static_cast<double>(a.n)) throw ToleranceBreach("histogram lost samples");
    run.outputs["counts"] = io::matrix_to_json(counts);
    if (a.n > 0) {
      const json h = io::to_json(empirical_joint(batch, mu.size(), nu.size()));
      run.outputs["histogram"] = h;
      run.artifacts.emplace_back("histogram.json", h.dump(2) + "\n");
    }
  }
}

struct CriteriaArgs {
  std::string table;
  bool relational = false;
  std::string x, y;
  std::size_t p = 0, q = 0;
};

void run_criteria(const CriteriaArgs& a, const Common& c, Run& run) {
  if (a.relational) {
    if (a.x.empty() || a.y.empty()) throw InvalidInput("--relational needs --x and --y label files");
    record_input(run, "x", a.x);
    record_input(run, "y", a.y);
    const auto lx = io::read_labels_csv(a.x, c.header);
    const auto ly = io::read_labels_csv(a.y, c.header);
    if (lx.size() != ly.size()) throw InvalidInput("label files must have the same length");
    const std::size_t p = a.p ? a.p : category_count(lx);
    const std::size_t q = a.q ? a.q : category_count(ly);
    const double value = jv_relational(relational_encode(lx), relational_encode(ly), p, q);
    run.outputs = {{"jv_relational", value}, {"p", p}, {"q", q}, {"n", lx.size()}};
    run.csv = "jv_relational\n" + io::format_double(value) + "\n";
    return;
  }
  if (a.table.empty()) throw InvalidInput("criteria needs --table (or --relational with --x and --y)");
  record_input(run, "table", a.table);
  const auto table = ContingencyTable::from_matrix(io::read_matrix_csv(a.table, c.header));
  const double chi2 = chi_square(table);
  const auto jv = jv_contingency(table);
  run.outputs = {{"chi2", chi2},
                 {"jv_contingency", jv.value},
                 {"jv_numerator", jv.numerator},
                 {"jv_denominator", jv.denominator},
                 {"jv_normalizing", jv.normalizing},
                 {"n", table.n()}};
  run.csv = "chi2,jv_contingency\n" + io::format_double(chi2) + "," + io::format_double(jv.value) + "\n";
}

struct ClusterArgs {
  std::string graph, adjacency;
  std::size_t vertices = 0;
  std::string criterion = "x";
  std::optional<std::uint64_t> seed;
  bool no_diagonal = false;
  std::size_t max_passes = 32;
  bool brute_force = false;
};

void run_cluster(const ClusterArgs& a, const Common& c, Run& run) {
  std::optional<WeightedGraph> g;
  if (!a.adjacency.empty()) {
    record_input(run, "adjacency", a.adjacency);
    g.emplace(io::read_matrix_csv(a.adjacency, c.header));
  } else if (!a.graph.empty()) {
    record_input(run, "graph", a.graph);
    const auto edges = io::read_edges_csv(a.graph, c.header);
    const std::size_t n = std::max(a.vertices, io::vertex_count(edges));
    g = WeightedGraph::from_edges(n, edges);
  } else {
    throw InvalidInput("cluster needs --graph (edge list) or --adjacency (matrix)");
  }
  const LocalWeights w = a.criterion == "plus" ? local_weights_indetermination(*g) : local_weights_independence(*g);
  run.stochastic = true;
  run.seed = a.seed ? *a.seed : fresh_seed();
  LouvainOptions opt;
  opt.seed = *run.seed;
  opt.max_passes = a.max_passes;
  opt.include_diagonal = !a.no_diagonal;
  const auto result = louvain(w, opt);

  run.outputs = {{"criterion", a.criterion},
                 {"score", result.score},
                 {"passes", result.passes},
                 {"classes", result.partition.class_count()},
                 {"include_diagonal", opt.include_diagonal},
                 {"labels", one_based(result.partition.labels())}};
  if (a.brute_force) {
    const auto [best, score] = brute_force_best(w, 10, opt.include_diagonal);
    run.outputs["brute_force_score"] = score;
    run.outputs["brute_force_labels"] = one_based(best.labels());
    if (result.score > score + 1e-9 * std::max(1.0, std::abs(score)))
      throw ToleranceBreach("heuristic score exceeds the exhaustive optimum");
  }
  std::ostringstream labels;
  io::write_labels_csv(labels, result.partition.labels());
  run.csv = labels.str();
  run.artifacts.emplace_back("labels.csv", run.csv);
}

struct GuessArgs {
  std::string pi;
  double rho = 1.0;
  std::string strategy = "margin";
};

void run_guess(const GuessArgs& a, const Common& c, Run& run) {
  record_input(run, "pi", a.pi);
  const GuessingInstance inst(read_joint(a.pi, c.header), a.rho);
  const Strategy s = a.strategy == "max" ? Strategy::sorted_by_posterior() : Strategy::random_by_posterior();
  const auto bounds = one_shot_bounds_margin_strategy(inst.pi);
  const double moment = rho_moment(inst, s);
  const double shot = one_shot(inst, s);
  run.outputs = {{"strategy", a.strategy},
                 {"rho", a.rho},
                 {"rho_moment", moment},
                 {"one_shot", shot},
                 {"lower_bound_generalized", lower_bound_generalized(inst.pi, a.rho)},
                 {"one_shot_lower", bounds.lower},
                 {"one_shot_upper", bounds.upper},
                 {"dropped_columns", bounds.dropped_columns}};
  run.csv = "rho_moment,one_shot,lower_bound_generalized,one_shot_lower,one_shot_upper\n" +
            io::format_double(moment) + "," + io::format_double(shot) + "," +
            io::format_double(run.outputs["lower_bound_generalized"].get<double>()) + "," +
            io::format_double(bounds.lower) + "," + io::format_double(bounds.upper) + "\n";
}

struct TasksArgs {
  std::string mu, assign;
  std::size_t workers = 0;
  double rho = 1.0;
  bool normalize = false;
};

void run_tasks(const TasksArgs& a, const Common& c, Run& run) {
  record_input(run, "mu", a.mu);
  record_input(run, "assign", a.assign);
  const Margin mu = io::read_margin_csv(a.mu, a.normalize, c.header);
  auto assignment = io::read_labels_csv(a.assign, c.header);
  if (assignment.size() != mu.size()) throw InvalidInput("assignment length differs from the number of tasks");
  const TaskPartition part = a.workers ? TaskPartition(assignment, a.workers) : TaskPartition(assignment);
  const auto moment = class_size_moment(mu, part, a.rho);
  const auto shot = partition_one_shot_bound(mu, part);
  if (shot.m_value < shot.bound_pi_a - 1e-12 || shot.bound_pi_a < shot.bound_indet - 1e-12)
    throw ToleranceBreach("one-shot bound chain violated");
  run.outputs = {{"rho", a.rho},
                 {"workers", part.workers()},
                 {"moment", moment.value},
                 {"moment_bound", partition_moment_bound(mu, part.workers(), a.rho)},
                 {"moment_bound_unit_power", partition_moment_bound_unit_power(mu, part.workers(), a.rho)},
                 {"empty_workers", moment.empty_workers},
                 {"one_shot", shot.m_value},
                 {"bound_piA", shot.bound_pi_a},
                 {"bound_indet", shot.bound_indet},
                 {"condition_h", shot.condition_h},
                 {"dropped_workers", shot.dropped_workers}};
  run.csv = "moment,moment_bound,one_shot,bound_piA,bound_indet\n" + io::format_double(moment.value) + "," +
            io::format_double(run.outputs["moment_bound"].get<double>()) + "," + io::format_double(shot.m_value) +
            "," + io::format_double(shot.bound_pi_a) + "," + io::format_double(shot.bound_indet) + "\n";
}

struct ContinuousArgs {
  std::string f, g;
  std::size_t grid = 64;
  std::size_t n_quad = 16;
};

void run_continuous(const ContinuousArgs& a, const Common&, Run& run) {
  record_input(run, "f", a.f);
  record_input(run, "g", a.g);
  const DensitySpec f = io::read_density_json(a.f);
  const DensitySpec g = io::read_density_json(a.g);
  const double cond = condition_continuous_value(f, g);
  run.outputs["condition_value"] = cond;
  run.outputs["feasible"] = check_condition_continuous(f, g);
  run.outputs["support_u"] = {f.lower(), f.upper()};
  run.outputs["support_v"] = {g.lower(), g.upper()};
  const ContinuousCoupling c(f, g);  // throws when infeasible; the report above is still printed

  const std::size_t n = a.grid;
  if (n == 0) throw InvalidInput("--grid must be positive");
  Matrix density(n + 1, n + 1), cdf(n + 1, n + 1);
  double min_density = INFINITY;
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = i == n ? f.upper() : f.lower() + f.length() * static_cast<double>(i) / static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) {
      const double v = j == n ? g.upper() : g.lower() + g.length() * static_cast<double>(j) / static_cast<double>(n);
      density(i, j) = density_eval(c, u, v);
      cdf(i, j) = cdf_eval(c, u, v);
      min_density = std::min(min_density, density(i, j));
    }
  }
  const auto margins = margins_of_density(c, a.n_quad);
  const double total = cdf_eval(c, f.upper(), g.upper());
  if (std::abs(total - 1.0) > 1e-10) throw ToleranceBreach("CDF does not reach 1 at the upper corner");
  if (margins.max_error_f > 1e-9 || margins.max_error_g > 1e-9)
    throw ToleranceBreach("quadrature margins disagree with the closed form");

  run.outputs["grid"] = n;
  run.outputs["min_density_on_grid"] = min_density;
  run.outputs["cdf_upper_corner"] = total;
  run.outputs["margin_check"] = {{"n_quad", a.n_quad},
                                 {"max_error_f", margins.max_error_f},
                                 {"max_error_g", margins.max_error_g},
                                 {"total_mass", margins.total_mass}};
  run.csv = matrix_csv(density);
  run.artifacts.emplace_back("density.csv", run.csv);
  run.artifacts.emplace_back("cdf.csv", matrix_csv(cdf));
}

// ---------------------------------------------------------------- plumbing

void add_common(CLI::App* sub, Common& c) {
  auto* j = sub->add_flag("--json", c.json_out, "Print the JSON run report (default)");
  auto* k = sub->add_flag("--csv", c.csv_out, "Print the main result as CSV instead of the report");
  j->excludes(k);
  sub->add_flag("--header", c.header, "Input CSV files start with a header row");
  sub->add_option("--output-dir", c.output_dir, "Directory for the report and CSV artifacts (default: $INDET_OUTPUT_DIR)");
}

json make_report(const Run& run, const std::vector<std::string>& args) {
  json r = {{"command", run.command},
            {"version", INDET_VERSION},
            {"timestamp", utc_timestamp()},
            {"arguments", args},
            {"inputs", run.inputs},
            {"seed", run.seed ? json(*run.seed) : json(nullptr)},
            {"outputs", run.outputs}};
  if (run.stochastic) r["generator_version"] = std::string(kGeneratorVersion);
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Couplings of discrete and continuous margins: independence and indetermination", "indet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(INDET_VERSION));

  Common common;
  Run run;
  std::function<void()> action;

  CoupleArgs couple;
  auto* s_couple = app.add_subcommand("couple", "Build a coupling of two margins");
  s_couple->add_option("--kind", couple.kind, "times (independence) or plus (indetermination)")
      ->transform(CLI::IsMember({"times", "plus"}))
      ->capture_default_str();
  s_couple->add_option("--mu", couple.mu, "Row margin CSV")->required()->check(CLI::ExistingFile);
  s_couple->add_option("--nu", couple.nu, "Column margin CSV")->required()->check(CLI::ExistingFile);
  s_couple->add_flag("--normalize", couple.normalize, "Rescale margins (counts) to probabilities");
  s_couple->add_flag("--signed", couple.allow_signed, "Emit the closed form even when condition (H) fails");
  add_common(s_couple, common);
  s_couple->callback([&] { action = [&] { run_couple(couple, common, run); }; });

  MongeArgs monge;
  auto* s_monge = app.add_subcommand("check-monge", "Test the Full-Monge property of a matrix");
  s_monge->add_option("--matrix", monge.matrix, "Matrix CSV or joint distribution JSON")
      ->required()
      ->check(CLI::ExistingFile);
  s_monge->add_option("--rel-tol", monge.rel_tol, "Tolerance relative to max |cell|")->capture_default_str();
  add_common(s_monge, common);
  s_monge->callback([&] { action = [&] { run_check_monge(monge, common, run); }; });

  DrawArgs drawa;
  auto* s_draw = app.add_subcommand("draw", "Sample pairs from the indetermination coupling");
  s_draw->add_option("--mu", drawa.mu, "Row margin CSV")->required()->check(CLI::ExistingFile);
  s_draw->add_option("--nu", drawa.nu, "Column margin CSV")->required()->check(CLI::ExistingFile);
  s_draw->add_option("--n", drawa.n, "Number of pairs")->required();
  s_draw->add_option("--seed", drawa.seed, "Seed (default: random, recorded in the report)");
  s_draw->add_flag("--histogram", drawa.histogram, "Also report the empirical joint distribution");
  s_draw->add_flag("--normalize", drawa.normalize, "Rescale margins (counts) to probabilities");
  add_common(s_draw, common);
  s_draw->callback([&] { action = [&] { run_draw(drawa, common, run); }; });

  CriteriaArgs crit;
  auto* s_crit = app.add_subcommand("criteria", "Association indices of a contingency table or two labelings");
  s_crit->add_option("--table", crit.table, "Contingency table CSV (counts)")->check(CLI::ExistingFile);
  s_crit->add_flag("--relational", crit.relational, "Compare two labelings in the relational space");
  s_crit->add_option("--x", crit.x, "First label CSV (1-based categories)")->check(CLI::ExistingFile);
  s_crit->add_option("--y", crit.y, "Second label CSV (1-based categories)")->check(CLI::ExistingFile);
  s_crit->add_option("--p", crit.p, "Category count of x (default: distinct labels)");
  s_crit->add_option("--q", crit.q, "Category count of y (default: distinct labels)");
  add_common(s_crit, common);
  s_crit->callback([&] { action = [&] { run_criteria(crit, common, run); }; });

  ClusterArgs clus;
  auto* s_clus = app.add_subcommand("cluster", "Cluster a weighted graph by modularity maximization");
  s_clus->add_option("--graph", clus.graph, "Edge list CSV i,j[,weight] (1-based)")->check(CLI::ExistingFile);
  s_clus->add_option("--adjacency", clus.adjacency, "Symmetric adjacency matrix CSV")->check(CLI::ExistingFile);
  s_clus->add_option("--vertices", clus.vertices, "Vertex count (default: largest id in the edge list)");
  s_clus->add_option("--criterion", clus.criterion, "x (deviation to independence) or plus (to indetermination)")
      ->transform(CLI::IsMember({"x", "plus"}))
      ->capture_default_str();
  s_clus->add_option("--seed", clus.seed, "Seed for the vertex order (default: random, recorded)");
  s_clus->add_flag("--no-diagonal", clus.no_diagonal, "Leave the i = j terms out of the score");
  s_clus->add_option("--max-passes", clus.max_passes, "Aggregation levels")->check(CLI::PositiveNumber)->capture_default_str();
  s_clus->add_flag("--brute-force", clus.brute_force, "Also compute the exact optimum (n <= 10)");
  add_common(s_clus, common);
  s_clus->callback([&] { action = [&] { run_cluster(clus, common, run); }; });

  GuessArgs guess;
  auto* s_guess = app.add_subcommand("guess", "Guessing performance of a joint distribution");
  s_guess->add_option("--pi", guess.pi, "Joint distribution JSON or CSV")->required()->check(CLI::ExistingFile);
  s_guess->add_option("--rho", guess.rho, "Moment order")->check(CLI::PositiveNumber)->capture_default_str();
  s_guess->add_option("--strategy", guess.strategy, "max (posterior mode first) or margin (posterior draws)")
      ->transform(CLI::IsMember({"max", "margin"}))
      ->capture_default_str();
  add_common(s_guess, common);
  s_guess->callback([&] { action = [&] { run_guess(guess, common, run); }; });

  TasksArgs tasks;
  auto* s_tasks = app.add_subcommand("tasks", "Evaluate a partition of tasks among workers");
  s_tasks->add_option("--mu", tasks.mu, "Task probabilities CSV")->required()->check(CLI::ExistingFile);
  s_tasks->add_option("--assign", tasks.assign, "Worker of each task CSV (1-based)")->required()->check(CLI::ExistingFile);
  s_tasks->add_option("--workers", tasks.workers, "Worker count (default: largest worker id)");
  s_tasks->add_option("--rho", tasks.rho, "Moment order")->check(CLI::PositiveNumber)->capture_default_str();
  s_tasks->add_flag("--normalize", tasks.normalize, "Rescale task weights to probabilities");
  add_common(s_tasks, common);
  s_tasks->callback([&] { action = [&] { run_tasks(tasks, common, run); }; });

  ContinuousArgs cont;
  auto* s_cont = app.add_subcommand("continuous", "Continuous indetermination density and CDF on a grid");
  s_cont->add_option("--f", cont.f, "Density JSON of the first margin")->required()->check(CLI::ExistingFile);
  s_cont->add_option("--g", cont.g, "Density JSON of the second margin")->required()->check(CLI::ExistingFile);
  s_cont->add_option("--grid", cont.grid, "Grid intervals per axis")->check(CLI::PositiveNumber)->capture_default_str();
  s_cont->add_option("--n-quad", cont.n_quad, "Gauss-Legendre nodes per piece for the margin check")
      ->check(CLI::Range(16, 1024))
      ->capture_default_str();
  add_common(s_cont, common);
  s_cont->callback([&] { action = [&] { run_continuous(cont, common, run); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  run.command = app.get_subcommands().front()->get_name();
  if (common.output_dir.empty())
    if (const char* env = std::getenv("INDET_OUTPUT_DIR")) common.output_dir = env;

  int code = kOk;
  try {
    action();
  } catch (const ToleranceBreach& e) {
    err << "internal tolerance breach: " << e.what() << '\n';
    return kToleranceBreach;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    code = kInvalidInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kToleranceBreach;
  }
  // A failed run prints its partial report only when it already holds outputs
  // (for example the feasibility verdict of `continuous`).
  if (code != kOk && run.outputs.empty()) return code;

  const json report = make_report(run, args);
  try {
    if (!common.output_dir.empty()) {
      fs::create_directories(common.output_dir);
      write_file(fs::path(common.output_dir) / (run.command + ".json"), report.dump(2) + "\n");
      if (code == kOk)
        for (const auto& [name, text] : run.artifacts) write_file(fs::path(common.output_dir) / name, text);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  if (common.csv_out && code == kOk) out << run.csv;
  else out << report.dump(2) << '\n';
  return code;
}

}  // namespace indet::cli
