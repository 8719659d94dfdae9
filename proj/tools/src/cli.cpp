#include "infuser/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "infuser/error.hpp"
#include "infuser/evaluation.hpp"
#include "infuser/graph.hpp"
#include "infuser/propagation.hpp"
#include "infuser/reference.hpp"
#include "infuser/seed_selection.hpp"

namespace infuser::cli {

namespace {

struct GraphArgs {
  std::string graph;
  std::string weights;
  bool directed = false;
  std::uint64_t seed = 1;
  int threads = 0;
};

void add_graph_options(CLI::App& cmd, GraphArgs& a) {
  cmd.add_option("--graph", a.graph, "Edge list (u v [w]) or CSR cache; er:N:DEG:SEED and rmat:SCALE:EF:SEED also work")
      ->required();
  cmd.add_option("--weights", a.weights,
                 "const:P | uniform:LO,HI | normal:MEAN,STD | wc | file (default: file if the graph has a weight "
                 "column, else const:0.01)");
  cmd.add_flag("--directed", a.directed, "Treat each input line as one directed weight u->v");
  cmd.add_option("--seed", a.seed, "Master random seed")->capture_default_str();
  cmd.add_option("--threads", a.threads, "Worker threads (0 = all cores)")
      ->envname("INFUSER_THREADS")
      ->check(CLI::NonNegativeNumber);
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

Graph prepare_graph(const GraphArgs& a) {
  Graph raw = load_dataset(a.graph, a.directed);
  std::string scheme = a.weights;
  if (scheme.empty()) scheme = raw.file_weights() ? "file" : "const:0.01";
  return apply_weights(raw, parse_weight_scheme(scheme), a.seed);
}

std::vector<VertexId> read_seeds_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<VertexId> seeds;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token) || token[0] == '#') continue;
    std::uint64_t id = 0;
    std::size_t used = 0;
    try {
      id = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token[0] == '-') throw ParseError("bad vertex ID '" + token + "'", line_no);
    auto compact = g.compact_id(id);
    if (!compact) throw ConstraintError("seed " + token + " is not a vertex of the graph");
    if (std::find(seeds.begin(), seeds.end(), *compact) == seeds.end()) seeds.push_back(*compact);
  }
  if (seeds.empty()) throw ConstraintError("seeds file " + path + " lists no vertices");
  return seeds;
}

void write_seeds(std::ostream& out, const Graph& g, std::span<const VertexId> seeds) {
  for (VertexId s : seeds) out << g.original_id(s) << '\n';
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct SelectArgs {
  GraphArgs graph;
  std::size_t k = 0;
  std::size_t r = 256;
  std::string algo = "infuser";
  std::string sampler = "hash";
  std::string out;
  std::string trace;
  std::string dump_labels;
};

int run_select(const SelectArgs& a, std::ostream& out, std::ostream& err) {
  apply_threads(a.graph.threads);
  const Graph g = prepare_graph(a.graph);
  if (a.k == 0 || a.k > g.n()) {
    throw ConstraintError("K = " + std::to_string(a.k) + " must lie in [1, n = " + std::to_string(g.n()) + "]");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<VertexId> seeds;
  double influence = 0.0;

  if (a.algo == "infuser") {
    const EdgeHashTable table = build_hash_table(g);
    const SimulationRandoms randoms(a.r, a.graph.seed);
    LabelMatrix labels = propagate(g, table, randoms);
    const ComponentSizeTable sizes = component_sizes(labels);
    const auto mg0 = initial_marginal_gains(labels, sizes);
    SelectionResult result = select_seeds(g, labels, sizes, mg0, a.k);
    seeds = result.seeds;
    influence = result.influence();
    if (!a.trace.empty()) {
      std::ofstream trace(a.trace);
      if (!trace) throw IoError("cannot write " + a.trace);
      write_trace_csv(result.trace, trace, &g);
    }
    if (!a.dump_labels.empty()) write_label_matrix(labels, a.dump_labels);
  } else {
    if (!a.trace.empty() || !a.dump_labels.empty()) {
      throw ConstraintError("--trace and --dump-labels need --algo infuser");
    }
    std::optional<EdgeHashTable> table;
    std::optional<SimulationRandoms> randoms;
    std::unique_ptr<Sampler> sampler;
    if (a.sampler == "hash") {
      table.emplace(build_hash_table(g));
      randoms.emplace(a.r, a.graph.seed);
      sampler = std::make_unique<HashSampler>(*table, *randoms);
    } else {
      sampler = std::make_unique<RngSampler>(static_cast<std::uint32_t>(a.graph.seed));
    }
    if (a.algo == "mixgreedy") {
      const auto result = mix_greedy(g, a.k, a.r, *sampler);
      seeds = result.seeds;
      influence = result.influence();
    } else {
      seeds = new_greedy(g, a.k, a.r, *sampler).seeds;
      influence = rand_cas(g, seeds, a.r, *sampler);
    }
  }
  const double seconds = elapsed_since(start);

  write_seeds(out, g, seeds);
  out << "# sigma/R " << std::setprecision(10) << influence << '\n';
  err << "# time " << std::fixed << std::setprecision(6) << seconds << " s, threads " << omp_get_max_threads() << '\n'
      << std::defaultfloat;
  if (!a.out.empty()) {
    std::ofstream file(a.out);
    if (!file) throw IoError("cannot write " + a.out);
    write_seeds(file, g, seeds);
  }
  return kExitOk;
}

struct EvaluateArgs {
  GraphArgs graph;
  std::string seeds_file;
  std::size_t r_eval = 10000;
};

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  apply_threads(a.graph.threads);
  const Graph g = prepare_graph(a.graph);
  const auto seeds = read_seeds_file(a.seeds_file, g);
  const auto est = evaluate_seeds(g, seeds, a.r_eval, a.graph.seed);
  out << std::setprecision(10) << "sigma " << est.mean << "\nse " << est.std_error << "\nworlds " << est.worlds
      << '\n';
  return kExitOk;
}

struct CdfArgs {
  GraphArgs graph;
  std::size_t r = 256;
  std::size_t bins = 100;
  std::string out;
};

int run_cdf(const CdfArgs& a, std::ostream& out) {
  apply_threads(a.graph.threads);
  const Graph g = prepare_graph(a.graph);
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(a.r, a.graph.seed);
  const auto cdf = sampling_cdf(g, table, randoms, a.bins);
  out << std::setprecision(6) << "# ks_distance " << cdf.ks_distance << "\n# samples " << cdf.samples << "\n# "
      << (cdf.flagged ? "NON-UNIFORM" : "uniform") << '\n';
  if (a.out.empty()) {
    write_cdf_tsv(cdf, out);
  } else {
    std::ofstream file(a.out);
    if (!file) throw IoError("cannot write " + a.out);
    write_cdf_tsv(cdf, file);
  }
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::string csv;
  bool csv_stdout = false;
};

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const BenchConfig config = load_bench_config(a.config);
  const BenchReport report = run_benchmark(config, &err);
  if (a.csv_stdout) {
    write_report_csv(report, out);
  } else {
    write_report_table(report, out);
  }
  if (!a.csv.empty()) {
    std::ofstream file(a.csv);
    if (!file) throw IoError("cannot write " + a.csv);
    write_report_csv(report, file);
  }
  return kExitOk;
}

struct ExactArgs {
  GraphArgs graph;
  std::string seeds_file;
};

int run_exact(const ExactArgs& a, std::ostream& out) {
  const Graph g = prepare_graph(a.graph);
  const auto seeds = read_seeds_file(a.seeds_file, g);
  out << std::setprecision(12) << exact_influence(g, seeds) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Influence maximization under the independent cascade model"};
  app.name("infuser");
  app.require_subcommand(1);

  SelectArgs select;
  auto* select_cmd = app.add_subcommand("select", "Pick K seeds");
  add_graph_options(*select_cmd, select.graph);
  select_cmd->add_option("--k", select.k, "Seed set size")->required();
  select_cmd->add_option("--r", select.r, "Simulations (padded to a multiple of 8)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--algo", select.algo)
      ->capture_default_str()
      ->check(CLI::IsMember({"infuser", "newgreedy", "mixgreedy"}));
  select_cmd->add_option("--sampler", select.sampler, "World source for newgreedy/mixgreedy")
      ->capture_default_str()
      ->check(CLI::IsMember({"hash", "rng"}));
  select_cmd->add_option("--out", select.out, "Also write the seed set here, one original ID per line");
  select_cmd->add_option("--trace", select.trace, "Write the CELF dequeue trace as CSV");
  select_cmd->add_option("--dump-labels", select.dump_labels, "Write the final label matrix (binary)");

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Monte-Carlo influence of a seed set");
  add_graph_options(*evaluate_cmd, evaluate.graph);
  evaluate_cmd->add_option("--seeds-file", evaluate.seeds_file, "One original vertex ID per line")->required();
  evaluate_cmd->add_option("--r-eval", evaluate.r_eval)->capture_default_str()->check(CLI::PositiveNumber);

  CdfArgs cdf;
  auto* cdf_cmd = app.add_subcommand("cdf", "CDF of hash sampling probabilities and KS distance");
  add_graph_options(*cdf_cmd, cdf.graph);
  cdf_cmd->add_option("--r", cdf.r)->capture_default_str()->check(CLI::PositiveNumber);
  cdf_cmd->add_option("--bins", cdf.bins)->capture_default_str()->check(CLI::Range(10, 1 << 24));
  cdf_cmd->add_option("--out", cdf.out, "Write the TSV here instead of stdout");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run benchmark rows from an INI file");
  bench_cmd->add_option("--config", bench.config)->required();
  bench_cmd->add_option("--csv", bench.csv, "Also write the CSV report here");
  bench_cmd->add_flag("--print-csv", bench.csv_stdout, "Print CSV instead of the table");

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Exact influence by world enumeration (tiny graphs)");
  add_graph_options(*exact_cmd, exact.graph);
  exact_cmd->add_option("--seeds-file", exact.seeds_file)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const GraphArgs* g : {&select.graph, &evaluate.graph, &cdf.graph, &exact.graph}) {
    if (g->weights.empty()) continue;
    try {
      (void)parse_weight_scheme(g->weights);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }

  struct ThreadRestore {
    int saved = omp_get_max_threads();
    ~ThreadRestore() { omp_set_num_threads(saved); }
  } restore;

  try {
    if (*select_cmd) return run_select(select, out, err);
    if (*evaluate_cmd) return run_evaluate(evaluate, out);
    if (*cdf_cmd) return run_cdf(cdf, out);
    if (*bench_cmd) return run_bench(bench, out, err);
    if (*exact_cmd) return run_exact(exact, out);
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConstraint;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitConstraint;
  }
  return kExitUsage;
}

}  // namespace infuser::cli
