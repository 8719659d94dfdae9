#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "infuser/edge_hash.hpp"
#include "infuser/graph.hpp"

namespace infuser {

struct InfluenceEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t worlds = 0;
};

// Independent Monte-Carlo estimate of sigma(S) over r_eval rng-sampled
// worlds. Worlds are grouped in fixed chunks with their own generators, so
// the result does not depend on the thread count.
InfluenceEstimate evaluate_seeds(const Graph& g, std::span<const VertexId> seeds, std::size_t r_eval,
                                 std::uint64_t rng_seed);

// KS distance at or above this flags a non-uniform sampling stream.
inline constexpr double kUniformityThreshold = 0.01;

struct SamplingCdf {
  std::vector<double> bin_upper;
  std::vector<double> cdf;
  // Kolmogorov-Smirnov distance from U[0,1], evaluated on a 2^20-point grid.
  double ks_distance = 0.0;
  std::uint64_t samples = 0;
  bool flagged = false;
};

// Empirical CDF of sample_prob / h_max over canonical slots (u < v) and the
// scored simulations.
SamplingCdf sampling_cdf(const Graph& g, const EdgeHashTable& table, const SimulationRandoms& randoms,
                         std::size_t bins);
// Two columns: bin_upper<TAB>cdf.
void write_cdf_tsv(const SamplingCdf& cdf, std::ostream& out);

// "er:N:AVG_DEGREE:SEED", "rmat:SCALE:EDGE_FACTOR:SEED", or a file path
// (edge list or CSR cache).
Graph load_dataset(const std::string& source, bool directed_input = false);

struct BenchRowConfig {
  std::string name;
  std::string dataset;
  // infuser | mixgreedy | newgreedy (hash sampler) | mixgreedy-rng
  std::string algo = "infuser";
  std::size_t k = 50;
  std::size_t r = 256;
  int threads = 1;
  std::string weights = "const:0.01";
  std::uint64_t seed = 1;
  std::size_t r_eval = 10000;
  bool directed = false;
};

struct BenchConfig {
  std::vector<BenchRowConfig> rows;
};

// INI layout: an optional [defaults] section, then one section per row.
// Keys: dataset, algo, k, r, threads, weights, seed, r_eval, directed, name.
BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchReportRow {
  BenchRowConfig config;
  double seconds = 0.0;
  std::uint64_t peak_bytes = 0;
  double sigma = 0.0;
  double sigma_se = 0.0;
  std::vector<VertexId> seeds;
  std::string error;
  bool ok() const noexcept { return error.empty(); }
};

struct BenchReport {
  std::vector<BenchReportRow> rows;
  std::string memory_method;
};

// Runs every row; a failing row records its error and the run continues.
BenchReport run_benchmark(const BenchConfig& config, std::ostream* log = nullptr);

// dataset,algo,K,R,threads,seconds,peak_bytes,sigma,sigma_se
void write_report_csv(const BenchReport& report, std::ostream& out);
void write_report_table(const BenchReport& report, std::ostream& out);

// Peak resident set since the last reset. Uses /proc/self/clear_refs and
// VmHWM when available, else getrusage (process lifetime peak).
class PeakMemoryProbe {
 public:
  PeakMemoryProbe();
  void reset();
  std::uint64_t peak_bytes() const;
  const std::string& method() const noexcept { return method_; }

 private:
  bool resettable_ = false;
  std::string method_;
};

}  // namespace infuser
