#include "infuser/evaluation.hpp"

#include <omp.h>
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "infuser/error.hpp"
#include "infuser/reference.hpp"
#include "infuser/seed_selection.hpp"

namespace infuser {

namespace {

constexpr std::size_t kWorldsPerChunk = 1024;
constexpr unsigned kGridBits = 20;
constexpr unsigned kGridShift = 31 - kGridBits;

std::vector<double> undirected_probabilities(const Graph& g) {
  std::vector<double> p(g.m());
  for (EdgeSlot s = 0; s < g.m(); ++s) p[s] = g.weights_symmetric() ? g.weight(s) : g.undirected_weight(s);
  return p;
}

// Independent cascade from `seeds` with coins drawn on first contact; each
// undirected edge is flipped at most once per world.
std::size_t cascade(const Graph& g, std::span<const double> prob, std::span<const VertexId> seeds,
                    std::mt19937& rng, std::vector<std::uint32_t>& stamp, std::uint32_t epoch,
                    std::vector<VertexId>& queue) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  queue.clear();
  for (VertexId s : seeds) {
    if (stamp[s] != epoch) {
      stamp[s] = epoch;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
      const VertexId v = g.target(s);
      if (stamp[v] == epoch || prob[s] <= 0.0) continue;
      if (unit(rng) <= prob[s]) {
        stamp[v] = epoch;
        queue.push_back(v);
      }
    }
  }
  return queue.size();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

InfluenceEstimate evaluate_seeds(const Graph& g, std::span<const VertexId> seeds, std::size_t r_eval,
                                 std::uint64_t rng_seed) {
  if (seeds.empty()) throw ConstraintError("evaluation needs a non-empty seed set");
  if (r_eval == 0) throw ConstraintError("evaluation needs at least one world");
  for (VertexId s : seeds) {
    if (s >= g.n()) throw ConstraintError("seed vertex out of range");
  }
  const auto prob = undirected_probabilities(g);
  const std::size_t chunks = (r_eval + kWorldsPerChunk - 1) / kWorldsPerChunk;
  std::vector<std::uint64_t> chunk_sum(chunks, 0);
  std::vector<std::uint64_t> chunk_sumsq(chunks, 0);

#pragma omp parallel
  {
    std::vector<std::uint32_t> stamp(g.n(), 0);
    std::vector<VertexId> queue;
    std::uint32_t epoch = 0;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                        static_cast<std::uint32_t>(c)};
      std::mt19937 rng(seq);
      const std::size_t begin = static_cast<std::size_t>(c) * kWorldsPerChunk;
      const std::size_t end = std::min(r_eval, begin + kWorldsPerChunk);
      std::uint64_t sum = 0, sumsq = 0;
      for (std::size_t w = begin; w < end; ++w) {
        if (++epoch == 0) {
          std::fill(stamp.begin(), stamp.end(), 0);
          epoch = 1;
        }
        const std::uint64_t reached = cascade(g, prob, seeds, rng, stamp, epoch, queue);
        sum += reached;
        sumsq += reached * reached;
      }
      chunk_sum[static_cast<std::size_t>(c)] = sum;
      chunk_sumsq[static_cast<std::size_t>(c)] = sumsq;
    }
  }

  std::uint64_t sum = 0, sumsq = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += chunk_sum[c];
    sumsq += chunk_sumsq[c];
  }
  const double count = static_cast<double>(r_eval);
  InfluenceEstimate est;
  est.worlds = r_eval;
  est.mean = static_cast<double>(sum) / count;
  if (r_eval > 1) {
    const double var =
        std::max(0.0, (static_cast<double>(sumsq) - static_cast<double>(sum) * est.mean) / (count - 1.0));
    est.std_error = std::sqrt(var / count);
  }
  return est;
}

SamplingCdf sampling_cdf(const Graph& g, const EdgeHashTable& table, const SimulationRandoms& randoms,
                         std::size_t bins) {
  if (bins < 10) throw ConstraintError("sampling CDF needs at least 10 bins");
  if (table.size() != g.m()) throw ConstraintError("hash table does not match graph");
  const std::size_t grid = std::size_t{1} << kGridBits;
  const std::size_t simulations = randoms.simulations();
  std::vector<std::uint64_t> fine(grid, 0);
  std::vector<std::uint64_t> coarse(bins, 0);

#pragma omp parallel
  {
    std::vector<std::uint64_t> local_fine(grid, 0);
    std::vector<std::uint64_t> local_coarse(bins, 0);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(g.n()); ++i) {
      const auto u = static_cast<VertexId>(i);
      for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
        if (g.target(s) < u) continue;
        const std::uint32_t h = table.hash(s);
        for (std::size_t r = 0; r < simulations; ++r) {
          const std::uint32_t prob = sample_prob(h, randoms[r]);
          ++local_fine[prob >> kGridShift];
          ++local_coarse[static_cast<std::size_t>((static_cast<std::uint64_t>(prob) * bins) >> 31)];
        }
      }
    }
#pragma omp critical
    {
      for (std::size_t i = 0; i < grid; ++i) fine[i] += local_fine[i];
      for (std::size_t i = 0; i < bins; ++i) coarse[i] += local_coarse[i];
    }
  }

  SamplingCdf out;
  for (auto c : coarse) out.samples += c;
  if (out.samples == 0) {
    out.flagged = true;
    out.ks_distance = 1.0;
    return out;
  }
  const double total = static_cast<double>(out.samples);
  const double h_max = static_cast<double>(kHashMax);
  std::uint64_t cumulative = 0;
  for (std::size_t j = 0; j < bins; ++j) {
    cumulative += coarse[j];
    out.bin_upper.push_back(static_cast<double>(j + 1) / static_cast<double>(bins));
    out.cdf.push_back(static_cast<double>(cumulative) / total);
  }
  cumulative = 0;
  double ks = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double lo = std::min(1.0, static_cast<double>(i << kGridShift) / h_max);
    const double hi = std::min(1.0, static_cast<double>(((i + 1) << kGridShift) - 1) / h_max);
    ks = std::max(ks, std::abs(static_cast<double>(cumulative) / total - lo));
    cumulative += fine[i];
    ks = std::max(ks, std::abs(static_cast<double>(cumulative) / total - hi));
  }
  out.ks_distance = ks;
  out.flagged = ks >= kUniformityThreshold;
  return out;
}

void write_cdf_tsv(const SamplingCdf& cdf, std::ostream& out) {
  const auto precision = out.precision(10);
  out << "bin_upper\tcdf\n";
  for (std::size_t i = 0; i < cdf.cdf.size(); ++i) out << cdf.bin_upper[i] << '\t' << cdf.cdf[i] << '\n';
  out.precision(precision);
}

Graph load_dataset(const std::string& source, bool directed_input) {
  auto parts = split(source, ':');
  auto number = [&](std::size_t i) -> double {
    try {
      std::size_t used = 0;
      double value = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
      return value;
    } catch (const std::exception&) {
      throw ConstraintError("bad synthetic dataset '" + source + "'");
    }
  };
  if (parts.size() == 4 && parts[0] == "er") {
    return erdos_renyi(static_cast<std::size_t>(number(1)), number(2), static_cast<std::uint64_t>(number(3)));
  }
  if (parts.size() == 4 && parts[0] == "rmat") {
    return rmat(static_cast<unsigned>(number(1)), static_cast<std::size_t>(number(2)),
                static_cast<std::uint64_t>(number(3)));
  }
  return load_graph(source, directed_input);
}

PeakMemoryProbe::PeakMemoryProbe() {
  std::ofstream clear("/proc/self/clear_refs");
  resettable_ = static_cast<bool>(clear) && static_cast<bool>(clear << "5" << std::flush);
  std::ifstream status("/proc/self/status");
  bool has_hwm = false;
  for (std::string line; std::getline(status, line);) has_hwm = has_hwm || line.rfind("VmHWM:", 0) == 0;
  resettable_ = resettable_ && has_hwm;
  method_ = resettable_ ? "rss_hwm_per_row" : "rss_maxrss_process";
}

void PeakMemoryProbe::reset() {
  if (!resettable_) return;
  std::ofstream clear("/proc/self/clear_refs");
  clear << "5" << std::flush;
}

std::uint64_t PeakMemoryProbe::peak_bytes() const {
  if (resettable_) {
    std::ifstream status("/proc/self/status");
    for (std::string line; std::getline(status, line);) {
      if (line.rfind("VmHWM:", 0) == 0) {
        std::istringstream fields(line.substr(6));
        std::uint64_t kb = 0;
        fields >> kb;
        return kb * 1024;
      }
    }
  }
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;
}

BenchReport run_benchmark(const BenchConfig& config, std::ostream* log) {
  BenchReport report;
  PeakMemoryProbe probe;
  report.memory_method = probe.method();
  const int default_threads = omp_get_max_threads();

  for (const auto& row_config : config.rows) {
    BenchReportRow row;
    row.config = row_config;
    try {
      const Graph raw = load_dataset(row_config.dataset, row_config.directed);
      const Graph g = apply_weights(raw, parse_weight_scheme(row_config.weights), row_config.seed);
      omp_set_num_threads(row_config.threads > 0 ? row_config.threads : default_threads);

      probe.reset();
      const auto start = std::chrono::steady_clock::now();
      if (row_config.algo == "infuser") {
        row.seeds = run_infuser(g, row_config.k, row_config.r, row_config.seed).selection.seeds;
      } else if (row_config.algo == "mixgreedy" || row_config.algo == "newgreedy") {
        const EdgeHashTable table = build_hash_table(g);
        const SimulationRandoms randoms(row_config.r, row_config.seed);
        HashSampler sampler(table, randoms);
        row.seeds = row_config.algo == "mixgreedy" ? mix_greedy(g, row_config.k, row_config.r, sampler).seeds
                                                   : new_greedy(g, row_config.k, row_config.r, sampler).seeds;
      } else if (row_config.algo == "mixgreedy-rng") {
        RngSampler sampler(static_cast<std::uint32_t>(row_config.seed));
        row.seeds = mix_greedy(g, row_config.k, row_config.r, sampler).seeds;
      } else {
        throw ConstraintError("unknown algorithm '" + row_config.algo + "'");
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.peak_bytes = probe.peak_bytes();

      const auto estimate = evaluate_seeds(g, row.seeds, row_config.r_eval, row_config.seed ^ 0x9e3779b97f4a7c15ull);
      row.sigma = estimate.mean;
      row.sigma_se = estimate.std_error;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    omp_set_num_threads(default_threads);
    if (log != nullptr) {
      *log << "[bench] " << (row_config.name.empty() ? row_config.dataset : row_config.name) << ' '
           << row_config.algo << (row.ok() ? " ok" : " FAILED: " + row.error) << '\n';
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "dataset,algo,K,R,threads,seconds,peak_bytes,sigma,sigma_se\n";
  for (const auto& row : report.rows) {
    const auto& c = row.config;
    out << (c.name.empty() ? c.dataset : c.name) << ',' << c.algo << ',' << c.k << ',' << c.r << ',' << c.threads
        << ',';
    if (row.ok()) {
      out << std::fixed << std::setprecision(6) << row.seconds << ',' << row.peak_bytes << ','
          << std::setprecision(4) << row.sigma << ',' << row.sigma_se << '\n';
      out << std::defaultfloat;
    } else {
      out << "nan,0,nan,nan\n";
    }
  }
}

void write_report_table(const BenchReport& report, std::ostream& out) {
  out << std::left << std::setw(24) << "dataset" << std::setw(15) << "algo" << std::right << std::setw(6) << "K"
      << std::setw(7) << "R" << std::setw(8) << "threads" << std::setw(12) << "seconds" << std::setw(12)
      << "memory_GB" << std::setw(14) << "sigma" << std::setw(10) << "se" << '\n';
  for (const auto& row : report.rows) {
    const auto& c = row.config;
    out << std::left << std::setw(24) << (c.name.empty() ? c.dataset : c.name) << std::setw(15) << c.algo
        << std::right << std::setw(6) << c.k << std::setw(7) << c.r << std::setw(8) << c.threads;
    if (row.ok()) {
      out << std::fixed << std::setprecision(3) << std::setw(12) << row.seconds << std::setw(12)
          << static_cast<double>(row.peak_bytes) / 1e9 << std::setprecision(2) << std::setw(14) << row.sigma
          << std::setw(10) << row.sigma_se << std::defaultfloat << '\n';
    } else {
      out << "  error: " << row.error << '\n';
    }
  }
  out << "memory measured as " << report.memory_method << '\n';
}

}  // namespace infuser
