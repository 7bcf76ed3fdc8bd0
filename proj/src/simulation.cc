#include "paircomp/simulation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "paircomp/error.h"
#include "paircomp/estimators.h"

namespace paircomp {
namespace {

constexpr long kBlockSize = 1024;

std::vector<double> AverageRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    const double rank = 0.5 * static_cast<double>(start + end + 1);
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

int Sign(double x) { return (x > 0.0) - (x < 0.0); }

double Euclidean(std::span<const double> x, std::span<const double> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(total);
}

void CheckBounds(const MeasureSet& s) {
  const auto in_unit = [](double v) { return v >= -1.0 && v <= 1.0; };
  if (!(s.eu_m >= 0.0) || !(s.eu_w >= 0.0 && s.eu_w <= std::sqrt(2.0)) ||
      (s.pe_m && !in_unit(*s.pe_m)) || (s.pe_w && !in_unit(*s.pe_w)) ||
      !in_unit(s.rho) || !in_unit(s.tau)) {
    throw std::logic_error("similarity measure outside its range");
  }
}

// Running mean and sum of squared deviations, folded in replication order.
struct Accumulator {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  CellStats Stats() const {
    CellStats stats;
    stats.count = count;
    stats.mean = mean;
    stats.stddev = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0;
    return stats;
  }
};

struct ReplicationOutcome {
  std::vector<MeasureSet> measures;  // per graph class
  std::optional<ExcludedReplication> failure;
};

ReplicationOutcome RunReplication(const SimulationConfig& config,
                                  const std::vector<GraphClass>& catalog,
                                  const std::vector<ComparisonGraph>& members,
                                  long replication) {
  ReplicationOutcome outcome;
  Rng rng = ReplicationRng(config.seed, replication);
  const WeightVector initial = DrawInitialWeights(rng, config.n);
  const ExpectedValueVector m0 = MFromWeights(initial);
  const DataMatrix exact =
      ExactProbabilities(m0, ComparisonGraph::Complete(config.n), config.model);
  const DataMatrix data = PerturbData(exact, config.perturb, rng, config.epsilon);

  MleResult complete;
  try {
    complete = BtMle(data, config.model);
  } catch (const NoConvergence&) {
    outcome.failure = ExcludedReplication{replication, 0};
    return outcome;
  }
  const WeightVector w_complete = WeightsFromM(complete.m);
  outcome.measures.reserve(catalog.size());
  for (std::size_t g = 0; g < catalog.size(); ++g) {
    try {
      const MleResult partial = BtMle(data.Restricted(members[g]), config.model);
      outcome.measures.push_back(Similarity(complete.m, w_complete, partial.m,
                                            WeightsFromM(partial.m)));
    } catch (const NoConvergence&) {
      outcome.failure = ExcludedReplication{replication, catalog[g].id};
      outcome.measures.clear();
      return outcome;
    }
  }
  return outcome;
}

}  // namespace

std::string_view MeasureName(Measure measure) {
  switch (measure) {
    case Measure::kEuM: return "eu_m";
    case Measure::kEuW: return "eu_w";
    case Measure::kPeM: return "pe_m";
    case Measure::kPeW: return "pe_w";
    case Measure::kRho: return "rho";
    case Measure::kTau: return "tau";
  }
  return "";
}

std::optional<Measure> ParseMeasure(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (MeasureName(m) == name) return m;
  }
  return std::nullopt;
}

bool HigherIsBetter(Measure measure) {
  return measure != Measure::kEuM && measure != Measure::kEuW;
}

bool Better(Measure measure, double a, double b) {
  return HigherIsBetter(measure) ? a > b : a < b;
}

std::optional<double> MeasureSet::Get(Measure measure) const {
  switch (measure) {
    case Measure::kEuM: return eu_m;
    case Measure::kEuW: return eu_w;
    case Measure::kPeM: return pe_m;
    case Measure::kPeW: return pe_w;
    case Measure::kRho: return rho;
    case Measure::kTau: return tau;
  }
  return std::nullopt;
}

const GraphSummary& SimulationSummary::ForGraph(int id) const {
  for (const GraphSummary& g : graphs) {
    if (g.graph.id == id) return g;
  }
  throw std::out_of_range("no graph g" + std::to_string(id) + " in summary");
}

Rng ReplicationRng(std::uint64_t seed, long replication) {
  const auto r = static_cast<std::uint64_t>(replication);
  std::seed_seq seq = {static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(r),
                       static_cast<std::uint32_t>(r >> 32)};
  return Rng(seq);
}

WeightVector WeightsFromDraws(std::span<const int> draws) {
  std::vector<double> raw;
  raw.reserve(draws.size());
  for (int d : draws) {
    if (d < 1 || d > 9) throw std::invalid_argument("draw outside 1..9");
    raw.push_back(d);
  }
  return WeightVector::Normalized(std::move(raw));
}

WeightVector DrawInitialWeights(Rng& rng, int n) {
  std::uniform_int_distribution<int> digit(1, 9);
  std::vector<int> draws(n);
  for (int& d : draws) d = digit(rng);
  return WeightsFromDraws(draws);
}

DataMatrix PerturbData(const DataMatrix& data, double level, Rng& rng,
                       double epsilon) {
  if (!(level >= 0.0 && level < 1.0)) {
    throw std::invalid_argument("perturbation level must lie in [0, 1)");
  }
  if (level == 0.0) return data;
  std::uniform_real_distribution<double> offset(-level, level);
  DataMatrix out(data.n());
  for (const auto& [pair, outcome] : data.entries()) {
    if (!(outcome.worse > epsilon && outcome.worse < 1.0 - epsilon)) {
      throw std::invalid_argument("probabilities to perturb must lie in (0, 1)");
    }
    double worse = 0.0;
    do {
      worse = outcome.worse + offset(rng);
    } while (!(worse > epsilon && worse < 1.0 - epsilon));
    out.Set(pair.i, pair.j, worse, 1.0 - worse);
  }
  return out;
}

std::optional<double> Pearson(std::span<const double> x,
                              std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double cov = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mean_x) * (y[i] - mean_y);
    var_x += (x[i] - mean_x) * (x[i] - mean_x);
    var_y += (y[i] - mean_y) * (y[i] - mean_y);
  }
  if (var_x == 0.0 || var_y == 0.0) return std::nullopt;
  return std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0);
}

double SpearmanRho(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  double d2 = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double KendallTau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total += Sign(x[i] - x[j]) * Sign(y[i] - y[j]);
    }
  }
  return 2.0 * static_cast<double>(total) / (static_cast<double>(n) * (n - 1.0));
}

MeasureSet Similarity(const ExpectedValueVector& mK, const WeightVector& wK,
                      const ExpectedValueVector& mI, const WeightVector& wI) {
  if (mK.size() != mI.size() || wK.size() != wI.size() || mK.size() != wK.size()) {
    throw std::invalid_argument("similarity needs vectors of equal length");
  }
  MeasureSet s;
  s.eu_m = Euclidean(mK.values(), mI.values());
  s.eu_w = Euclidean(wK.values(), wI.values());
  s.pe_m = Pearson(mK.values(), mI.values());
  s.pe_w = Pearson(wK.values(), wI.values());
  s.rho = SpearmanRho(mK.values(), mI.values());
  s.tau = KendallTau(mK.values(), mI.values());
  return s;
}

SimulationSummary Run(const SimulationConfig& config, const RunOptions& options) {
  if (!(config.perturb >= 0.0 && config.perturb < 1.0) || config.num_sims < 1) {
    throw std::invalid_argument("invalid simulation configuration");
  }
  const std::vector<GraphClass> catalog = EnumerateConnected(config.n);
  std::vector<ComparisonGraph> members;
  for (const GraphClass& c : catalog) members.push_back(c.Representative());

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);

  std::vector<std::array<Accumulator, kAllMeasures.size()>> acc(catalog.size());
  SimulationSummary summary;
  summary.config = config;

  for (long block_start = 0; block_start < config.num_sims;
       block_start += kBlockSize) {
    const long block_end = std::min(config.num_sims, block_start + kBlockSize);
    std::vector<ReplicationOutcome> block(block_end - block_start);
    std::atomic<long> next{block_start};
    const auto worker = [&] {
      for (long r = next++; r < block_end; r = next++) {
        block[r - block_start] = RunReplication(config, catalog, members, r);
      }
    };
    const int workers =
        static_cast<int>(std::min<long>(threads, block_end - block_start));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    for (const ReplicationOutcome& outcome : block) {
      if (outcome.failure) {
        ++summary.excluded;
        summary.excluded_details.push_back(*outcome.failure);
        continue;
      }
      for (std::size_t g = 0; g < catalog.size(); ++g) {
        const MeasureSet& s = outcome.measures[g];
        CheckBounds(s);
        for (Measure m : kAllMeasures) {
          if (const auto value = s.Get(m)) {
            acc[g][static_cast<std::size_t>(m)].Add(*value);
          }
        }
      }
    }
    if (options.progress) options.progress(block_end, config.num_sims);
  }

  for (std::size_t g = 0; g < catalog.size(); ++g) {
    GraphSummary row;
    row.graph = catalog[g];
    for (std::size_t k = 0; k < kAllMeasures.size(); ++k) {
      row.cells[k] = acc[g][k].Stats();
    }
    summary.graphs.push_back(row);
  }
  return summary;
}

double ErrorBound(long num_sims, double alpha, double sigma) {
  if (num_sims < 1 || !(alpha > 0.0 && alpha < 1.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("error bound needs N >= 1, 0 < alpha < 1, sigma > 0");
  }
  const boost::math::normal standard;
  const double u = boost::math::quantile(standard, 1.0 - alpha / 2.0);
  return u * sigma / std::sqrt(static_cast<double>(num_sims));
}

}  // namespace paircomp
