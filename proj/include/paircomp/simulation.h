#ifndef PAIRCOMP_SIMULATION_H_
#define PAIRCOMP_SIMULATION_H_

// Monte-Carlo measurement of how much of the complete-comparison estimate
// each connected comparison structure retains under perturbed data.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "paircomp/core.h"
#include "paircomp/graphs.h"

namespace paircomp {

using Rng = std::mt19937_64;

struct SimulationConfig {
  int n = 4;
  double perturb = 0.15;
  long num_sims = 1000;
  std::uint64_t seed = 1;
  ModelKind model = ModelKind::kLogistic;
  // Perturbed probabilities are kept inside (epsilon, 1 - epsilon).
  double epsilon = 1e-6;
  // Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
};

enum class Measure { kEuM, kEuW, kPeM, kPeW, kRho, kTau };

inline constexpr std::array<Measure, 6> kAllMeasures = {
    Measure::kEuM, Measure::kEuW, Measure::kPeM,
    Measure::kPeW, Measure::kRho, Measure::kTau};

// "eu_m", "eu_w", "pe_m", "pe_w", "rho", "tau".
std::string_view MeasureName(Measure measure);
std::optional<Measure> ParseMeasure(std::string_view name);
// Distances are better when small, correlations when large.
bool HigherIsBetter(Measure measure);
// True when `a` is a strictly better value than `b` for this measure.
bool Better(Measure measure, double a, double b);

struct MeasureSet {
  double eu_m = 0.0;
  double eu_w = 0.0;
  // Empty when either vector has zero variance.
  std::optional<double> pe_m;
  std::optional<double> pe_w;
  double rho = 1.0;
  double tau = 1.0;

  std::optional<double> Get(Measure measure) const;
};

struct CellStats {
  double mean = 0.0;
  // Sample standard deviation (divisor count - 1); 0 when count < 2.
  double stddev = 0.0;
  long count = 0;
};

struct GraphSummary {
  GraphClass graph;
  std::array<CellStats, kAllMeasures.size()> cells;

  const CellStats& Cell(Measure measure) const {
    return cells[static_cast<std::size_t>(measure)];
  }
};

struct ExcludedReplication {
  long replication = 0;
  // Graph id whose estimate failed; 0 for the complete-data estimate.
  int graph_id = 0;
};

struct SimulationSummary {
  SimulationConfig config;
  // Ordered as the graph catalog for config.n.
  std::vector<GraphSummary> graphs;
  long excluded = 0;
  std::vector<ExcludedReplication> excluded_details;

  // Throws std::out_of_range.
  const GraphSummary& ForGraph(int id) const;
};

// Independent generator for replication `replication` of a run.
Rng ReplicationRng(std::uint64_t seed, long replication);

// Normalizes integer draws (each in 1..9) to a weight vector.
WeightVector WeightsFromDraws(std::span<const int> draws);
// n independent uniform integers in 1..9, normalized.
WeightVector DrawInitialWeights(Rng& rng, int n);

// Adds an independent uniform offset in [-level, level] to every `worse`
// probability, redrawing each offset until the result lies strictly inside
// (epsilon, 1 - epsilon), and sets better = 1 - worse. Pairs are visited in
// lexicographic order.
DataMatrix PerturbData(const DataMatrix& data, double level, Rng& rng,
                       double epsilon = 1e-6);

std::optional<double> Pearson(std::span<const double> x,
                              std::span<const double> y);
// 1 - 6 sum d^2 / (n (n^2 - 1)) with average ranks for ties.
double SpearmanRho(std::span<const double> x, std::span<const double> y);
// Mean of sign(x_i - x_j) sign(y_i - y_j) over pairs i < j.
double KendallTau(std::span<const double> x, std::span<const double> y);

// Compares the complete-data estimate (mK, wK) with an incomplete-data
// estimate (mI, wI).
MeasureSet Similarity(const ExpectedValueVector& mK, const WeightVector& wK,
                      const ExpectedValueVector& mI, const WeightVector& wI);

struct RunOptions {
  // Called from the aggregating thread with (replications done, total).
  std::function<void(long, long)> progress;
};

SimulationSummary Run(const SimulationConfig& config,
                      const RunOptions& options = {});

// u * sigma / sqrt(N) where Phi(u) = 1 - alpha / 2.
double ErrorBound(long num_sims, double alpha, double sigma);

}  // namespace paircomp

#endif  // PAIRCOMP_SIMULATION_H_
