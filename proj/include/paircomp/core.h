#ifndef PAIRCOMP_CORE_H_
#define PAIRCOMP_CORE_H_

// Domain types for paired-comparison data, in both the stochastic
// (outcome counts per pair) and the multiplicative (reciprocal ratio matrix)
// representation. Items are 0-based internally; files and reports use
// 1-based labels.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace paircomp {

inline constexpr double kDefaultConsistencyTol = 1e-9;

// Unordered pair of items, stored with i < j.
struct Pair {
  int i = 0;
  int j = 0;
  auto operator<=>(const Pair&) const = default;
};

// Orders the two items so that the smaller index comes first.
Pair OrderedPair(int a, int b);

// Undirected simple graph on vertices 0..n-1.
class ComparisonGraph {
 public:
  explicit ComparisonGraph(int n = 0);
  ComparisonGraph(int n, std::span<const Pair> edges);

  static ComparisonGraph Complete(int n);

  int n() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  // Sorted lexicographically.
  const std::vector<Pair>& edges() const { return edges_; }

  void AddEdge(int a, int b);
  bool HasEdge(int a, int b) const;
  // Neighbour lists, each sorted ascending.
  std::vector<std::vector<int>> Adjacency() const;
  bool IsConnected() const;
  // Relabels vertex v as perm[v].
  ComparisonGraph Permuted(std::span<const int> perm) const;

  bool operator==(const ComparisonGraph&) const = default;

 private:
  int n_;
  std::vector<Pair> edges_;
};

// Outcome amounts for a pair (i, j) seen from item i: `worse` is the amount
// of "i worse than j" results, `better` the amount of "i better than j".
// Amounts are real-valued (counts or probabilities).
struct Outcome {
  double worse = 0.0;
  double better = 0.0;

  bool operator==(const Outcome&) const = default;
};

class DataMatrix {
 public:
  explicit DataMatrix(int n = 0);

  int n() const { return n_; }

  // Records the outcome of (i, j) from i's perspective; i > j is accepted and
  // stored swapped. Throws std::invalid_argument on negative or non-finite
  // amounts, self-pairs, or out-of-range items.
  void Set(int i, int j, double worse, double better);
  // Outcome seen from i's perspective, if the pair is stored.
  std::optional<Outcome> Get(int i, int j) const;
  // Keyed by i < j; the outcome is from the smaller item's perspective.
  const std::map<Pair, Outcome>& entries() const { return entries_; }

  // Pairs where both sides are positive.
  ComparisonGraph ComparisonSet() const;
  // Pairs where at least one side is positive.
  ComparisonGraph Support() const;

  DataMatrix Scaled(double c) const;
  // Keeps only the pairs that are edges of `graph`.
  DataMatrix Restricted(const ComparisonGraph& graph) const;
  DataMatrix Permuted(std::span<const int> perm) const;

 private:
  int n_;
  std::map<Pair, Outcome> entries_;
};

// Positive reciprocal, possibly incomplete, pairwise comparison matrix.
// a(i, j) is how many times item i is preferred to item j. Both orientations
// are stored so reciprocity holds by construction.
class Ipcm {
 public:
  explicit Ipcm(int n = 0);

  int n() const { return n_; }

  // Sets a(i, j) = value and a(j, i) = 1 / value.
  void Set(int i, int j, double value);
  // Diagonal entries are 1.
  std::optional<double> Get(int i, int j) const;
  bool Known(int i, int j) const;
  bool IsComplete() const;
  ComparisonGraph Graph() const;
  // Keyed by (i, j) with i != j; both orientations present.
  const std::map<std::pair<int, int>, double>& entries() const {
    return entries_;
  }
  Ipcm Permuted(std::span<const int> perm) const;

 private:
  int n_;
  std::map<std::pair<int, int>, double> entries_;
};

// Priority vector: positive, sums to 1.
class WeightVector {
 public:
  WeightVector() = default;
  // Scales positive raw values to sum 1. Throws std::invalid_argument on a
  // non-positive or non-finite value.
  static WeightVector Normalized(std::vector<double> raw);

  const std::vector<double>& values() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }

 private:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {}
  std::vector<double> w_;
};

// Expected-value (merit) vector in the gauge m[0] = 0.
class ExpectedValueVector {
 public:
  ExpectedValueVector() = default;
  // Shifts all coordinates by -raw[0].
  static ExpectedValueVector FromRaw(std::vector<double> raw);

  const std::vector<double>& values() const { return m_; }
  std::size_t size() const { return m_.size(); }
  double operator[](std::size_t i) const { return m_[i]; }

 private:
  explicit ExpectedValueVector(std::vector<double> m) : m_(std::move(m)) {}
  std::vector<double> m_;
};

// Complete consistent matrix a(i, j) = w_i / w_j.
Ipcm PcmFromWeights(const WeightVector& w);

struct ConsistencyReport {
  bool consistent = true;
  // Largest |ln(product of ratios)| over the checked cycles.
  double max_cycle_deviation = 0.0;
  // Vertex sequence of the worst cycle (first vertex not repeated) when
  // the check fails.
  std::optional<std::vector<int>> witness;
};

enum class ModelKind { kLogistic, kNormal };

std::string_view ToString(ModelKind model);
// Accepts "logistic"/"bt" and "normal"/"thurstone".
std::optional<ModelKind> ParseModelKind(std::string_view name);

// Cumulative distribution function of the comparison noise.
double Cdf(ModelKind model, double x);
// ln Cdf(x), accurate in the far left tail.
double LogCdf(ModelKind model, double x);
double Density(ModelKind model, double x);

// Exact outcome probabilities for every edge of `graph`:
// worse = F(m_j - m_i), better = F(m_i - m_j).
DataMatrix ExactProbabilities(const ExpectedValueVector& m,
                              const ComparisonGraph& graph, ModelKind model);

// a(i, j) = better / worse for every pair with both sides positive.
Ipcm PcmFromData(const DataMatrix& data);

// Checks that the ratio better/worse multiplies to 1 around every cycle of
// the comparison set. Throws DisconnectedGraph if the set does not connect
// all items.
ConsistencyReport DataConsistency(const DataMatrix& data,
                                  double tol = kDefaultConsistencyTol);
ConsistencyReport PcmConsistency(const Ipcm& pcm,
                                 double tol = kDefaultConsistencyTol);

// Strong connectivity of the directed graph with i -> j when i beat j at
// least partially (better > 0) and j -> i when worse > 0.
bool FordCondition(const DataMatrix& data);

}  // namespace paircomp

#endif  // PAIRCOMP_CORE_H_
