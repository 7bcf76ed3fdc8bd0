#include "paircomp/core.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "paircomp/error.h"

namespace paircomp {
namespace {

void CheckItem(int item, int n) {
  if (item < 0 || item >= n) {
    throw std::invalid_argument("item " + std::to_string(item + 1) +
                                " out of range 1.." + std::to_string(n));
  }
}

void CheckPermutation(std::span<const int> perm, int n) {
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permutation size mismatch");
  }
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) {
      throw std::invalid_argument("not a permutation");
    }
    seen[v] = true;
  }
}

// Checks every fundamental cycle of a BFS spanning tree rooted at item 0.
// `log_ratio(i, j)` is ln a(i, j), i.e. the observed estimate of
// ln w_i - ln w_j for an edge of `graph`.
ConsistencyReport CheckCycles(const ComparisonGraph& graph,
                              const std::function<double(int, int)>& log_ratio,
                              double tol) {
  const int n = graph.n();
  ConsistencyReport report;
  if (n == 0) return report;
  if (!graph.IsConnected()) {
    throw DisconnectedGraph("comparison graph is not connected");
  }
  const auto adjacency = graph.Adjacency();
  std::vector<int> parent(n, -1);
  std::vector<int> depth(n, 0);
  std::vector<double> potential(n, 0.0);
  std::vector<bool> visited(n, false);
  std::deque<int> queue = {0};
  visited[0] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adjacency[u]) {
      if (visited[v]) continue;
      visited[v] = true;
      parent[v] = u;
      depth[v] = depth[u] + 1;
      potential[v] = potential[u] - log_ratio(u, v);
      queue.push_back(v);
    }
  }

  int worst_u = -1;
  int worst_v = -1;
  for (const Pair& e : graph.edges()) {
    if (parent[e.j] == e.i || parent[e.i] == e.j) continue;
    const double deviation =
        std::abs(log_ratio(e.i, e.j) - (potential[e.i] - potential[e.j]));
    if (worst_u < 0 || deviation > report.max_cycle_deviation) {
      report.max_cycle_deviation = deviation;
      worst_u = e.i;
      worst_v = e.j;
    }
  }
  report.consistent = report.max_cycle_deviation <= tol;
  if (!report.consistent) {
    // Walk both endpoints up to their lowest common ancestor.
    std::vector<int> up_u = {worst_u};
    std::vector<int> up_v = {worst_v};
    int a = worst_u;
    int b = worst_v;
    while (depth[a] > depth[b]) up_u.push_back(a = parent[a]);
    while (depth[b] > depth[a]) up_v.push_back(b = parent[b]);
    while (a != b) {
      up_u.push_back(a = parent[a]);
      up_v.push_back(b = parent[b]);
    }
    up_v.pop_back();  // common ancestor already in up_u
    std::vector<int> cycle = up_u;
    cycle.insert(cycle.end(), up_v.rbegin(), up_v.rend());
    report.witness = std::move(cycle);
  }
  return report;
}

}  // namespace

Pair OrderedPair(int a, int b) {
  return a < b ? Pair{a, b} : Pair{b, a};
}

ComparisonGraph::ComparisonGraph(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
}

ComparisonGraph::ComparisonGraph(int n, std::span<const Pair> edges)
    : ComparisonGraph(n) {
  for (const Pair& e : edges) AddEdge(e.i, e.j);
}

ComparisonGraph ComparisonGraph::Complete(int n) {
  ComparisonGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges_.push_back({i, j});
  }
  return g;
}

void ComparisonGraph::AddEdge(int a, int b) {
  CheckItem(a, n_);
  CheckItem(b, n_);
  if (a == b) throw std::invalid_argument("self-loop");
  const Pair p = OrderedPair(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), p);
  if (it == edges_.end() || *it != p) edges_.insert(it, p);
}

bool ComparisonGraph::HasEdge(int a, int b) const {
  return std::binary_search(edges_.begin(), edges_.end(), OrderedPair(a, b));
}

std::vector<std::vector<int>> ComparisonGraph::Adjacency() const {
  std::vector<std::vector<int>> adjacency(n_);
  for (const Pair& e : edges_) {
    adjacency[e.i].push_back(e.j);
    adjacency[e.j].push_back(e.i);
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());
  return adjacency;
}

bool ComparisonGraph::IsConnected() const {
  if (n_ <= 1) return true;
  const auto adjacency = Adjacency();
  std::vector<bool> seen(n_, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n_;
}

ComparisonGraph ComparisonGraph::Permuted(std::span<const int> perm) const {
  CheckPermutation(perm, n_);
  ComparisonGraph g(n_);
  for (const Pair& e : edges_) g.AddEdge(perm[e.i], perm[e.j]);
  return g;
}

DataMatrix::DataMatrix(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative item count");
}

void DataMatrix::Set(int i, int j, double worse, double better) {
  CheckItem(i, n_);
  CheckItem(j, n_);
  if (i == j) throw std::invalid_argument("self-comparison");
  if (!std::isfinite(worse) || !std::isfinite(better) || worse < 0.0 ||
      better < 0.0) {
    throw std::invalid_argument("outcome amounts must be finite and >= 0");
  }
  if (i < j) {
    entries_[{i, j}] = {worse, better};
  } else {
    entries_[{j, i}] = {better, worse};
  }
}

std::optional<Outcome> DataMatrix::Get(int i, int j) const {
  auto it = entries_.find(OrderedPair(i, j));
  if (it == entries_.end()) return std::nullopt;
  if (i < j) return it->second;
  return Outcome{it->second.better, it->second.worse};
}

ComparisonGraph DataMatrix::ComparisonSet() const {
  ComparisonGraph g(n_);
  for (const auto& [pair, outcome] : entries_) {
    if (outcome.worse > 0.0 && outcome.better > 0.0) g.AddEdge(pair.i, pair.j);
  }
  return g;
}

ComparisonGraph DataMatrix::Support() const {
  ComparisonGraph g(n_);
  for (const auto& [pair, outcome] : entries_) {
    if (outcome.worse > 0.0 || outcome.better > 0.0) g.AddEdge(pair.i, pair.j);
  }
  return g;
}

DataMatrix DataMatrix::Scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("scale factor must be positive");
  }
  DataMatrix out(n_);
  for (const auto& [pair, outcome] : entries_) {
    out.entries_[pair] = {c * outcome.worse, c * outcome.better};
  }
  return out;
}

DataMatrix DataMatrix::Restricted(const ComparisonGraph& graph) const {
  DataMatrix out(n_);
  for (const auto& [pair, outcome] : entries_) {
    if (graph.HasEdge(pair.i, pair.j)) out.entries_[pair] = outcome;
  }
  return out;
}

DataMatrix DataMatrix::Permuted(std::span<const int> perm) const {
  CheckPermutation(perm, n_);
  DataMatrix out(n_);
  for (const auto& [pair, outcome] : entries_) {
    out.Set(perm[pair.i], perm[pair.j], outcome.worse, outcome.better);
  }
  return out;
}

Ipcm::Ipcm(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative item count");
}

void Ipcm::Set(int i, int j, double value) {
  CheckItem(i, n_);
  CheckItem(j, n_);
  if (i == j) throw std::invalid_argument("diagonal entries are fixed at 1");
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("matrix entries must be positive and finite");
  }
  entries_[{i, j}] = value;
  entries_[{j, i}] = 1.0 / value;
}

std::optional<double> Ipcm::Get(int i, int j) const {
  if (i == j) return 1.0;
  auto it = entries_.find({i, j});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool Ipcm::Known(int i, int j) const {
  return i == j || entries_.contains({i, j});
}

bool Ipcm::IsComplete() const {
  return entries_.size() == static_cast<std::size_t>(n_) * (n_ - 1);
}

ComparisonGraph Ipcm::Graph() const {
  ComparisonGraph g(n_);
  for (const auto& [key, value] : entries_) {
    if (key.first < key.second) g.AddEdge(key.first, key.second);
  }
  return g;
}

Ipcm Ipcm::Permuted(std::span<const int> perm) const {
  CheckPermutation(perm, n_);
  Ipcm out(n_);
  for (const auto& [key, value] : entries_) {
    if (key.first < key.second) out.Set(perm[key.first], perm[key.second], value);
  }
  return out;
}

WeightVector WeightVector::Normalized(std::vector<double> raw) {
  double total = 0.0;
  for (double v : raw) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("weights must be positive and finite");
    }
    total += v;
  }
  for (double& v : raw) v /= total;
  return WeightVector(std::move(raw));
}

ExpectedValueVector ExpectedValueVector::FromRaw(std::vector<double> raw) {
  if (!raw.empty()) {
    const double shift = raw[0];
    for (double& v : raw) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("expected values must be finite");
      }
      v -= shift;
    }
    raw[0] = 0.0;
  }
  return ExpectedValueVector(std::move(raw));
}

Ipcm PcmFromWeights(const WeightVector& w) {
  const int n = static_cast<int>(w.size());
  Ipcm pcm(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pcm.Set(i, j, w[i] / w[j]);
  }
  return pcm;
}

std::string_view ToString(ModelKind model) {
  return model == ModelKind::kLogistic ? "logistic" : "normal";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  if (name == "logistic" || name == "bt") return ModelKind::kLogistic;
  if (name == "normal" || name == "thurstone") return ModelKind::kNormal;
  return std::nullopt;
}

double Cdf(ModelKind model, double x) {
  if (model == ModelKind::kLogistic) return 1.0 / (1.0 + std::exp(-x));
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double LogCdf(ModelKind model, double x) {
  if (model == ModelKind::kLogistic) {
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
  }
  if (x > -37.0) return std::log(Cdf(model, x));
  // Mills-ratio asymptotic expansion of the normal tail.
  const double q = 1.0 / (x * x);
  const double series = q * (-1.0 + q * (3.0 + q * (-15.0 + q * 105.0)));
  return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(series);
}

double Density(ModelKind model, double x) {
  if (model == ModelKind::kLogistic) {
    const double e = std::exp(-std::abs(x));
    return e / ((1.0 + e) * (1.0 + e));
  }
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

DataMatrix ExactProbabilities(const ExpectedValueVector& m,
                              const ComparisonGraph& graph, ModelKind model) {
  if (static_cast<int>(m.size()) != graph.n()) {
    throw std::invalid_argument("expected-value vector and graph sizes differ");
  }
  DataMatrix data(graph.n());
  for (const Pair& e : graph.edges()) {
    data.Set(e.i, e.j, Cdf(model, m[e.j] - m[e.i]), Cdf(model, m[e.i] - m[e.j]));
  }
  return data;
}

Ipcm PcmFromData(const DataMatrix& data) {
  Ipcm pcm(data.n());
  for (const auto& [pair, outcome] : data.entries()) {
    if (outcome.worse > 0.0 && outcome.better > 0.0) {
      pcm.Set(pair.i, pair.j, outcome.better / outcome.worse);
    }
  }
  return pcm;
}

ConsistencyReport DataConsistency(const DataMatrix& data, double tol) {
  const auto log_ratio = [&data](int a, int b) {
    const Pair p = OrderedPair(a, b);
    const Outcome& o = data.entries().at(p);
    const double value = std::log(o.better / o.worse);
    return a < b ? value : -value;
  };
  return CheckCycles(data.ComparisonSet(), log_ratio, tol);
}

ConsistencyReport PcmConsistency(const Ipcm& pcm, double tol) {
  const auto log_ratio = [&pcm](int a, int b) {
    const double value =
        std::log(pcm.entries().at({std::min(a, b), std::max(a, b)}));
    return a < b ? value : -value;
  };
  return CheckCycles(pcm.Graph(), log_ratio, tol);
}

bool FordCondition(const DataMatrix& data) {
  const int n = data.n();
  if (n <= 1) return true;
  std::vector<std::vector<int>> forward(n);
  std::vector<std::vector<int>> backward(n);
  for (const auto& [pair, outcome] : data.entries()) {
    if (outcome.better > 0.0) {
      forward[pair.i].push_back(pair.j);
      backward[pair.j].push_back(pair.i);
    }
    if (outcome.worse > 0.0) {
      forward[pair.j].push_back(pair.i);
      backward[pair.i].push_back(pair.j);
    }
  }
  // Strongly connected iff every vertex is reachable from 0 in the graph and
  // in its transpose.
  const auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(forward) && reaches_all(backward);
}

}  // namespace paircomp
