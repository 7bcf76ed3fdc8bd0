#include "paircomp/graphs.h"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "paircomp/error.h"

namespace paircomp {
namespace {

int PairCount(int n) { return n * (n - 1) / 2; }

// Position of pair (i, j), i < j, in lexicographic order.
int PairIndex(int n, int i, int j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::uint32_t PairBit(int n, int i, int j) {
  return std::uint32_t{1} << (PairCount(n) - 1 - PairIndex(n, i, j));
}

std::uint32_t EncodeEdges(const ComparisonGraph& graph) {
  std::uint32_t bits = 0;
  for (const Pair& e : graph.edges()) bits |= PairBit(graph.n(), e.i, e.j);
  return bits;
}

// For every vertex permutation, the bit each source pair maps to.
struct PermutationTable {
  int n = 0;
  std::vector<std::vector<std::uint32_t>> images;  // [perm][pair index]

  explicit PermutationTable(int vertices) : n(vertices) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<std::uint32_t> image(PairCount(n));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Pair p = OrderedPair(perm[i], perm[j]);
          image[PairIndex(n, i, j)] = PairBit(n, p.i, p.j);
        }
      }
      images.push_back(std::move(image));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::uint32_t MinimalImage(std::uint32_t bits) const {
    const int pairs = PairCount(n);
    std::uint32_t best = ~std::uint32_t{0};
    for (const auto& image : images) {
      std::uint32_t mapped = 0;
      for (int k = 0; k < pairs; ++k) {
        if (bits & (std::uint32_t{1} << (pairs - 1 - k))) mapped |= image[k];
      }
      best = std::min(best, mapped);
    }
    return best;
  }
};

const PermutationTable& TableFor(int n) {
  static const std::vector<PermutationTable> tables = [] {
    std::vector<PermutationTable> all;
    for (int v = 0; v <= kMaxCanonicalVertices; ++v) all.emplace_back(v);
    return all;
  }();
  return tables[n];
}

bool ConnectedBits(int n, std::uint32_t bits) {
  if (n <= 1) return true;
  std::uint32_t reached = 1;
  std::uint32_t frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int u = 0; u < n; ++u) {
      if (!(frontier & (1u << u))) continue;
      for (int v = 0; v < n; ++v) {
        if (u == v || (reached & (1u << v))) continue;
        const Pair p = OrderedPair(u, v);
        if (bits & PairBit(n, p.i, p.j)) next |= 1u << v;
      }
    }
    next &= ~reached;
    reached |= next;
    frontier = next;
  }
  return reached == (1u << n) - 1;
}

std::vector<int> BfsDistances(const std::vector<std::vector<int>>& adjacency,
                              int source) {
  std::vector<int> dist(adjacency.size(), -1);
  std::deque<int> queue = {source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adjacency[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace

std::string CanonicalCode::Hex() const {
  const int digits = std::max(1, (PairCount(n) + 3) / 4);
  std::ostringstream out;
  out << std::hex;
  out.width(digits);
  out.fill('0');
  out << bits;
  return out.str();
}

ComparisonGraph CanonicalCode::Decode() const {
  ComparisonGraph graph(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (bits & PairBit(n, i, j)) graph.AddEdge(i, j);
    }
  }
  return graph;
}

CanonicalCode CanonicalCode::FromHex(int n, const std::string& hex) {
  if (n < 0 || n > kMaxCanonicalVertices) {
    throw std::invalid_argument("vertex count out of range for a code");
  }
  std::size_t used = 0;
  const unsigned long value = std::stoul(hex, &used, 16);
  if (used != hex.size() || (PairCount(n) < 32 && value >> PairCount(n))) {
    throw std::invalid_argument("bad canonical code '" + hex + "'");
  }
  return {n, static_cast<std::uint32_t>(value)};
}

CanonicalCode Canonicalize(const ComparisonGraph& graph) {
  if (graph.n() > kMaxCanonicalVertices) {
    throw TooLarge("canonical labelling supports at most " +
                   std::to_string(kMaxCanonicalVertices) + " vertices");
  }
  return {graph.n(), TableFor(graph.n()).MinimalImage(EncodeEdges(graph))};
}

std::vector<GraphClass> EnumerateConnected(int n) {
  if (n < 2 || n > kMaxEnumerationVertices) {
    throw std::invalid_argument("enumeration supports 2 <= n <= " +
                                std::to_string(kMaxEnumerationVertices));
  }
  const PermutationTable& table = TableFor(n);
  const std::uint32_t subsets = std::uint32_t{1} << PairCount(n);
  std::vector<std::uint32_t> codes;
  for (std::uint32_t bits = 1; bits < subsets; ++bits) {
    if (std::popcount(bits) < n - 1 || !ConnectedBits(n, bits)) continue;
    codes.push_back(table.MinimalImage(bits));
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());

  std::vector<GraphClass> classes;
  for (std::uint32_t bits : codes) {
    classes.push_back({n, {n, bits}, std::popcount(bits), 0});
  }
  std::stable_sort(classes.begin(), classes.end(),
                   [](const GraphClass& a, const GraphClass& b) {
                     return a.edge_count < b.edge_count;
                   });
  for (std::size_t k = 0; k < classes.size(); ++k) {
    classes[k].id = static_cast<int>(k) + 1;
  }
  return classes;
}

GraphProperties Properties(const ComparisonGraph& graph) {
  if (!graph.IsConnected()) {
    throw DisconnectedGraph("graph properties need a connected graph");
  }
  const int n = graph.n();
  const auto adjacency = graph.Adjacency();
  GraphProperties props;
  for (const auto& neighbours : adjacency) {
    props.degree_sequence.push_back(static_cast<int>(neighbours.size()));
  }
  std::sort(props.degree_sequence.rbegin(), props.degree_sequence.rend());
  props.is_regular =
      n == 0 || props.degree_sequence.front() == props.degree_sequence.back();
  props.is_spanning_tree = graph.edge_count() == n - 1;
  props.is_star = n >= 2 && props.is_spanning_tree &&
                  props.degree_sequence.front() == n - 1;

  props.is_bipartite = true;
  std::vector<int> side(n, -1);
  for (int start = 0; start < n && props.is_bipartite; ++start) {
    if (side[start] >= 0) continue;
    side[start] = 0;
    std::deque<int> queue = {start};
    while (!queue.empty() && props.is_bipartite) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adjacency[u]) {
        if (side[v] < 0) {
          side[v] = 1 - side[u];
          queue.push_back(v);
        } else if (side[v] == side[u]) {
          props.is_bipartite = false;
          break;
        }
      }
    }
  }

  for (int s = 0; s < n; ++s) {
    const auto dist = BfsDistances(adjacency, s);
    props.diameter =
        std::max(props.diameter, *std::max_element(dist.begin(), dist.end()));
  }
  return props;
}

bool SingleEdgeExtension(const GraphClass& smaller, const GraphClass& larger) {
  if (smaller.n != larger.n || larger.edge_count != smaller.edge_count + 1) {
    return false;
  }
  const ComparisonGraph base = smaller.Representative();
  const int n = smaller.n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (base.HasEdge(i, j)) continue;
      ComparisonGraph grown = base;
      grown.AddEdge(i, j);
      if (Canonicalize(grown) == larger.code) return true;
    }
  }
  return false;
}

}  // namespace paircomp
