#ifndef PAIRCOMP_GRAPHS_H_
#define PAIRCOMP_GRAPHS_H_

// Isomorphism classes of small connected comparison graphs.

#include <cstdint>
#include <string>
#include <vector>

#include "paircomp/core.h"

namespace paircomp {

inline constexpr int kMaxCanonicalVertices = 8;
inline constexpr int kMaxEnumerationVertices = 6;

// Edge-set bitstring over the n(n-1)/2 pairs in lexicographic order
// (0,1), (0,2), ..., (n-2,n-1). The first pair is the most significant bit,
// so comparing `bits` numerically is comparing the bitstrings
// lexicographically.
struct CanonicalCode {
  int n = 0;
  std::uint32_t bits = 0;

  auto operator<=>(const CanonicalCode&) const = default;

  // Zero-padded hexadecimal of `bits`.
  std::string Hex() const;
  // The graph whose edge set is this bitstring.
  ComparisonGraph Decode() const;
  static CanonicalCode FromHex(int n, const std::string& hex);
};

// Lexicographically smallest edge bitstring over all vertex permutations.
// Throws TooLarge when n exceeds kMaxCanonicalVertices.
CanonicalCode Canonicalize(const ComparisonGraph& graph);

struct GraphClass {
  int n = 0;
  CanonicalCode code;
  int edge_count = 0;
  // 1-based ordinal within the catalog for n, ordered by (edge_count, code).
  int id = 0;

  // The member whose edge bitstring is the canonical code.
  ComparisonGraph Representative() const { return code.Decode(); }
  std::string Label() const { return "g" + std::to_string(id); }
};

// All connected graphs on n vertices, one per isomorphism class, for
// 2 <= n <= kMaxEnumerationVertices. Throws std::invalid_argument otherwise.
std::vector<GraphClass> EnumerateConnected(int n);

struct GraphProperties {
  // Sorted descending.
  std::vector<int> degree_sequence;
  bool is_regular = false;
  bool is_bipartite = false;
  bool is_star = false;
  bool is_spanning_tree = false;
  int diameter = 0;
};

// Throws DisconnectedGraph.
GraphProperties Properties(const ComparisonGraph& graph);

// Whether adding one edge to a member of `smaller` yields a member of
// `larger`. False unless the edge counts differ by exactly one.
bool SingleEdgeExtension(const GraphClass& smaller, const GraphClass& larger);

}  // namespace paircomp

#endif  // PAIRCOMP_GRAPHS_H_
