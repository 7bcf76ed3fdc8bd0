#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "paircomp/core.h"
#include "paircomp/error.h"
#include "test_support.h"

namespace paircomp {
namespace {

using testing::ConsistentCounts;
using testing::ConsistentMatrix;
using testing::ModifiedIncomplete;
using testing::ModifiedProbabilities;

// Strong connectivity via transitive closure; independent of the
// reachability search in FordCondition.
bool StronglyConnectedOracle(const DataMatrix& d) {
  const int n = d.n();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& [p, o] : d.entries()) {
    if (o.better > 0) reach[p.i][p.j] = true;
    if (o.worse > 0) reach[p.j][p.i] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!reach[i][j]) return false;
  return true;
}

bool IsCycleOf(const std::vector<int>& cycle, const ComparisonGraph& g) {
  if (cycle.size() < 3) return false;
  if (std::set<int>(cycle.begin(), cycle.end()).size() != cycle.size()) return false;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    if (!g.HasEdge(cycle[k], cycle[(k + 1) % cycle.size()])) return false;
  }
  return true;
}

TEST_CASE("ComparisonGraph basics") {
  ComparisonGraph g(4);
  g.AddEdge(2, 0);
  g.AddEdge(0, 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.HasEdge(0, 2));
  CHECK_FALSE(g.IsConnected());
  CHECK_THROWS_AS(g.AddEdge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.AddEdge(0, 4), std::invalid_argument);
  CHECK(ComparisonGraph::Complete(4).edge_count() == 6);
  CHECK(ComparisonGraph::Complete(1).IsConnected());
}

TEST_CASE("DataMatrix stores outcomes from the smaller item's perspective") {
  DataMatrix d(3);
  d.Set(2, 0, 4.0, 1.0);  // item 3 worse than item 1 four times
  CHECK(d.Get(0, 2)->worse == 1.0);
  CHECK(d.Get(0, 2)->better == 4.0);
  CHECK(d.Get(2, 0)->worse == 4.0);
  CHECK_FALSE(d.Get(0, 1).has_value());
  CHECK_THROWS_AS(d.Set(0, 1, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(d.Set(0, 1, NAN, 1.0), std::invalid_argument);
}

TEST_CASE("Ipcm keeps reciprocity") {
  Ipcm a(3);
  a.Set(2, 1, 4.0);
  CHECK(*a.Get(2, 1) == 4.0);
  CHECK(*a.Get(1, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(*a.Get(0, 0) == 1.0);
  CHECK_FALSE(a.Known(0, 1));
  CHECK_FALSE(a.IsComplete());
  CHECK_THROWS_AS(a.Set(0, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(a.Set(0, 0, 2.0), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  Ipcm b(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) b.Set(i, j, std::exp(u(rng)));
  for (const auto& [key, value] : b.entries()) {
    const double back = *b.Get(key.second, key.first);
    CHECK(std::abs(value * back - 1.0) < 1e-12);
  }
}

TEST_CASE("WeightVector and ExpectedValueVector invariants") {
  const WeightVector w = WeightVector::Normalized({1, 2, 3});
  CHECK(w[0] == doctest::Approx(1.0 / 6));
  CHECK(w[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(WeightVector::Normalized({1, 0}), std::invalid_argument);
  const ExpectedValueVector m = ExpectedValueVector::FromRaw({2.0, 3.0, 1.5});
  CHECK(m[0] == 0.0);
  CHECK(m[1] == 1.0);
  CHECK(m[2] == -0.5);
}

TEST_CASE("ExactProbabilities") {
  SUBCASE("worked example, printed to 3 decimals") {
    const auto m = ExpectedValueVector::FromRaw({0, 0.25, 0.75, 1.75});
    const DataMatrix d =
        ExactProbabilities(m, ComparisonGraph::Complete(4), ModelKind::kLogistic);
    const DataMatrix printed = testing::RoundedProbabilities();
    for (const auto& [p, o] : d.entries()) {
      CHECK(std::abs(o.worse - printed.Get(p.i, p.j)->worse) <= 0.0005);
      CHECK(std::abs(o.better - printed.Get(p.i, p.j)->better) <= 0.0005);
      CHECK(o.worse + o.better == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("equal merits") {
    const ComparisonGraph g(2, std::vector<Pair>{{0, 1}});
    const DataMatrix d =
        ExactProbabilities(ExpectedValueVector::FromRaw({0, 0}), g, ModelKind::kLogistic);
    CHECK(d.Get(0, 1)->worse == 0.5);
    CHECK(d.Get(0, 1)->better == 0.5);
    const DataMatrix dn =
        ExactProbabilities(ExpectedValueVector::FromRaw({0, 0}), g, ModelKind::kNormal);
    CHECK(dn.Get(0, 1)->worse == doctest::Approx(0.5));
  }
  SUBCASE("ln 2 gap") {
    const ComparisonGraph g(2, std::vector<Pair>{{0, 1}});
    const DataMatrix d = ExactProbabilities(
        ExpectedValueVector::FromRaw({0, std::log(2.0)}), g, ModelKind::kLogistic);
    CHECK(d.Get(0, 1)->worse == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(d.Get(0, 1)->better == doctest::Approx(1.0 / 3).epsilon(1e-14));
  }
  SUBCASE("pairs outside the graph are absent") {
    ComparisonGraph g(3);
    g.AddEdge(0, 2);
    const DataMatrix d = ExactProbabilities(ExpectedValueVector::FromRaw({0, 1, 2}),
                                            g, ModelKind::kNormal);
    CHECK(d.entries().size() == 1);
    CHECK_FALSE(d.Get(0, 1).has_value());
  }
}

TEST_CASE("Cdf helpers") {
  CHECK(Cdf(ModelKind::kNormal, 1.0) == doctest::Approx(0.8413447460685429));
  for (double x : {-50.0, -31.0, -29.0, -3.0, 0.0, 4.0}) {
    const double direct = std::log(Cdf(ModelKind::kNormal, x));
    if (std::isfinite(direct) && direct > -700) {
      CHECK(LogCdf(ModelKind::kNormal, x) == doctest::Approx(direct).epsilon(1e-8));
    }
    CHECK(std::isfinite(LogCdf(ModelKind::kNormal, x)));
    CHECK(LogCdf(ModelKind::kLogistic, x) ==
          doctest::Approx(-std::log1p(std::exp(-x))).epsilon(1e-12));
  }
  CHECK(ParseModelKind("thurstone") == ModelKind::kNormal);
  CHECK_FALSE(ParseModelKind("probit").has_value());
}

TEST_CASE("PcmFromData") {
  const Ipcm a = PcmFromData(ConsistentCounts());
  CHECK(*a.Get(0, 1) == 2.0);
  CHECK(*a.Get(1, 3) == 0.5);
  CHECK(*a.Get(3, 1) == 2.0);
  CHECK(a.IsComplete());

  DataMatrix equal(3);
  equal.Set(0, 1, 2, 2);
  equal.Set(1, 2, 0.3, 0.3);
  const Ipcm ones = PcmFromData(equal);
  for (const auto& [k, v] : ones.entries()) CHECK(v == 1.0);

  const Ipcm mod = PcmFromData(ModifiedProbabilities());
  CHECK(*mod.Get(2, 3) == doctest::Approx(0.883).epsilon(0.001));
  CHECK(*mod.Get(0, 1) == doctest::Approx(0.779).epsilon(0.001));
  CHECK(*mod.Get(3, 0) == doctest::Approx(5.755).epsilon(0.001));

  DataMatrix one_sided(3);
  one_sided.Set(0, 1, 0, 3);
  one_sided.Set(1, 2, 1, 1);
  const Ipcm partial = PcmFromData(one_sided);
  CHECK_FALSE(partial.Known(0, 1));
  CHECK_FALSE(partial.Known(1, 0));
  CHECK(partial.Known(1, 2));
}

TEST_CASE("DataConsistency") {
  CHECK(DataConsistency(ConsistentCounts()).consistent);

  const ConsistencyReport bad = DataConsistency(ModifiedProbabilities());
  CHECK_FALSE(bad.consistent);
  REQUIRE(bad.witness.has_value());
  CHECK(std::set<int>(bad.witness->begin(), bad.witness->end()) ==
        std::set<int>{0, 2, 3});
  // |ln(a13 / a14) - ln(a43)| from the raw ratios.
  const double a13 = 0.321 / 0.679, a14 = 0.148 / 0.852, a43 = 0.531 / 0.469;
  CHECK(bad.max_cycle_deviation ==
        doctest::Approx(std::abs(std::log(a13 / a14) - std::log(a43))).epsilon(1e-12));
  CHECK(a43 == doctest::Approx(1.132).epsilon(0.001));

  SUBCASE("spanning-tree data has no cycles") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = testing::RandomConnectedGraph(rng, 6, 0.0);
      CHECK(g.edge_count() == 5);
      const auto r = DataConsistency(testing::RandomData(rng, g));
      CHECK(r.consistent);
      CHECK(r.max_cycle_deviation == 0.0);
    }
  }
  SUBCASE("disconnected comparison set") {
    DataMatrix d(3);
    d.Set(0, 1, 1, 1);
    d.Set(1, 2, 0, 2);  // one-sided: not in the comparison set
    CHECK_THROWS_AS(DataConsistency(d), DisconnectedGraph);
  }
}

TEST_CASE("PcmConsistency") {
  CHECK(PcmConsistency(ConsistentMatrix()).consistent);
  CHECK_FALSE(PcmConsistency(PcmFromData(ModifiedProbabilities())).consistent);
  const ConsistencyReport incomplete = PcmConsistency(PcmFromData(ModifiedIncomplete()));
  CHECK_FALSE(incomplete.consistent);
  REQUIRE(incomplete.witness.has_value());
  CHECK(IsCycleOf(*incomplete.witness, PcmFromData(ModifiedIncomplete()).Graph()));
  Ipcm disconnected(3);
  disconnected.Set(0, 1, 2.0);
  CHECK_THROWS_AS(PcmConsistency(disconnected), DisconnectedGraph);
}

TEST_CASE("FordCondition") {
  CHECK(FordCondition(ConsistentCounts()));
  CHECK(StronglyConnectedOracle(ConsistentCounts()));

  DataMatrix single(3);
  single.Set(0, 1, 1, 1);
  CHECK_FALSE(FordCondition(single));

  DataMatrix tree(3);
  tree.Set(0, 1, 1, 1);
  tree.Set(1, 2, 0, 2);
  CHECK_FALSE(FordCondition(tree));

  // A directed 3-cycle of one-sided results is strongly connected even
  // though no pair has both sides positive.
  DataMatrix cycle(3);
  cycle.Set(0, 1, 0, 1);
  cycle.Set(1, 2, 0, 1);
  cycle.Set(0, 2, 1, 0);
  CHECK(FordCondition(cycle));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> side(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 5;
    const auto g = testing::RandomConnectedGraph(rng, n, 0.3);
    DataMatrix d(n);
    for (const Pair& e : g.edges()) {
      const int s = side(rng);
      d.Set(e.i, e.j, s == 1 ? 0.0 : 1.0, s == 2 ? 0.0 : 1.5);
    }
    CHECK(FordCondition(d) == StronglyConnectedOracle(d));
  }
}

TEST_CASE("Consistency properties on random data") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 4;
    const auto g = testing::RandomConnectedGraph(rng, n, 0.5);
    const DataMatrix d = testing::RandomData(rng, g);

    // Both representations agree.
    const auto via_data = DataConsistency(d);
    const auto via_pcm = PcmConsistency(PcmFromData(d));
    CHECK(via_data.consistent == via_pcm.consistent);
    CHECK(std::abs(via_data.max_cycle_deviation - via_pcm.max_cycle_deviation) < 1e-12);

    // Scaling leaves the verdict and deviation unchanged.
    for (double c : {0.5, 3.0, 100.0}) {
      const auto scaled = DataConsistency(d.Scaled(c));
      CHECK(scaled.consistent == via_data.consistent);
      CHECK(std::abs(scaled.max_cycle_deviation - via_data.max_cycle_deviation) < 1e-12);
    }

    // Relabelling never changes the verdict; the witness stays a cycle.
    const auto perm = testing::RandomPermutation(rng, n);
    const auto permuted = DataConsistency(d.Permuted(perm));
    CHECK(permuted.consistent == via_data.consistent);
    if (permuted.witness) {
      CHECK(IsCycleOf(*permuted.witness, d.Permuted(perm).ComparisonSet()));
    }

    // Exact model probabilities are always consistent.
    const auto m = testing::RandomM(rng, n);
    for (ModelKind model : {ModelKind::kLogistic, ModelKind::kNormal}) {
      const auto exact = ExactProbabilities(m, g, model);
      if (model == ModelKind::kLogistic) CHECK(DataConsistency(exact).consistent);
      for (const auto& [p, o] : exact.entries()) {
        CHECK(o.worse + o.better == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("PcmFromWeights is consistent") {
  const WeightVector w = WeightVector::Normalized({0.1, 0.2, 0.3, 0.4});
  const Ipcm a = PcmFromWeights(w);
  CHECK(a.IsComplete());
  CHECK(*a.Get(3, 0) == doctest::Approx(4.0));
  CHECK(PcmConsistency(a).consistent);
}

}  // namespace
}  // namespace paircomp
