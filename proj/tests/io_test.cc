#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "paircomp/error.h"
#include "paircomp/io.h"
#include "test_support.h"

namespace paircomp {
namespace {

DataMatrix Pairs(const std::string& text, std::optional<int> n = {}) {
  std::istringstream in(text);
  return ParsePairs(in, n);
}

Ipcm Pcm(const std::string& text, double tol = kDefaultReciprocityTol) {
  std::istringstream in(text);
  return ParsePcm(in, tol);
}

bool SameBits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST_CASE("FormatDouble round trips") {
  CHECK(FormatDouble(0.5) == "0.5");
  CHECK(FormatDouble(3.0) == "3");
  CHECK(FormatDouble(0.1) == "0.1");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(SameBits(ParseDouble(FormatDouble(x), 0), x));
  }
  CHECK_THROWS_AS(ParseDouble("1.5x", 3), ParseError);
  CHECK_THROWS_AS(ParseDouble("", 3), ParseError);
}

TEST_CASE("ParsePairs") {
  SUBCASE("basic file") {
    const DataMatrix d = Pairs(
        "i,j,worse,better\n"
        "1,2,1,2\n"
        "3,1,2,1\n"
        "\n"
        "2,3, 0.5 ,1.5\n");
    CHECK(d.n() == 3);
    CHECK(d.entries().size() == 3);
    CHECK(*d.Get(0, 1) == Outcome{1, 2});
    // Rows written from the larger index are stored from the smaller side.
    CHECK(*d.Get(0, 2) == Outcome{1, 2});
    CHECK(*d.Get(1, 2) == Outcome{0.5, 1.5});
  }
  SUBCASE("item count override adds isolated items") {
    const DataMatrix d = Pairs("i,j,worse,better\n1,2,1,1\n", 4);
    CHECK(d.n() == 4);
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n1,3,1,1\n", 2), ParseError);
  }
  SUBCASE("zero counts are allowed") {
    const DataMatrix d = Pairs("i,j,worse,better\n1,2,0,3\n");
    CHECK(*d.Get(0, 1) == Outcome{0, 3});
  }
  SUBCASE("header") {
    CHECK_THROWS_AS(Pairs("i,j,better,worse\n1,2,1,1\n"), BadHeader);
    CHECK_THROWS_AS(Pairs(""), BadHeader);
  }
  SUBCASE("duplicate pair in either orientation") {
    try {
      Pairs("i,j,worse,better\n1,2,1,1\n2,1,1,1\n");
      FAIL("expected DuplicatePair");
    } catch (const DuplicatePair& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).starts_with("line 3: "));
    }
  }
  SUBCASE("bad rows") {
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n1,2,-1,1\n"), NegativeCount);
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n1,1,1,1\n"), ParseError);
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n0,1,1,1\n"), ParseError);
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n1,2,1\n"), ParseError);
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n1,2,one,1\n"), ParseError);
    CHECK_THROWS_AS(Pairs("i,j,worse,better\n1,2,inf,1\n"), ParseError);
  }
}

TEST_CASE("ParsePcm") {
  SUBCASE("complete consistent matrix") {
    const Ipcm a = Pcm(
        "1,2,2,1\n"
        "0.5,1,1,0.5\n"
        "0.5,1,1,0.5\n"
        "1,2,2,1\n");
    CHECK(a.n() == 4);
    CHECK(a.IsComplete());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(*a.Get(i, j) == *testing::ConsistentMatrix().Get(i, j));
  }
  SUBCASE("missing entries") {
    const Ipcm a = Pcm(
        "1,2,4,8\n"
        "0.5,1,*,*\n"
        "0.25,*,1,2\n"
        "0.125,*,0.5,1\n");
    CHECK_FALSE(a.IsComplete());
    CHECK(a.Graph().edge_count() == 4);
    CHECK_FALSE(a.Known(1, 2));
    CHECK_FALSE(a.Get(3, 1).has_value());
    CHECK(*a.Get(3, 2) == 0.5);
  }
  SUBCASE("reciprocity") {
    CHECK_THROWS_AS(Pcm("1,2\n3,1\n"), NotReciprocal);
    CHECK_THROWS_AS(Pcm("1,2\n*,1\n"), NotReciprocal);
    // The upper triangle wins within the tolerance.
    const Ipcm a = Pcm("1,3\n0.333,1\n", 0.01);
    CHECK(*a.Get(0, 1) == 3.0);
    CHECK(*a.Get(1, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK_THROWS_AS(Pcm("1,3\n0.333,1\n"), NotReciprocal);
  }
  SUBCASE("bad entries") {
    CHECK_THROWS_AS(Pcm("2,1\n1,1\n"), BadDiagonal);
    CHECK_THROWS_AS(Pcm("*,1\n1,1\n"), BadDiagonal);
    CHECK_THROWS_AS(Pcm("1,0\n0,1\n"), NonPositiveEntry);
    CHECK_THROWS_AS(Pcm("1,-2\n-0.5,1\n"), NonPositiveEntry);
    CHECK_THROWS_AS(Pcm("1,2,3\n0.5,1\n"), ParseError);
    CHECK_THROWS_AS(Pcm("1,x\n1,1\n"), ParseError);
  }
}

TEST_CASE("Pairs files round trip bit-exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    const DataMatrix d = testing::RandomData(
        rng, testing::RandomConnectedGraph(rng, n, 0.4), 0.0, 1e3);
    std::stringstream buffer;
    WritePairs(buffer, d);
    const DataMatrix back = ParsePairs(buffer, n);
    REQUIRE(back.entries().size() == d.entries().size());
    for (const auto& [pair, outcome] : d.entries()) {
      const Outcome other = back.entries().at(pair);
      CHECK(SameBits(other.worse, outcome.worse));
      CHECK(SameBits(other.better, outcome.better));
    }
  }
}

TEST_CASE("Matrix files round trip bit-exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    Ipcm a(n);
    const ComparisonGraph g = testing::RandomConnectedGraph(rng, n, 0.3);
    for (const Pair& e : g.edges()) {
      a.Set(e.i, e.j, std::exp(u(rng)));
    }
    std::stringstream buffer;
    WritePcm(buffer, a);
    const Ipcm back = ParsePcm(buffer);
    CHECK(back.Graph() == a.Graph());
    for (const auto& [key, value] : a.entries()) {
      if (key.first > key.second) continue;
      CHECK(SameBits(*back.Get(key.first, key.second), value));
    }
  }
}

TEST_CASE("Results files") {
  std::vector<ResultRow> rows = {
      {4, 0.15, "logistic", 1, 3, "0e", Measure::kEuW, 0.0123456789, 0.01, 10000, 0},
      {4, 0.15, "logistic", 6, 6, "3f", Measure::kTau, 1, 0, 10000, 0},
      {5, 0.3, "normal", 21, 10, "3ff", Measure::kPeM, 0.1, 1e-17, 7, 2},
  };
  std::stringstream buffer;
  WriteResults(buffer, rows);
  const std::string text = buffer.str();
  CHECK(text.starts_with(std::string(kResultsHeader) + "\n"));
  CHECK(text.find("\n4,0.15,logistic,g1,3,0e,eu_w,0.0123456789,0.01,10000,0\n") !=
        std::string::npos);
  // Concatenated files repeat the header.
  WriteResults(buffer, rows);
  const auto back = ParseResults(buffer);
  REQUIRE(back.size() == 6);
  for (std::size_t k = 0; k < back.size(); ++k) {
    const ResultRow& a = rows[k % 3];
    const ResultRow& b = back[k];
    CHECK(b.n == a.n);
    CHECK(SameBits(b.perturb, a.perturb));
    CHECK(b.model == a.model);
    CHECK(b.graph_id == a.graph_id);
    CHECK(b.edges == a.edges);
    CHECK(b.canonical_code == a.canonical_code);
    CHECK(b.measure == a.measure);
    CHECK(SameBits(b.mean, a.mean));
    CHECK(SameBits(b.stddev, a.stddev));
    CHECK(b.num_sims == a.num_sims);
    CHECK(b.excluded == a.excluded);
  }
  std::istringstream headerless("4,0.15,logistic,g1,3,0e,eu_w,0.1,0.01,10,0\n");
  CHECK_THROWS_AS(ParseResults(headerless), BadHeader);
  std::istringstream bad_measure(std::string(kResultsHeader) +
                                 "\n4,0.15,logistic,g1,3,0e,l1,0.1,0.01,10,0\n");
  CHECK_THROWS_AS(ParseResults(bad_measure), ParseError);
}

TEST_CASE("WriteTable") {
  std::ostringstream out;
  WriteTable(out, Table{{"a", "b"}, {{"1", "2"}, {"3", "4"}}});
  CHECK(out.str() == "a,b\n1,2\n3,4\n");
}

}  // namespace
}  // namespace paircomp
