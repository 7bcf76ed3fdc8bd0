#ifndef PAIRCOMP_IO_H_
#define PAIRCOMP_IO_H_

// Text formats: comparison pairs CSV, ratio-matrix grid, simulation results
// CSV. All numbers use a dot decimal separator regardless of locale.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paircomp/core.h"
#include "paircomp/simulation.h"

namespace paircomp {

inline constexpr std::string_view kPairsHeader = "i,j,worse,better";
inline constexpr std::string_view kResultsHeader =
    "n,perturb,model,graph_id,edges,canonical_code,measure,mean,stddev,"
    "num_sims,excluded";
inline constexpr double kDefaultReciprocityTol = 1e-9;

// Shortest round-trip representation, at most 17 significant digits.
std::string FormatDouble(double value);
// Whole-string, locale-independent parse. Throws ParseError.
double ParseDouble(std::string_view text, int line);

// `n_override`, when given, sets the item count; it must cover every index.
// Throws BadHeader, DuplicatePair, NegativeCount or ParseError.
DataMatrix ParsePairs(std::istream& in, std::optional<int> n_override = {});
void WritePairs(std::ostream& out, const DataMatrix& data);

// n lines of n comma-separated cells, `*` for a missing entry. The upper
// triangle is stored; the lower triangle must match its reciprocal within
// `reciprocity_tol` relative. Throws NotReciprocal, BadDiagonal,
// NonPositiveEntry or ParseError.
Ipcm ParsePcm(std::istream& in, double reciprocity_tol = kDefaultReciprocityTol);
void WritePcm(std::ostream& out, const Ipcm& pcm);

struct ResultRow {
  int n = 0;
  double perturb = 0.0;
  std::string model;
  int graph_id = 0;
  int edges = 0;
  std::string canonical_code;
  Measure measure = Measure::kEuM;
  double mean = 0.0;
  double stddev = 0.0;
  long num_sims = 0;
  long excluded = 0;
};

std::vector<ResultRow> ResultRows(const SimulationSummary& summary);
void WriteResults(std::ostream& out, const std::vector<ResultRow>& rows,
                  bool header = true);
// Accepts concatenated files: repeated header lines are skipped.
std::vector<ResultRow> ParseResults(std::istream& in);

// Plain CSV table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void WriteTable(std::ostream& out, const Table& table);

}  // namespace paircomp

#endif  // PAIRCOMP_IO_H_
