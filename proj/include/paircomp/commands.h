#ifndef PAIRCOMP_COMMANDS_H_
#define PAIRCOMP_COMMANDS_H_

// Building blocks of the command-line tool: each command turns parsed input
// into a report value that can be rendered as text, JSON or CSV.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "paircomp/core.h"
#include "paircomp/estimators.h"
#include "paircomp/io.h"

namespace paircomp {

enum class Method { kLlsm, kEm, kBt, kThurstone };

std::optional<Method> ParseMethod(std::string_view name);
std::string_view ToString(Method method);

using ComparisonInput = std::variant<DataMatrix, Ipcm>;

struct RankReport {
  Method method = Method::kLlsm;
  int n = 0;
  std::vector<double> weights;
  // Rank 1 is the largest weight; ties share the average rank.
  std::vector<double> ranks;
  std::optional<std::vector<double>> m;
  std::optional<double> lambda_max;
  std::optional<double> loglik;
  std::optional<long> iterations;
  bool connected = false;
  // Only for outcome data.
  std::optional<bool> ford;
  // Empty when the comparison graph is disconnected.
  std::optional<ConsistencyReport> consistency;
};

// Ranks descending by value with average ranks for ties.
std::vector<double> DescendingRanks(const std::vector<double>& values);

// Throws std::invalid_argument for a method/format mismatch (bt and
// thurstone need outcome data), FordViolation or DisconnectedGraph when the
// estimator's precondition fails.
RankReport RankCommand(const ComparisonInput& input, Method method);

nlohmann::json ToJson(const RankReport& report);
std::string RenderText(const RankReport& report);

struct ConsistencySummary {
  int n = 0;
  bool connected = false;
  std::optional<bool> ford;
  std::optional<ConsistencyReport> report;
  double tolerance = kDefaultConsistencyTol;
};

ConsistencySummary ConsistencyCommand(const ComparisonInput& input,
                                      double tol = kDefaultConsistencyTol);
nlohmann::json ToJson(const ConsistencySummary& summary);
std::string RenderText(const ConsistencySummary& summary);

// Catalog of connected graph classes, optionally limited to one edge count.
nlohmann::json GraphsJson(int n, std::optional<int> edges = {});

enum class ReportFigure {
  kAveragesByEdges,
  kBestByEdges,
  kSpanningTrees,
  kPerturbSweep,
};

std::optional<ReportFigure> ParseReportFigure(std::string_view name);

struct ReportOptions {
  // Restrict to one item count / model when the input mixes several.
  std::optional<int> n;
  std::optional<std::string> model;
  // Graph followed by the perturbation sweep; defaults to the star.
  std::optional<int> graph_id;
};

// Pure function of the result rows. Throws MissingSlice when the requested
// slice is absent.
Table ReportCommand(const std::vector<ResultRow>& rows, ReportFigure figure,
                    const ReportOptions& options = {});

}  // namespace paircomp

#endif  // PAIRCOMP_COMMANDS_H_
