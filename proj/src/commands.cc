#include "paircomp/commands.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "paircomp/error.h"
#include "paircomp/graphs.h"

namespace paircomp {
namespace {

nlohmann::json ReportJson(const ConsistencyReport& report) {
  nlohmann::json j = {{"consistent", report.consistent},
                      {"max_cycle_deviation", report.max_cycle_deviation}};
  if (report.witness) {
    std::vector<int> cycle = *report.witness;
    for (int& v : cycle) ++v;
    j["witness"] = cycle;
  }
  return j;
}

std::string WitnessText(const std::vector<int>& cycle) {
  std::string text;
  for (int v : cycle) text += std::to_string(v + 1) + "-";
  return text + std::to_string(cycle.front() + 1);
}

std::string ConsistencyLine(const std::optional<ConsistencyReport>& report) {
  if (!report) return "consistent: n/a (comparison graph not connected)\n";
  std::string line = std::string("consistent: ") +
                     (report->consistent ? "yes" : "no") +
                     " (max cycle deviation " +
                     FormatDouble(report->max_cycle_deviation);
  if (report->witness) line += ", cycle " + WitnessText(*report->witness);
  return line + ")\n";
}

const char* YesNo(bool value) { return value ? "yes" : "no"; }

struct SliceKey {
  int n;
  double perturb;
  std::string model;
  auto operator<=>(const SliceKey&) const = default;
};

SliceKey SliceOf(const ResultRow& r) { return {r.n, r.perturb, r.model}; }

std::vector<std::string> SliceCells(const SliceKey& s) {
  return {std::to_string(s.n), FormatDouble(s.perturb), s.model};
}

bool IsStarCode(int n, const std::string& hex) {
  const ComparisonGraph g = CanonicalCode::FromHex(n, hex).Decode();
  return g.IsConnected() && Properties(g).is_star;
}

Table AveragesByEdges(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<SliceKey, int, int>, std::pair<double, int>> sums;
  for (const ResultRow& r : rows) {
    auto& [sum, count] = sums[{SliceOf(r), r.edges, static_cast<int>(r.measure)}];
    sum += r.mean;
    ++count;
  }
  Table table{{"n", "perturb", "model", "edges", "measure", "mean", "graphs"}, {}};
  for (const auto& [key, value] : sums) {
    const auto& [slice, edges, measure] = key;
    auto cells = SliceCells(slice);
    cells.push_back(std::to_string(edges));
    cells.emplace_back(MeasureName(static_cast<Measure>(measure)));
    cells.push_back(FormatDouble(value.first / value.second));
    cells.push_back(std::to_string(value.second));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Table BestByEdges(const std::vector<ResultRow>& rows) {
  struct Extremes {
    const ResultRow* best = nullptr;
    const ResultRow* worst = nullptr;
  };
  std::map<std::tuple<SliceKey, int, int>, Extremes> groups;
  for (const ResultRow& r : rows) {
    Extremes& e = groups[{SliceOf(r), static_cast<int>(r.measure), r.edges}];
    if (!e.best || Better(r.measure, r.mean, e.best->mean)) e.best = &r;
    if (!e.worst || Better(r.measure, e.worst->mean, r.mean)) e.worst = &r;
  }
  Table table{{"n", "perturb", "model", "edges", "measure", "best_graph",
               "best_value", "worst_graph", "worst_value",
               "best_beats_next_worst"},
              {}};
  for (const auto& [key, e] : groups) {
    const auto& [slice, measure, edges] = key;
    std::string beats;
    auto next = groups.find({slice, measure, edges + 1});
    if (next != groups.end()) {
      beats = Better(static_cast<Measure>(measure), e.best->mean,
                     next->second.worst->mean)
                  ? "yes"
                  : "no";
    }
    auto cells = SliceCells(slice);
    cells.push_back(std::to_string(edges));
    cells.emplace_back(MeasureName(static_cast<Measure>(measure)));
    cells.push_back("g" + std::to_string(e.best->graph_id));
    cells.push_back(FormatDouble(e.best->mean));
    cells.push_back("g" + std::to_string(e.worst->graph_id));
    cells.push_back(FormatDouble(e.worst->mean));
    cells.push_back(beats);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Table SpanningTrees(const std::vector<ResultRow>& rows) {
  std::map<std::pair<SliceKey, int>, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) {
    if (r.edges == r.n - 1) {
      groups[{SliceOf(r), static_cast<int>(r.measure)}].push_back(&r);
    }
  }
  if (groups.empty()) throw MissingSlice("no spanning-tree rows in results");
  Table table{{"n", "perturb", "model", "graph_id", "canonical_code", "is_star",
               "measure", "mean", "stddev", "is_best"},
              {}};
  for (auto& [key, members] : groups) {
    const Measure measure = static_cast<Measure>(key.second);
    const ResultRow* best = members.front();
    for (const ResultRow* r : members) {
      if (Better(measure, r->mean, best->mean)) best = r;
    }
    std::sort(members.begin(), members.end(),
              [](const ResultRow* a, const ResultRow* b) {
                return a->graph_id < b->graph_id;
              });
    for (const ResultRow* r : members) {
      auto cells = SliceCells(key.first);
      cells.push_back("g" + std::to_string(r->graph_id));
      cells.push_back(r->canonical_code);
      cells.push_back(YesNo(IsStarCode(r->n, r->canonical_code)));
      cells.emplace_back(MeasureName(measure));
      cells.push_back(FormatDouble(r->mean));
      cells.push_back(FormatDouble(r->stddev));
      cells.push_back(YesNo(r == best));
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

Table PerturbSweep(const std::vector<ResultRow>& rows,
                   std::optional<int> graph_id) {
  std::map<std::tuple<int, std::string, int, double>, const ResultRow*> points;
  for (const ResultRow& r : rows) {
    const bool selected = graph_id ? r.graph_id == *graph_id
                                   : r.edges == r.n - 1 &&
                                         IsStarCode(r.n, r.canonical_code);
    if (selected) {
      points[{r.n, r.model, static_cast<int>(r.measure), r.perturb}] = &r;
    }
  }
  if (points.empty()) {
    throw MissingSlice(graph_id ? "no rows for graph g" + std::to_string(*graph_id)
                                : std::string("no star-graph rows in results"));
  }
  Table table{{"n", "model", "graph_id", "measure", "perturb", "mean", "stddev"},
              {}};
  for (const auto& [key, r] : points) {
    table.rows.push_back({std::to_string(r->n), r->model,
                          "g" + std::to_string(r->graph_id),
                          std::string(MeasureName(r->measure)),
                          FormatDouble(r->perturb), FormatDouble(r->mean),
                          FormatDouble(r->stddev)});
  }
  return table;
}

}  // namespace

std::optional<Method> ParseMethod(std::string_view name) {
  if (name == "llsm") return Method::kLlsm;
  if (name == "em") return Method::kEm;
  if (name == "bt") return Method::kBt;
  if (name == "thurstone") return Method::kThurstone;
  return std::nullopt;
}

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kLlsm: return "llsm";
    case Method::kEm: return "em";
    case Method::kBt: return "bt";
    case Method::kThurstone: return "thurstone";
  }
  return "";
}

std::vector<double> DescendingRanks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    for (std::size_t k = start; k < end; ++k) {
      ranks[order[k]] = 0.5 * static_cast<double>(start + end + 1);
    }
    start = end;
  }
  return ranks;
}

RankReport RankCommand(const ComparisonInput& input, Method method) {
  RankReport report;
  report.method = method;
  const bool stochastic = method == Method::kBt || method == Method::kThurstone;

  if (const auto* data = std::get_if<DataMatrix>(&input)) {
    report.n = data->n();
    report.ford = FordCondition(*data);
    report.connected = data->ComparisonSet().IsConnected();
    if (report.connected) report.consistency = DataConsistency(*data);
    if (stochastic) {
      const ModelKind model =
          method == Method::kBt ? ModelKind::kLogistic : ModelKind::kNormal;
      const MleResult mle = BtMle(*data, model);
      report.weights = WeightsFromM(mle.m).values();
      report.m = mle.m.values();
      report.loglik = mle.loglik;
      report.iterations = mle.iterations;
    }
  } else if (stochastic) {
    throw std::invalid_argument(std::string(ToString(method)) +
                                " needs pairs input, not a matrix");
  }

  if (!stochastic) {
    const Ipcm pcm = std::holds_alternative<Ipcm>(input)
                         ? std::get<Ipcm>(input)
                         : PcmFromData(std::get<DataMatrix>(input));
    report.n = pcm.n();
    report.connected = pcm.Graph().IsConnected();
    if (!report.connected) {
      throw DisconnectedGraph("comparison graph is not connected");
    }
    report.consistency = PcmConsistency(pcm);
    if (method == Method::kLlsm) {
      report.weights = Llsm(pcm).values();
    } else {
      const EmResult em = Em(pcm);
      report.weights = em.weights.values();
      report.lambda_max = em.lambda_max;
    }
  }
  report.ranks = DescendingRanks(report.weights);
  return report;
}

nlohmann::json ToJson(const RankReport& report) {
  nlohmann::json j;
  j["method"] = ToString(report.method);
  j["n"] = report.n;
  j["weights"] = report.weights;
  j["ranks"] = report.ranks;
  if (report.m) j["m"] = *report.m;
  if (report.lambda_max) j["lambda_max"] = *report.lambda_max;
  if (report.loglik) j["loglik"] = *report.loglik;
  if (report.iterations) j["iterations"] = *report.iterations;
  j["connected"] = report.connected;
  if (report.ford) j["ford_condition"] = *report.ford;
  j["consistency"] =
      report.consistency ? ReportJson(*report.consistency) : nlohmann::json();
  return j;
}

std::string RenderText(const RankReport& report) {
  std::ostringstream out;
  out << "method: " << ToString(report.method) << '\n';
  out << "items: " << report.n << '\n';
  out << "item,weight,rank" << (report.m ? ",m" : "") << '\n';
  for (int i = 0; i < report.n; ++i) {
    out << i + 1 << ',' << FormatDouble(report.weights[i]) << ','
        << FormatDouble(report.ranks[i]);
    if (report.m) out << ',' << FormatDouble((*report.m)[i]);
    out << '\n';
  }
  if (report.lambda_max) out << "lambda_max: " << FormatDouble(*report.lambda_max) << '\n';
  if (report.loglik) out << "loglik: " << FormatDouble(*report.loglik) << '\n';
  if (report.iterations) out << "iterations: " << *report.iterations << '\n';
  out << "connected: " << YesNo(report.connected) << '\n';
  if (report.ford) out << "ford_condition: " << YesNo(*report.ford) << '\n';
  out << ConsistencyLine(report.consistency);
  return out.str();
}

ConsistencySummary ConsistencyCommand(const ComparisonInput& input, double tol) {
  ConsistencySummary summary;
  summary.tolerance = tol;
  if (const auto* data = std::get_if<DataMatrix>(&input)) {
    summary.n = data->n();
    summary.ford = FordCondition(*data);
    summary.connected = data->ComparisonSet().IsConnected();
    if (summary.connected) summary.report = DataConsistency(*data, tol);
  } else {
    const Ipcm& pcm = std::get<Ipcm>(input);
    summary.n = pcm.n();
    summary.connected = pcm.Graph().IsConnected();
    if (summary.connected) summary.report = PcmConsistency(pcm, tol);
  }
  return summary;
}

nlohmann::json ToJson(const ConsistencySummary& summary) {
  nlohmann::json j;
  j["n"] = summary.n;
  j["connected"] = summary.connected;
  if (summary.ford) j["ford_condition"] = *summary.ford;
  j["tolerance"] = summary.tolerance;
  j["consistency"] =
      summary.report ? ReportJson(*summary.report) : nlohmann::json();
  return j;
}

std::string RenderText(const ConsistencySummary& summary) {
  std::ostringstream out;
  out << "items: " << summary.n << '\n';
  out << "connected: " << YesNo(summary.connected) << '\n';
  if (summary.ford) out << "ford_condition: " << YesNo(*summary.ford) << '\n';
  out << ConsistencyLine(summary.report);
  return out.str();
}

nlohmann::json GraphsJson(int n, std::optional<int> edges) {
  nlohmann::json graphs = nlohmann::json::array();
  for (const GraphClass& c : EnumerateConnected(n)) {
    if (edges && c.edge_count != *edges) continue;
    const ComparisonGraph g = c.Representative();
    const GraphProperties p = Properties(g);
    std::vector<std::array<int, 2>> edge_list;
    for (const Pair& e : g.edges()) edge_list.push_back({e.i + 1, e.j + 1});
    graphs.push_back({{"id", c.Label()},
                      {"edges", c.edge_count},
                      {"canonical_code", c.code.Hex()},
                      {"edge_list", edge_list},
                      {"properties",
                       {{"degree_sequence", p.degree_sequence},
                        {"is_regular", p.is_regular},
                        {"is_bipartite", p.is_bipartite},
                        {"is_star", p.is_star},
                        {"is_spanning_tree", p.is_spanning_tree},
                        {"diameter", p.diameter}}}});
  }
  return {{"n", n}, {"count", graphs.size()}, {"graphs", graphs}};
}

std::optional<ReportFigure> ParseReportFigure(std::string_view name) {
  if (name == "averages-by-edges") return ReportFigure::kAveragesByEdges;
  if (name == "best-by-edges") return ReportFigure::kBestByEdges;
  if (name == "spanning-trees") return ReportFigure::kSpanningTrees;
  if (name == "perturb-sweep") return ReportFigure::kPerturbSweep;
  return std::nullopt;
}

Table ReportCommand(const std::vector<ResultRow>& rows, ReportFigure figure,
                    const ReportOptions& options) {
  std::vector<ResultRow> slice;
  for (const ResultRow& r : rows) {
    if (options.n && r.n != *options.n) continue;
    if (options.model && r.model != *options.model) continue;
    slice.push_back(r);
  }
  if (slice.empty()) throw MissingSlice("no result rows match the request");
  switch (figure) {
    case ReportFigure::kAveragesByEdges: return AveragesByEdges(slice);
    case ReportFigure::kBestByEdges: return BestByEdges(slice);
    case ReportFigure::kSpanningTrees: return SpanningTrees(slice);
    case ReportFigure::kPerturbSweep: return PerturbSweep(slice, options.graph_id);
  }
  throw std::invalid_argument("unknown figure");
}

}  // namespace paircomp
