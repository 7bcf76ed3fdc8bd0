// Command-line front end: rank, consistency, graphs enumerate, simulate,
// report.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "paircomp/commands.h"
#include "paircomp/error.h"
#include "paircomp/io.h"
#include "paircomp/simulation.h"

namespace {

using namespace paircomp;

constexpr int kExitFailure = 1;
constexpr int kExitPrecondition = 2;

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

// Writes to `path`, or standard output when empty or "-".
template <typename Fn>
void WithOutput(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  fn(out);
}

ComparisonInput LoadInput(const std::string& path, const std::string& format,
                          std::optional<int> n, double reciprocity_tol) {
  std::ifstream in = OpenInput(path);
  try {
    if (format == "pcm") return ParsePcm(in, reciprocity_tol);
    return ParsePairs(in, n);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

int Threads() {
  if (const char* env = std::getenv("PAIRCOMP_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paired-comparison evaluation and comparison-structure experiments"};
  app.require_subcommand(1);

  // rank
  std::string input;
  std::string format = "pairs";
  std::string method_name = "bt";
  int n_override = 0;
  bool json = false;
  double reciprocity_tol = kDefaultReciprocityTol;
  auto* rank = app.add_subcommand("rank", "Estimate priorities from comparisons");
  rank->add_option("input", input, "Pairs CSV or matrix file")->required();
  rank->add_option("--format", format, "pairs|pcm")
      ->check(CLI::IsMember({"pairs", "pcm"}));
  rank->add_option("--method", method_name, "llsm|em|bt|thurstone")
      ->check(CLI::IsMember({"llsm", "em", "bt", "thurstone"}));
  rank->add_option("--n", n_override, "Item count for pairs input");
  rank->add_option("--reciprocity-tol", reciprocity_tol,
                   "Relative tolerance for a(i,j) a(j,i) = 1 in matrix input");
  rank->add_flag("--json", json, "Emit JSON");

  // consistency
  double tol = kDefaultConsistencyTol;
  auto* consistency =
      app.add_subcommand("consistency", "Check cycle consistency of comparisons");
  consistency->add_option("input", input, "Pairs CSV or matrix file")->required();
  consistency->add_option("--format", format, "pairs|pcm")
      ->check(CLI::IsMember({"pairs", "pcm"}));
  consistency->add_option("--n", n_override, "Item count for pairs input");
  consistency->add_option("--tol", tol, "Tolerance on |ln(cycle product)|");
  consistency->add_option("--reciprocity-tol", reciprocity_tol,
                          "Relative tolerance for a(i,j) a(j,i) = 1");
  consistency->add_flag("--json", json, "Emit JSON");

  // graphs enumerate
  int graph_n = 4;
  int graph_edges = 0;
  std::string out_path;
  auto* graphs = app.add_subcommand("graphs", "Comparison graph catalog");
  graphs->require_subcommand(1);
  auto* enumerate =
      graphs->add_subcommand("enumerate", "List connected graphs up to isomorphism");
  enumerate->add_option("--n", graph_n, "Vertex count (2..6)")->required();
  enumerate->add_option("--edges", graph_edges, "Only graphs with this many edges");
  enumerate->add_option("--out", out_path, "Output JSON file (default stdout)");

  // simulate
  SimulationConfig config;
  std::string model_name = "logistic";
  bool quiet = false;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo information retrieval");
  simulate->add_option("--n", config.n, "Item count (4..6)")
      ->required()
      ->check(CLI::Range(2, 6));
  simulate->add_option("--perturb", config.perturb, "Perturbation level in [0,1)")
      ->required();
  simulate->add_option("--sims", config.num_sims, "Number of replications")
      ->required();
  simulate->add_option("--seed", config.seed, "64-bit seed")->required();
  simulate->add_option("--model", model_name, "logistic|normal")
      ->check(CLI::IsMember({"logistic", "normal"}));
  simulate->add_option("--epsilon", config.epsilon, "Clamp margin");
  simulate->add_option("--out", out_path, "Results CSV (default stdout)");
  simulate->add_flag("--quiet", quiet, "No progress on standard error");

  // report
  std::vector<std::string> result_files;
  std::string figure_name;
  int report_n = 0;
  std::string report_model;
  int report_graph = 0;
  auto* report = app.add_subcommand("report", "Plot-ready tables from results");
  report->add_option("results", result_files, "Results CSV files")->required();
  report->add_option("--figure", figure_name,
                     "averages-by-edges|best-by-edges|spanning-trees|perturb-sweep")
      ->required()
      ->check(CLI::IsMember(
          {"averages-by-edges", "best-by-edges", "spanning-trees", "perturb-sweep"}));
  report->add_option("--n", report_n, "Restrict to this item count");
  report->add_option("--model", report_model, "Restrict to this model");
  report->add_option("--graph", report_graph, "Graph id for perturb-sweep");
  report->add_option("--out", out_path, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  const std::optional<int> n_opt =
      n_override > 0 ? std::optional<int>(n_override) : std::nullopt;
  try {
    if (rank->parsed()) {
      const RankReport result =
          RankCommand(LoadInput(input, format, n_opt, reciprocity_tol),
                      *ParseMethod(method_name));
      std::cout << (json ? ToJson(result).dump(2) + "\n" : RenderText(result));
    } else if (consistency->parsed()) {
      const ConsistencySummary result = ConsistencyCommand(
          LoadInput(input, format, n_opt, reciprocity_tol), tol);
      std::cout << (json ? ToJson(result).dump(2) + "\n" : RenderText(result));
      if (!result.connected) return kExitPrecondition;
    } else if (enumerate->parsed()) {
      const auto catalog = GraphsJson(
          graph_n, graph_edges > 0 ? std::optional<int>(graph_edges) : std::nullopt);
      WithOutput(out_path, [&](std::ostream& out) { out << catalog.dump(2) << '\n'; });
    } else if (simulate->parsed()) {
      config.model = *ParseModelKind(model_name);
      config.threads = Threads();
      RunOptions options;
      if (!quiet) {
        options.progress = [](long done, long total) {
          std::cerr << "\rreplications " << done << "/" << total << std::flush;
          if (done == total) std::cerr << '\n';
        };
      }
      const SimulationSummary summary = Run(config, options);
      if (summary.excluded > 0) {
        std::cerr << summary.excluded << " replication(s) excluded (no convergence)\n";
      }
      WithOutput(out_path,
                 [&](std::ostream& out) { WriteResults(out, ResultRows(summary)); });
    } else if (report->parsed()) {
      std::vector<ResultRow> rows;
      for (const std::string& path : result_files) {
        std::ifstream in = OpenInput(path);
        try {
          auto part = ParseResults(in);
          rows.insert(rows.end(), part.begin(), part.end());
        } catch (const ParseError& e) {
          throw ParseError(path + ": " + e.what(), 0);
        }
      }
      ReportOptions options;
      if (report_n > 0) options.n = report_n;
      if (!report_model.empty()) options.model = report_model;
      if (report_graph > 0) options.graph_id = report_graph;
      const Table table = ReportCommand(rows, *ParseReportFigure(figure_name), options);
      WithOutput(out_path, [&](std::ostream& out) { WriteTable(out, table); });
    }
  } catch (const FordViolation& e) {
    std::cerr << "error: FordViolation: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const DisconnectedGraph& e) {
    std::cerr << "error: DisconnectedGraph: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
