#include "paircomp/io.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "paircomp/error.h"

namespace paircomp {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename Int>
Int ParseInt(std::string_view text, int line, const char* what) {
  Int value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(text) + "'",
                     line);
  }
  return value;
}

bool IsBlank(std::string_view line) { return Trim(line).empty(); }

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

double ParseDouble(std::string_view text, int line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad number '" + std::string(text) + "'", line);
  }
  return value;
}

DataMatrix ParsePairs(std::istream& in, std::optional<int> n_override) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    if (Trim(line) != kPairsHeader) {
      throw BadHeader("expected header '" + std::string(kPairsHeader) + "'",
                      line_no);
    }
    have_header = true;
  }
  if (!have_header) throw BadHeader("missing header", line_no);

  struct Row {
    int i, j;
    double worse, better;
  };
  std::vector<Row> rows;
  std::set<Pair> seen;
  int max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    const auto fields = SplitFields(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    const int i = ParseInt<int>(fields[0], line_no, "index");
    const int j = ParseInt<int>(fields[1], line_no, "index");
    if (i < 1 || j < 1 || i == j) {
      throw ParseError("indices must be distinct and >= 1", line_no);
    }
    const double worse = ParseDouble(fields[2], line_no);
    const double better = ParseDouble(fields[3], line_no);
    if (!std::isfinite(worse) || !std::isfinite(better)) {
      throw ParseError("non-finite amount", line_no);
    }
    if (worse < 0.0 || better < 0.0) {
      throw NegativeCount("negative amount", line_no);
    }
    if (!seen.insert(OrderedPair(i, j)).second) {
      throw DuplicatePair("duplicate pair (" + std::to_string(i) + "," +
                              std::to_string(j) + ")",
                          line_no);
    }
    max_index = std::max({max_index, i, j});
    rows.push_back({i - 1, j - 1, worse, better});
  }
  int n = max_index;
  if (n_override) {
    if (*n_override < max_index) {
      throw ParseError("--n " + std::to_string(*n_override) +
                           " is smaller than the largest index " +
                           std::to_string(max_index),
                       0);
    }
    n = *n_override;
  }
  DataMatrix data(n);
  for (const Row& r : rows) data.Set(r.i, r.j, r.worse, r.better);
  return data;
}

void WritePairs(std::ostream& out, const DataMatrix& data) {
  out << kPairsHeader << '\n';
  for (const auto& [pair, outcome] : data.entries()) {
    out << pair.i + 1 << ',' << pair.j + 1 << ',' << FormatDouble(outcome.worse)
        << ',' << FormatDouble(outcome.better) << '\n';
  }
}

Ipcm ParsePcm(std::istream& in, double reciprocity_tol) {
  std::vector<std::vector<std::optional<double>>> grid;
  std::vector<int> line_of_row;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    std::vector<std::optional<double>> row;
    for (std::string_view cell : SplitFields(line)) {
      if (cell == "*") {
        row.push_back(std::nullopt);
        continue;
      }
      const double value = ParseDouble(cell, line_no);
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw NonPositiveEntry("entries must be positive and finite", line_no);
      }
      row.push_back(value);
    }
    grid.push_back(std::move(row));
    line_of_row.push_back(line_no);
  }
  const int n = static_cast<int>(grid.size());
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(grid[r].size()) != n) {
      throw ParseError("matrix is not square: row has " +
                           std::to_string(grid[r].size()) + " cells, expected " +
                           std::to_string(n),
                       line_of_row[r]);
    }
  }
  Ipcm pcm(n);
  for (int i = 0; i < n; ++i) {
    const auto& diagonal = grid[i][i];
    if (!diagonal || std::abs(*diagonal - 1.0) > reciprocity_tol) {
      throw BadDiagonal("diagonal entry " + std::to_string(i + 1) + " must be 1",
                        line_of_row[i]);
    }
    for (int j = i + 1; j < n; ++j) {
      const auto& upper = grid[i][j];
      const auto& lower = grid[j][i];
      const std::string where =
          "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (upper.has_value() != lower.has_value()) {
        throw NotReciprocal("entry " + where + " known on one side only",
                            line_of_row[i]);
      }
      if (!upper) continue;
      if (std::abs(*upper * *lower - 1.0) > reciprocity_tol) {
        throw NotReciprocal("entries " + where + " are not reciprocal",
                            line_of_row[j]);
      }
      pcm.Set(i, j, *upper);
    }
  }
  return pcm;
}

void WritePcm(std::ostream& out, const Ipcm& pcm) {
  for (int i = 0; i < pcm.n(); ++i) {
    for (int j = 0; j < pcm.n(); ++j) {
      if (j > 0) out << ',';
      const auto value = pcm.Get(i, j);
      out << (value ? FormatDouble(*value) : "*");
    }
    out << '\n';
  }
}

std::vector<ResultRow> ResultRows(const SimulationSummary& summary) {
  std::vector<ResultRow> rows;
  for (const GraphSummary& g : summary.graphs) {
    for (Measure m : kAllMeasures) {
      const CellStats& cell = g.Cell(m);
      rows.push_back({summary.config.n, summary.config.perturb,
                      std::string(ToString(summary.config.model)), g.graph.id,
                      g.graph.edge_count, g.graph.code.Hex(), m, cell.mean,
                      cell.stddev, summary.config.num_sims, summary.excluded});
    }
  }
  return rows;
}

void WriteResults(std::ostream& out, const std::vector<ResultRow>& rows,
                  bool header) {
  if (header) out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.n << ',' << FormatDouble(r.perturb) << ',' << r.model << ",g"
        << r.graph_id << ',' << r.edges << ',' << r.canonical_code << ','
        << MeasureName(r.measure) << ',' << FormatDouble(r.mean) << ','
        << FormatDouble(r.stddev) << ',' << r.num_sims << ',' << r.excluded
        << '\n';
  }
}

std::vector<ResultRow> ParseResults(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    if (Trim(line) == kResultsHeader) {
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw BadHeader("expected header '" + std::string(kResultsHeader) + "'",
                      line_no);
    }
    const auto f = SplitFields(line);
    if (f.size() != 11) {
      throw ParseError("expected 11 fields, got " + std::to_string(f.size()),
                       line_no);
    }
    ResultRow r;
    r.n = ParseInt<int>(f[0], line_no, "n");
    r.perturb = ParseDouble(f[1], line_no);
    r.model = std::string(f[2]);
    if (!ParseModelKind(r.model)) {
      throw ParseError("unknown model '" + r.model + "'", line_no);
    }
    std::string_view id = f[3];
    if (id.starts_with('g')) id.remove_prefix(1);
    r.graph_id = ParseInt<int>(id, line_no, "graph id");
    r.edges = ParseInt<int>(f[4], line_no, "edge count");
    r.canonical_code = std::string(f[5]);
    const auto measure = ParseMeasure(f[6]);
    if (!measure) {
      throw ParseError("unknown measure '" + std::string(f[6]) + "'", line_no);
    }
    r.measure = *measure;
    r.mean = ParseDouble(f[7], line_no);
    r.stddev = ParseDouble(f[8], line_no);
    r.num_sims = ParseInt<long>(f[9], line_no, "num_sims");
    r.excluded = ParseInt<long>(f[10], line_no, "excluded");
    rows.push_back(std::move(r));
  }
  if (!have_header) throw BadHeader("missing header", line_no);
  return rows;
}

void WriteTable(std::ostream& out, const Table& table) {
  const auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out << ',';
      out << cells[k];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

}  // namespace paircomp
