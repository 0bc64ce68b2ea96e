#include "roadrisk/scenario/export.hpp"

#include <cstdio>
#include <optional>
#include <vector>

namespace roadrisk {
namespace {

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string field(const std::optional<double>& p) { return p ? format_probability(*p) : ""; }

void row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += field(cells[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string format_probability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

std::string export_csv(const SweepTable& table) {
  std::string out;
  std::vector<std::string> header;
  for (const auto& a : table.axes) header.push_back(a.node);
  header.push_back("P(" + table.target.node + "=" + table.target.state + ")");
  header.push_back("error");
  row(out, header);
  for (const auto& cell : table.cells) {
    std::vector<std::string> r = cell.assignment;
    r.push_back(field(cell.probability));
    r.push_back(cell.error);
    row(out, r);
  }
  return out;
}

std::string export_csv(const PosteriorReport& report) {
  std::string out;
  row(out, {"node", "state", "probability"});
  for (const auto& d : report.distributions) {
    for (std::size_t s = 0; s < d.states.size(); ++s) {
      row(out, {d.node, d.states[s],
                format_probability(d.probabilities(static_cast<Eigen::Index>(s)))});
    }
  }
  return out;
}

std::string export_csv(const GapSummary& gap) {
  std::string out;
  const auto& c = gap.contrast;
  row(out, {gap.conditioning.node, c.node + "=" + c.worse, c.node + "=" + c.better, "gap", "error"});
  for (const auto& r : gap.rows) {
    row(out, {r.condition, field(r.worse), field(r.better), field(r.gap), r.error});
  }
  row(out, {"mean", "", "", field(gap.mean_gap), gap.mean_gap ? "" : "incomplete"});
  return out;
}

}  // namespace roadrisk
