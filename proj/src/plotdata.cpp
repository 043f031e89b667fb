#include "tordust/plotdata.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tordust/diagnostics.hpp"
#include "tordust/errors.hpp"

namespace tordust {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::string> header_columns() { return split_csv(diagnostics_csv_header()); }

}  // namespace

std::vector<std::string> plotdata_quantities() {
  std::vector<std::string> cols = header_columns();
  cols.erase(cols.begin());  // t is the axis, not a series
  cols.push_back("all-energies");
  return cols;
}

std::vector<PlotSeries> extract_plotdata(const std::string& csv_path,
                                         const std::vector<std::string>& quantities) {
  std::ifstream in(csv_path);
  if (!in) fail(ErrCode::io_error, "cannot open " + csv_path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrCode::format_error, csv_path + " is empty");
  const std::vector<std::string> cols = split_csv(line);
  if (cols.empty() || cols[0] != "t")
    fail(ErrCode::format_error, csv_path + " is not a diagnostics file");

  // expand shorthands, then resolve every name to a column index
  std::vector<std::string> wanted;
  for (const std::string& q : quantities) {
    if (q == "all-energies") {
      for (const std::string& c : cols)
        if (c.rfind("E_", 0) == 0) wanted.push_back(c);
    } else {
      wanted.push_back(q);
    }
  }
  std::vector<std::size_t> idx;
  for (const std::string& q : wanted) {
    std::size_t at = cols.size();
    for (std::size_t c = 1; c < cols.size(); ++c)
      if (cols[c] == q) at = c;
    if (at == cols.size()) {
      std::string names;
      for (const std::string& n : plotdata_quantities()) names += " " + n;
      fail(ErrCode::invalid_argument, "missing column '" + q + "'; available:" + names);
    }
    idx.push_back(at);
  }

  std::vector<PlotSeries> out(wanted.size());
  for (std::size_t s = 0; s < wanted.size(); ++s) out[s].name = wanted[s];
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> row = split_csv(line);
    if (row.size() != cols.size())
      fail(ErrCode::format_error, csv_path + " has a ragged row");
    const double t = std::strtod(row[0].c_str(), nullptr);
    for (std::size_t s = 0; s < idx.size(); ++s) {
      out[s].t.push_back(t);
      out[s].value.push_back(std::strtod(row[idx[s]].c_str(), nullptr));
    }
  }

  // companions for exponential-decay plots
  const std::size_t direct = out.size();
  for (std::size_t s = 0; s < direct; ++s) {
    bool positive = !out[s].value.empty();
    for (double v : out[s].value) positive = positive && v > 0;
    if (!positive) continue;
    PlotSeries lg;
    lg.name = out[s].name + "_log";
    lg.t = out[s].t;
    lg.value.reserve(out[s].value.size());
    for (double v : out[s].value) lg.value.push_back(std::log(v));
    out.push_back(std::move(lg));
  }
  return out;
}

std::string plotdata_csv(const std::vector<PlotSeries>& series) {
  std::string out = "t,value,series\n";
  char buf[64];
  for (const PlotSeries& s : series)
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", s.t[i], s.value[i]);
      out += buf;
      out += s.name;
      out += '\n';
    }
  return out;
}

}  // namespace tordust
