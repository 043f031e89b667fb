#pragma once

#include <string>
#include <vector>

namespace tordust {

struct PlotSeries {
  std::string name;
  std::vector<double> t;
  std::vector<double> value;
};

// every selectable quantity: the diagnostics columns after t, plus the
// "all-energies" shorthand for the full energy block
std::vector<std::string> plotdata_quantities();

// Pulls the requested quantities out of a diagnostics CSV.  A strictly
// positive series also yields a "<name>_log" companion carrying its natural
// log, which is the form the decay-rate fits consume.  Unknown names raise
// an error that lists what is available.
std::vector<PlotSeries> extract_plotdata(const std::string& csv_path,
                                         const std::vector<std::string>& quantities);

// long form, one "t,value,series" line per point
std::string plotdata_csv(const std::vector<PlotSeries>& series);

}  // namespace tordust
