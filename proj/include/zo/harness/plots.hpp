#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zo/errors.hpp"
#include "zo/harness/sweep.hpp"

namespace zo {

// Writes plain-text gnuplot scripts referencing the CSV (no in-process
// rendering): gap vs T per d, gap vs d per T, and an estimator comparison.
// Output bytes are a deterministic function of the CSV contents.
inline std::vector<std::string> emit_plots(const std::string& csv_path,
                                           const std::string& out_dir) {
  const std::vector<SweepRow> rows = read_csv_file(csv_path);
  if (rows.empty()) throw DataError("emit_plots: no data rows");

  std::set<int> ds;
  std::set<long long> Ts;
  std::set<std::string> estimators;
  for (const SweepRow& r : rows) {
    ds.insert(r.d);
    Ts.insert(r.T);
    estimators.insert(r.estimator);
  }
  std::filesystem::create_directories(out_dir);

  const auto write_file = [&](const std::string& name,
                              const std::string& body) {
    const std::string path = out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("emit_plots: cannot write " + path);
    f << body;
    return path;
  };

  // Column indices are 1-based gnuplot datafile columns of the CSV schema.
  std::ostringstream a;
  a << "# gap vs T (log-log), one curve per dimension\n"
    << "set datafile separator ','\n"
    << "set logscale xy\nset xlabel 'T'\nset ylabel 'final gap'\n"
    << "set key top right\n"
    << "plot ";
  bool first = true;
  for (int d : ds) {
    if (!first) a << ", \\\n     ";
    first = false;
    a << "'" << csv_path << "' using 7:($6==" << d
      << " ? $13 : 1/0) title 'd=" << d << "' with points";
  }
  a << "\n";

  std::ostringstream b;
  b << "# gap vs d (log-log), one curve per horizon\n"
    << "set datafile separator ','\n"
    << "set logscale xy\nset xlabel 'd'\nset ylabel 'final gap'\n"
    << "set key top left\n"
    << "plot ";
  first = true;
  for (long long T : Ts) {
    if (!first) b << ", \\\n     ";
    first = false;
    b << "'" << csv_path << "' using 6:($7==" << T
      << " ? $13 : 1/0) title 'T=" << T << "' with points";
  }
  b << "\n";

  std::ostringstream c;
  c << "# estimator comparison: gap vs T (log-log), one curve per estimator\n"
    << "set datafile separator ','\n"
    << "set logscale xy\nset xlabel 'T'\nset ylabel 'final gap'\n"
    << "set key top right\n"
    << "plot ";
  first = true;
  for (const std::string& e : estimators) {
    if (!first) c << ", \\\n     ";
    first = false;
    c << "'" << csv_path << "' using 7:(strcol(4) eq '" << e
      << "' ? $13 : 1/0) title '" << e << "' with points";
  }
  c << "\n";

  return {write_file("gap_vs_T.gp", a.str()),
          write_file("gap_vs_d.gp", b.str()),
          write_file("estimator_compare.gp", c.str())};
}

}  // namespace zo
