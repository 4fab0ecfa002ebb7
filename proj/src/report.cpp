#include "nbpr/report.hpp"

#include <charconv>
#include <cmath>

namespace nbpr {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string report_label(const RunReport& r) {
  std::string label(to_string(r.variant));
  if (r.identical_preproc) label += "-identical";
  return label;
}

std::string csv_row(const RunReport& r) {
  std::string row = report_label(r);
  row += ',' + std::to_string(r.threads);
  row += ',' + r.graph;
  row += ',' + std::to_string(r.wall_time_ns);
  row += ',' + std::to_string(r.iters_min());
  row += ',' + std::to_string(r.iters_max());
  row += ',' + format_double(r.final_error);
  row += ',';
  if (r.l1_vs_oracle) row += format_double(*r.l1_vs_oracle);
  row += r.converged() ? ",true" : ",false";
  return row;
}

}  // namespace nbpr
