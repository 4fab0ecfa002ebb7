#pragma once

#include <string>
#include <string_view>

#include "nbpr/engine.hpp"

namespace nbpr {

inline constexpr std::string_view kCsvHeader =
    "variant,threads,graph,wall_ns,iters_min,iters_max,final_err,l1,converged";

/// "nosync", or "nosync-identical" when identical-node preprocessing ran.
std::string report_label(const RunReport& r);

/// One CSV row matching kCsvHeader; l1 is empty when no oracle was run.
std::string csv_row(const RunReport& r);

/// Shortest round-trip decimal form of a double ("inf" / "nan" for specials).
std::string format_double(double v);

}  // namespace nbpr
