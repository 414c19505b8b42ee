#pragma once

#include <string>

namespace susyqm {

/// Shortest decimal string that round-trips to the same double.
/// Locale independent.
std::string format_shortest(double v);

/// "%.17g"-style output, locale independent.  Used for CSV columns.
std::string format_full(double v);

}  // namespace susyqm
