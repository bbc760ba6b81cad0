#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ckn {

/// Fixed 17 significant digits (`%.17g`).
std::string format_real(double x);

/// Shortest `%.{15,16,17}g` spelling that parses back to the same double.
std::string format_shortest(double x);

/// Joins already formatted fields with commas.
std::string csv_row(const std::vector<std::string>& fields);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace ckn
