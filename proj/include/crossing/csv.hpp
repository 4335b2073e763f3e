#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace crossing {

/// 12 significant digits, C locale.
[[nodiscard]] std::string format_number(double x);

/// Parses "a:b:n" into n equally spaced points from a to b inclusive.
[[nodiscard]] std::vector<double> parse_grid(std::string_view spec);

/// Writes one CSV row from already formatted fields.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace crossing
