#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace notrade {

/// Shortest-form-independent decimal rendering: 17 significant digits, '.'
/// separator, no locale. Round-trips every finite double.
std::string format_real(double v);

/// Parses what format_real produced. Throws std::invalid_argument.
double parse_real(std::string_view s);

/// Writes one comma-separated line terminated by '\n'.
void write_row(std::ostream& out, std::initializer_list<std::string_view> cells);

/// format_real of each value, comma-separated, no line terminator.
std::string join_reals(std::initializer_list<double> values);

}  // namespace notrade
