#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lpball::detail {

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view line, char delim);
// Whole-field parse; false on trailing garbage or empty input.
bool parse_double(std::string_view text, double &out);
std::string format_double(double value);

} // namespace lpball::detail
