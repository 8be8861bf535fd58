#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace edgepp {

/// printf("%.*g") into a std::string. 17 digits round-trips any double.
std::string format_g(double value, int significant_digits);

/// Splits one CSV line on commas (no quoting; the formats here never need it).
std::vector<std::string_view> split_csv(std::string_view line);

/// Strict double parse of the whole token; throws std::invalid_argument.
double parse_double(std::string_view token);

}  // namespace edgepp
