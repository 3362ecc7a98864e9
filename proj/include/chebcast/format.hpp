#pragma once

#include <span>
#include <string>

namespace chebcast {

/// Shortest decimal that parses back to the same double. Integral values
/// keep a trailing ".0"; non-finite values print as nan, inf, -inf.
[[nodiscard]] std::string format_double(double value);

/// format_double applied to each entry, joined with `sep`.
[[nodiscard]] std::string join_doubles(std::span<const double> values, char sep = ',');

}  // namespace chebcast
