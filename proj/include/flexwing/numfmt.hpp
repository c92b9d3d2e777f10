#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace flexwing {

/// Shortest decimal that round-trips to the same double; locale-independent.
[[nodiscard]] std::string format_shortest(double v);

/// 17 significant digits, locale-independent.
[[nodiscard]] std::string format_fixed17(double v);

/// Parses the whole of `s` as a double; nullopt on any trailing garbage.
[[nodiscard]] std::optional<double> parse_double(std::string_view s);

}  // namespace flexwing
