#ifndef SVMAP_TEXTIO_HPP
#define SVMAP_TEXTIO_HPP

#include <optional>
#include <string>
#include <string_view>

namespace svmap {

// %.17g: enough digits that strtod() gives back the identical double, which
// is what the byte-exact serialization contracts lean on.
std::string fmt_g17(double v);
// %.10g: compact form for CSV reports.
std::string fmt_g10(double v);

// Whole-token numeric parses; nullopt on trailing garbage or empty input.
std::optional<double> parse_double_token(std::string_view tok);
std::optional<long long> parse_int_token(std::string_view tok);

std::string_view trim(std::string_view s);

}  // namespace svmap

#endif
