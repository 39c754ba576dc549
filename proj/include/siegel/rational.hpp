#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace siegel {

/// Parses "n", "n/d", or an exact decimal such as "-2.75e-3" into a
/// canonical rational. Throws std::invalid_argument on malformed input.
mpq_class parse_rational(std::string_view text);

/// Always "numerator/denominator", the form used by the cache files.
std::string format_rational(const mpq_class& q);

}  // namespace siegel
