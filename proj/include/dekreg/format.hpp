#pragma once

#include <string>

namespace dekreg {

/// Shortest-round-trip-safe rendering with 17 significant digits, '.' as the
/// decimal separator and no locale influence. NaN prints as "NA".
std::string format_exact(double value);

/// Human-readable rendering with `digits` significant digits.
std::string format_short(double value, int digits = 4);

}  // namespace dekreg
