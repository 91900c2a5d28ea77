#include "dekreg/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace dekreg {

namespace {

std::string render(double value, int digits) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
  if (res.ec != std::errc()) return "NA";
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_exact(double value) { return render(value, 17); }

std::string format_short(double value, int digits) { return render(value, digits); }

}  // namespace dekreg
