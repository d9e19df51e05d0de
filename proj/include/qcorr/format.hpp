#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace qcorr {

/// Formats a value for CSV output: 9 significant digits, plain decimal
/// notation when the rounded value lies in [1e-4, 1e7), otherwise
/// scientific with a lowercase e. Zeros print as "0". Deterministic for
/// identical inputs.
inline std::string format_number(double x) {
  if (x == 0.0) return "0";  // covers -0.0 as well
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";

  // the exponent of the 9-digit rounding decides the rendering
  char sci[40];
  std::snprintf(sci, sizeof(sci), "%.8e", x);
  const int exp = static_cast<int>(std::strtol(std::strchr(sci, 'e') + 1, nullptr, 10));
  if (exp >= -4 && exp < 7) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", 8 - exp, x);
    return buf;
  }
  return sci;
}

}  // namespace qcorr
