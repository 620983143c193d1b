#pragma once

#include <string>

namespace leanreg::csv {

/// "%.*g" formatting with deterministic output for identical doubles.
std::string fmt(double v, int precision = 12);

/// Fixed-point "%.*f".
std::string fmt_fixed(double v, int decimals);

}  // namespace leanreg::csv
