#pragma once

#include <string>

namespace entland::cli {

/// 17 significant digits (%.17g); "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double x);

}  // namespace entland::cli
