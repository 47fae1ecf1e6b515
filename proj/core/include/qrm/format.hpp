#pragma once

#include <string>

namespace qrm {

/// Shortest decimal text that parses back to exactly `value` ("nan", "inf", "-inf" otherwise).
std::string format_double(double value);

}  // namespace qrm
