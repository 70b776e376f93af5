#pragma once

#include <string>

namespace bcp {

// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace bcp
