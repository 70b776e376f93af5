#include "bcp/format.hpp"

#include <array>
#include <charconv>

namespace bcp {

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace bcp
