#pragma once

#include <string>

namespace relwave {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace relwave
