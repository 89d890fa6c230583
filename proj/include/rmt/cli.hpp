#pragma once

#include <string>
#include <vector>

#include "rmt/rng.hpp"

namespace rmt::cli {

/// Entry point of the rmt tool. Returns 0, 1 (input error) or 2 (numerical failure).
int run(int argc, const char* const* argv);

/// "lo:hi:step".
std::vector<double> parse_grid(const std::string& text);
/// "5i", "1+2i", "-0.5-1e-3i", "0.2".
Complex parse_complex(const std::string& text);
/// "64,128,256".
std::vector<int> parse_int_list(const std::string& text);

}  // namespace rmt::cli
