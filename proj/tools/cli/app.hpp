#pragma once

#include <ostream>

namespace wsr {

/// Entry point of the wsr tool, separated from main so tests can drive it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsr
