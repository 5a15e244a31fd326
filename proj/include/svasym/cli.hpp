#pragma once

#include <ostream>

namespace svasym::cli {

/// Entry point of the svasym executable. Returns 0 on success, 2 on a
/// configuration error and 3 when a numerical method fails to converge.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svasym::cli
