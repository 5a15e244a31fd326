#pragma once

#include "svasym/csv.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace svasym {

/// Recognized reproduction target ids, in output order.
const std::vector<std::string>& reproduce_targets();

/// Data series behind one figure or table. Throws UnknownTarget.
csv::Table reproduce(std::string_view target, int workers = 1);

}  // namespace svasym
