#pragma once

#include <optional>
#include <string_view>

namespace saft {

/// Dotted-numeric comparison with alphanumeric suffix tiebreak:
/// 2.1.1 < 2.4.0, 1.0 == 1.0.0, 2.1.1-1ubuntu2 > 2.1.1. Returns negative,
/// zero, or positive; nullopt when either side carries no digits at all
/// (not comparable).
std::optional<int> compare_versions(std::string_view a, std::string_view b);

}  // namespace saft
