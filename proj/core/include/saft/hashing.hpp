#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace saft {

/// SHA-256 hex digest, used for stage input/output fingerprints.
std::string sha256_hex(std::string_view data);

/// Combined digest over a list of (label, digest) pairs — order matters.
std::string combine_hashes(const std::vector<std::pair<std::string, std::string>>& parts);

}  // namespace saft
