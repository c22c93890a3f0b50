#pragma once

#include <string>

namespace flakelex::detail {

// Porter suffix-stripping stemmer (1980 algorithm, matching the frozen
// reference implementation including its two marked departures:
// step 2 uses "bli" -> "ble" and adds "logi" -> "log").
// Input must be lowercase ASCII letters only.
std::string porter_stem(const std::string& word);

}  // namespace flakelex::detail
