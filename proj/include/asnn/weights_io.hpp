#pragma once

#include <string>

#include "asnn/ann.hpp"

namespace asnn {

// Versioned JSON weight files. Numeric values survive a save/load round trip
// bit-exactly; save is byte-deterministic for a given network.
void save_weights(const NetworkSpec& net, const std::string& path);
std::string weights_to_string(const NetworkSpec& net);

NetworkSpec load_weights(const std::string& path);
NetworkSpec weights_from_string(const std::string& text);

}  // namespace asnn
