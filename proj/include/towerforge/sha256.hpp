#pragma once
#include <cstdint>
#include <string>

namespace towerforge {

// Hex digest of SHA-256(data).
std::string sha256_hex(const std::string& data);

}  // namespace towerforge
