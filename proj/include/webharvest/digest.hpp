#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace webharvest {

// Lowercase hex SHA-256 of the bytes (64 chars).
std::string sha256_hex(std::span<const std::uint8_t> bytes);

// Content-derived image id: the digest truncated to 128 bits (32 hex chars).
std::string image_id_from_digest(const std::string& digest_hex);

} // namespace webharvest
