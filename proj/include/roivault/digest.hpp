#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace roivault {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> data);

std::string to_hex(std::span<const std::uint8_t> bytes);
Sha256Digest digest_from_hex(const std::string& hex); // throws Error on malformed input

} // namespace roivault
