#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmvs::util {

std::string base64_encode(std::span<const std::uint8_t> bytes);

/// Throws ParseError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Little-endian IEEE-754 binary32 packing used by the interchange format.
std::string encode_f32(std::span<const float> values);
std::vector<float> decode_f32(std::string_view text);

}  // namespace lmvs::util
