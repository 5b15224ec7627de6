#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lmvs/datamodel/video.hpp"

namespace lmvs::datamodel {

inline constexpr std::string_view kInterchangeFormat = "lmvs-interchange";
inline constexpr int kInterchangeVersion = 1;

/// Serializes a video to the interchange JSON document.
std::string to_interchange(const CaptionedVideo& video);

/// Parses an interchange document. Ground-truth normalization is recomputed
/// and every invariant is checked; throws ParseError or ValidationError.
CaptionedVideo from_interchange(std::string_view text);

CaptionedVideo load_captioned_video(const std::filesystem::path& path);
void save_captioned_video(const std::filesystem::path& path, const CaptionedVideo& video);

}  // namespace lmvs::datamodel
