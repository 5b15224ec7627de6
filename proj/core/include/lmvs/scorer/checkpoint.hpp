#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "lmvs/scorer/model.hpp"

namespace lmvs::scorer {

/// Binary checkpoint layout (little-endian), version 1:
///
///   magic        8 bytes  "LMVSCKPT"
///   version      u32
///   config       i32 d_model, n_layers, n_heads, d_ff, max_seq_len;
///                f64 dropout; u8 positional_encoding; u64 seed
///   metadata     u32 count, then count x (string key, string value)
///   tensors      u32 count, then count x (string name, u32 rows, u32 cols,
///                rows*cols f64 in row-major order)
///
/// Strings are a u32 byte length followed by UTF-8 bytes. Tensors appear in
/// Parameters::for_each order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    ScoringModel model;
    std::map<std::string, std::string> metadata;
};

std::string encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace lmvs::scorer
