#pragma once

#include "tactile/nn/model.hpp"

#include <string>

namespace tactile {

// Binary model container: 8-byte magic "TGRMODEL", little-endian u32 format
// version, u64 header length, JSON text header (spec name, filters, windowing,
// representation parameters, normalization stats, training metadata), the
// little-endian 64-bit float parameter blob, and a trailing CRC32 over
// everything before it.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const Model& model, const std::string& path);

// Throws ChecksumMismatch (bad magic, truncation, bad CRC),
// FormatVersionMismatch, SpecUnknown, IoError.
Model load_model(const std::string& path);

}  // namespace tactile
