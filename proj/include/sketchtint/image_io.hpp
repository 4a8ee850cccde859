#pragma once

#include <filesystem>

#include "sketchtint/image.hpp"

namespace sketchtint {

/// Decodes a PNG or JPEG (detected by signature) into 8-bit RGB.
/// Alpha is dropped, grayscale expanded, 16-bit samples reduced.
/// Throws DecodeError for unreadable or unsupported files.
RgbImage read_image(const std::filesystem::path& path);

/// Writes 8-bit RGB PNG without alpha or timestamp chunks, so identical
/// images always produce identical bytes. Throws IoError.
void write_png(const std::filesystem::path& path, const RgbImage& img);

/// Baseline JPEG, used to produce photo fixtures.
void write_jpeg(const std::filesystem::path& path, const RgbImage& img, int quality = 95);

}  // namespace sketchtint
