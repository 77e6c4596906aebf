#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "pmse/image.hpp"

namespace pmse {

enum class PgmEncoding { kBinary, kAscii };

/// Grayscale netpbm raster as stored: integer samples plus the header maxval.
struct PgmRaster {
  CountImage samples;
  std::uint32_t maxval = 255;
};

// PGM: "P5" (binary) or "P2" (ASCII); maxval <= 255 is 8-bit, otherwise
// 16-bit big-endian samples. Samples are read verbatim, without rescaling.
PgmRaster read_pgm(std::istream& in);
PgmRaster read_pgm(const std::filesystem::path& path);
IntensityImage read_pgm_intensity(const std::filesystem::path& path);
CountImage read_pgm_counts(const std::filesystem::path& path);

/// Throws kFormat if any sample exceeds maxval or maxval is outside [1, 65535].
void write_pgm(std::ostream& out, const CountImage& image, std::uint32_t maxval,
               PgmEncoding encoding = PgmEncoding::kBinary);
void write_pgm(const std::filesystem::path& path, const CountImage& image, std::uint32_t maxval,
               PgmEncoding encoding = PgmEncoding::kBinary);

/// Photon counts always go out as 16-bit PGM (maxval 65535).
void write_count_pgm(const std::filesystem::path& path, const CountImage& counts);

/// Rounds to the nearest integer; 8-bit when everything fits, else 16-bit.
CountImage round_to_counts(const IntensityImage& image);

// PFM "Pf": little-endian float32, rows stored bottom-up.
IntensityImage read_pfm(std::istream& in);
IntensityImage read_pfm(const std::filesystem::path& path);
void write_pfm(std::ostream& out, const IntensityImage& image);
void write_pfm(const std::filesystem::path& path, const IntensityImage& image);

}  // namespace pmse
