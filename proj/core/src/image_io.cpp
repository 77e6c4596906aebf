#include "pmse/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmse/atomic_file.hpp"
#include "pmse/error.hpp"

namespace pmse {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::uint64_t read_header_uint(std::istream& in, const char* what) {
  skip_separators(in);
  std::uint64_t v = 0;
  if (!(in >> v)) fail(ErrorCode::kFormat, std::string("netpbm header: cannot read ") + what);
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

void check_dims(std::uint64_t w, std::uint64_t h) {
  constexpr std::uint64_t kMaxSide = 1u << 20;
  if (w == 0 || h == 0 || w > kMaxSide || h > kMaxSide) {
    fail(ErrorCode::kFormat, "netpbm header: unsupported dimensions " + std::to_string(w) + "x" +
                                 std::to_string(h));
  }
}

}  // namespace

PgmRaster read_pgm(std::istream& in) {
  std::array<char, 2> magic{};
  if (!in.read(magic.data(), 2)) fail(ErrorCode::kFormat, "not a PGM file: missing magic");
  const bool binary = magic[0] == 'P' && magic[1] == '5';
  const bool ascii = magic[0] == 'P' && magic[1] == '2';
  if (!binary && !ascii) fail(ErrorCode::kFormat, "not a grayscale PGM file (expected P5 or P2)");

  const auto width = read_header_uint(in, "width");
  const auto height = read_header_uint(in, "height");
  const auto maxval = read_header_uint(in, "maxval");
  check_dims(width, height);
  if (maxval == 0 || maxval > 65535) fail(ErrorCode::kFormat, "PGM maxval must be in [1, 65535]");

  const std::size_t n = width * height;
  std::vector<std::uint32_t> samples(n);
  if (binary) {
    if (!std::isspace(in.get())) fail(ErrorCode::kFormat, "PGM header not terminated by whitespace");
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes_per);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      fail(ErrorCode::kFormat, "PGM raster truncated");
    }
    for (std::size_t i = 0; i < n; ++i) {
      samples[i] = bytes_per == 2 ? (std::uint32_t{raw[2 * i]} << 8) | raw[2 * i + 1] : raw[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) samples[i] = static_cast<std::uint32_t>(read_header_uint(in, "sample"));
  }
  for (auto s : samples) {
    if (s > maxval) fail(ErrorCode::kFormat, "PGM sample exceeds maxval");
  }
  return {CountImage(width, height, std::move(samples)), static_cast<std::uint32_t>(maxval)};
}

PgmRaster read_pgm(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_pgm(in);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

IntensityImage read_pgm_intensity(const std::filesystem::path& path) {
  return to_intensity(read_pgm(path).samples);
}

CountImage read_pgm_counts(const std::filesystem::path& path) { return read_pgm(path).samples; }

void write_pgm(std::ostream& out, const CountImage& image, std::uint32_t maxval, PgmEncoding encoding) {
  if (maxval == 0 || maxval > 65535) fail(ErrorCode::kFormat, "PGM maxval must be in [1, 65535]");
  if (image.empty()) fail(ErrorCode::kFormat, "cannot write an empty PGM");
  if (max_value(image) > maxval) {
    fail(ErrorCode::kFormat, "sample value " + std::to_string(max_value(image)) +
                                 " exceeds PGM maxval " + std::to_string(maxval));
  }
  out << (encoding == PgmEncoding::kBinary ? "P5" : "P2") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << maxval << '\n';
  auto data = image.data();
  if (encoding == PgmEncoding::kAscii) {
    for (std::size_t r = 0; r < image.height(); ++r) {
      for (std::size_t c = 0; c < image.width(); ++c) {
        out << data[r * image.width() + c] << (c + 1 == image.width() ? '\n' : ' ');
      }
    }
    return;
  }
  std::vector<unsigned char> raw;
  if (maxval > 255) {
    raw.resize(2 * data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      raw[2 * i] = static_cast<unsigned char>(data[i] >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(data[i] & 0xff);
    }
  } else {
    raw.assign(data.begin(), data.end());
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_pgm(const std::filesystem::path& path, const CountImage& image, std::uint32_t maxval,
               PgmEncoding encoding) {
  write_file_atomically(path, [&](std::ostream& out) { write_pgm(out, image, maxval, encoding); });
}

void write_count_pgm(const std::filesystem::path& path, const CountImage& counts) {
  write_pgm(path, counts, 65535);
}

CountImage round_to_counts(const IntensityImage& image) {
  std::vector<std::uint32_t> out(image.size());
  auto in = image.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = std::round(in[i]);
    if (r > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
      fail(ErrorCode::kDomainError, "intensity too large to round into a count");
    }
    out[i] = static_cast<std::uint32_t>(r);
  }
  return CountImage(image.width(), image.height(), std::move(out));
}

IntensityImage read_pfm(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != "Pf") fail(ErrorCode::kFormat, "not a grayscale PFM file (expected Pf)");
  const auto width = read_header_uint(in, "width");
  const auto height = read_header_uint(in, "height");
  check_dims(width, height);
  skip_separators(in);
  double scale = 0;
  if (!(in >> scale) || scale == 0) fail(ErrorCode::kFormat, "PFM header: bad scale");
  if (!std::isspace(in.get())) fail(ErrorCode::kFormat, "PFM header not terminated by whitespace");
  const bool little = scale < 0;

  const std::size_t n = width * height;
  std::vector<unsigned char> raw(4 * n);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    fail(ErrorCode::kFormat, "PFM raster truncated");
  }
  std::vector<double> values(n);
  for (std::size_t r = 0; r < height; ++r) {
    const std::size_t src_row = height - 1 - r;
    for (std::size_t c = 0; c < width; ++c) {
      const unsigned char* b = raw.data() + 4 * (src_row * width + c);
      std::uint32_t bits = little ? (std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 |
                                     std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24)
                                  : (std::uint32_t{b[3]} | std::uint32_t{b[2]} << 8 |
                                     std::uint32_t{b[1]} << 16 | std::uint32_t{b[0]} << 24);
      values[r * width + c] = std::bit_cast<float>(bits);
    }
  }
  return IntensityImage(width, height, std::move(values));
}

IntensityImage read_pfm(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_pfm(in);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void write_pfm(std::ostream& out, const IntensityImage& image) {
  if (image.empty()) fail(ErrorCode::kFormat, "cannot write an empty PFM");
  out << "Pf\n" << image.width() << ' ' << image.height() << "\n-1.0\n";
  std::vector<unsigned char> raw(4 * image.size());
  auto data = image.data();
  for (std::size_t r = 0; r < image.height(); ++r) {
    const std::size_t dst_row = image.height() - 1 - r;
    for (std::size_t c = 0; c < image.width(); ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(data[r * image.width() + c]));
      unsigned char* b = raw.data() + 4 * (dst_row * image.width() + c);
      b[0] = static_cast<unsigned char>(bits);
      b[1] = static_cast<unsigned char>(bits >> 8);
      b[2] = static_cast<unsigned char>(bits >> 16);
      b[3] = static_cast<unsigned char>(bits >> 24);
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_pfm(const std::filesystem::path& path, const IntensityImage& image) {
  write_file_atomically(path, [&](std::ostream& out) { write_pfm(out, image); });
}

}  // namespace pmse
