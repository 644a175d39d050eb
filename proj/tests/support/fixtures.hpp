#pragma once

// Byte-level builders for the binary formats the extractors read, so tests
// can construct files with known field values, plus a scratch-directory
// helper for tests that go through real files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

namespace testsupport {

inline void put_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8 & 0xFF));
}

inline void put_u32le(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out.push_back(static_cast<char>(v >> shift & 0xFF));
}

inline void put_u32be(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<char>(v >> shift & 0xFF));
}

struct bmp_params {
  std::int32_t width = 2;
  std::int32_t height = 2;
  std::uint16_t bits_per_pixel = 24;
  std::uint32_t compression = 0;
  std::int32_t x_ppm = 3937;
  std::int32_t y_ppm = 3937;
};

/// BITMAPFILEHEADER + BITMAPINFOHEADER + uncompressed pixel rows
/// (rows padded to four bytes; top-down heights produce no pixel data).
inline std::string make_bmp(const bmp_params& p) {
  const std::int64_t rows = p.height < 0 ? -static_cast<std::int64_t>(p.height) : p.height;
  const std::int64_t row_bytes = (static_cast<std::int64_t>(p.width) * p.bits_per_pixel + 31) / 32 * 4;
  const std::uint32_t data_size = static_cast<std::uint32_t>(rows * row_bytes);

  std::string out = "BM";
  put_u32le(out, 54 + data_size);
  put_u16le(out, 0);
  put_u16le(out, 0);
  put_u32le(out, 54);

  put_u32le(out, 40);
  put_u32le(out, static_cast<std::uint32_t>(p.width));
  put_u32le(out, static_cast<std::uint32_t>(p.height));
  put_u16le(out, 1);
  put_u16le(out, p.bits_per_pixel);
  put_u32le(out, p.compression);
  put_u32le(out, data_size);
  put_u32le(out, static_cast<std::uint32_t>(p.x_ppm));
  put_u32le(out, static_cast<std::uint32_t>(p.y_ppm));
  put_u32le(out, 0);
  put_u32le(out, 0);

  out.append(data_size, '\0');
  return out;
}

struct png_params {
  std::uint32_t width = 2;
  std::uint32_t height = 2;
  bool with_phys = false;
  std::uint32_t pixels_per_unit = 3937;
  std::uint8_t unit = 1;  // 1 = meter
};

/// Signature, IHDR, optional pHYs, IEND. CRCs are zero-filled; the
/// extractor reads fields only.
inline std::string make_png(const png_params& p) {
  std::string out = "\x89PNG\r\n\x1a\n";
  put_u32be(out, 13);
  out += "IHDR";
  put_u32be(out, p.width);
  put_u32be(out, p.height);
  out += std::string("\x08\x02\x00\x00\x00", 5);  // 8-bit RGB
  put_u32be(out, 0);
  if (p.with_phys) {
    put_u32be(out, 9);
    out += "pHYs";
    put_u32be(out, p.pixels_per_unit);
    put_u32be(out, p.pixels_per_unit);
    out.push_back(static_cast<char>(p.unit));
    put_u32be(out, 0);
  }
  put_u32be(out, 0);
  out += "IEND";
  put_u32be(out, 0);
  return out;
}

struct wav_params {
  std::uint16_t format_tag = 1;
  std::uint16_t channels = 1;
  std::uint32_t sample_rate = 8000;
  std::uint16_t bits_per_sample = 8;
  std::uint32_t data_bytes = 16000;
  bool include_fmt = true;
  bool include_data = true;
};

inline std::string make_wav(const wav_params& p) {
  std::string chunks;
  if (p.include_fmt) {
    chunks += "fmt ";
    put_u32le(chunks, 16);
    put_u16le(chunks, p.format_tag);
    put_u16le(chunks, p.channels);
    put_u32le(chunks, p.sample_rate);
    put_u32le(chunks, p.sample_rate * p.channels * (p.bits_per_sample / 8));
    put_u16le(chunks, static_cast<std::uint16_t>(p.channels * (p.bits_per_sample / 8)));
    put_u16le(chunks, p.bits_per_sample);
  }
  if (p.include_data) {
    chunks += "data";
    put_u32le(chunks, p.data_bytes);
    chunks.append(p.data_bytes, '\0');
    if (p.data_bytes & 1) chunks.push_back('\0');
  }
  std::string out = "RIFF";
  put_u32le(out, static_cast<std::uint32_t>(4 + chunks.size()));
  out += "WAVE";
  out += chunks;
  return out;
}

/// A unique directory under the system temp dir, removed on destruction.
struct scratch_dir {
  std::filesystem::path path;

  scratch_dir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("mlfd-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~scratch_dir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  scratch_dir(const scratch_dir&) = delete;
  scratch_dir& operator=(const scratch_dir&) = delete;

  std::string file(std::string_view name, std::string_view bytes) const {
    const auto p = path / name;
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return p.string();
  }
};

}  // namespace testsupport
