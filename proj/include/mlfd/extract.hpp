#pragma once

/// Builders that turn raw source bytes into subdocument values: plain and
/// tagged text with character/line counts and link lists, delimited
/// relational views with domain inference, image header metadata (BMP and
/// PNG), and PCM WAV temporal metadata. Video containers are not parsed;
/// their duration and speed arrive through the source spec.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlfd/detail/text.hpp"
#include "mlfd/model.hpp"

namespace mlfd {

// ---------------------------------------------------------------------------
// errors

struct extract_error : error {
  using error::error;
};

struct decode_error : extract_error {
  std::size_t offset;
  explicit decode_error(std::size_t offset_)
      : extract_error("invalid UTF-8 at byte offset " + std::to_string(offset_)),
        offset(offset_) {}
};

struct not_tagged : extract_error {
  not_tagged() : extract_error("no tags found in source") {}
};

struct unrecognized_source : extract_error {
  std::string location;
  explicit unrecognized_source(std::string location_)
      : extract_error("cannot determine source type of " + location_),
        location(std::move(location_)) {}
};

struct no_header : extract_error {
  no_header() : extract_error("delimited input has no header row") {}
};

struct ragged_row : extract_error {
  std::size_t row;  // 0-based data-row index
  explicit ragged_row(std::size_t row_)
      : extract_error("row " + std::to_string(row_) + " does not match the header cell count"),
        row(row_) {}
};

struct duplicate_attribute : extract_error {
  std::string name;
  explicit duplicate_attribute(std::string name_)
      : extract_error("duplicate attribute name '" + name_ + "'"), name(std::move(name_)) {}
};

struct truncated_header : extract_error {
  truncated_header() : extract_error("file header is truncated") {}
};

struct unsupported_image_format : extract_error {
  unsupported_image_format() : extract_error("unsupported image format") {}
};

struct missing_chunk : extract_error {
  std::string chunk;
  explicit missing_chunk(std::string chunk_)
      : extract_error("required chunk '" + chunk_ + "' not found"), chunk(std::move(chunk_)) {}
};

struct unsupported_codec : extract_error {
  unsupported_codec() : extract_error("only PCM sound data is supported") {}
};

// ---------------------------------------------------------------------------
// source specs

enum class source_type { auto_detect, text, tagged, view, image, temporal };

enum class view_mode { full, intension };

enum class temporal_kind { sound, video };

struct source_spec {
  std::string location;
  source_type declared_type = source_type::auto_detect;
  std::optional<std::string> language;
  std::vector<std::string> keywords;
  view_mode mode = view_mode::full;      // meaningful for views only
  std::optional<std::string> query;      // meaningful for views only
  std::optional<double> duration_secs;   // unparsed video containers
  std::optional<double> speed;           // unparsed video containers
  std::optional<temporal_kind> kind;
};

/// Resolves a source's type: magic numbers first (BMP, PNG, RIFF/WAVE),
/// then the location's extension, then plain text when the bytes decode
/// as UTF-8.
inline source_type sniff_type(std::string_view bytes, std::string_view location) {
  static constexpr std::string_view png_magic = "\x89PNG\r\n\x1a\n";
  if (bytes.size() >= 2 && bytes.substr(0, 2) == "BM") return source_type::image;
  if (bytes.size() >= 8 && bytes.substr(0, 8) == png_magic) return source_type::image;
  if (bytes.size() >= 12 && bytes.substr(0, 4) == "RIFF" && bytes.substr(8, 4) == "WAVE")
    return source_type::temporal;

  const std::string ext = detail::extension_of(location);
  if (ext == ".html" || ext == ".htm" || ext == ".xml" || ext == ".sgml")
    return source_type::tagged;
  if (ext == ".csv") return source_type::view;
  if (ext == ".txt") return source_type::text;

  if (detail::scan_utf8(bytes).ok) return source_type::text;
  throw unrecognized_source(std::string(location));
}

// ---------------------------------------------------------------------------
// text

namespace detail_extract {

inline std::uint64_t count_lines(std::string_view s) {
  std::uint64_t lines = 0;
  for (char c : s)
    if (c == '\n') ++lines;
  if (!s.empty() && s.back() != '\n') ++lines;
  return lines;
}

inline std::string decode_checked(std::string_view bytes) {
  if (auto scan = detail::scan_utf8(bytes); !scan.ok) throw decode_error(scan.error_offset);
  return detail::normalize_newlines(bytes);
}

}  // namespace detail_extract

/// Character counts are Unicode scalar values including line terminators,
/// with CRLF folded to LF first. Lines are maximal segments: the LF count,
/// plus one when non-empty content does not end in LF.
inline text_payload extract_plain_text(std::string_view bytes) {
  std::string content = detail_extract::decode_checked(bytes);
  text_payload payload;
  payload.nb_char = detail::scan_utf8(content).count;
  payload.nb_lines = detail_extract::count_lines(content);
  payload.body = plain_text{std::move(content)};
  return payload;
}

namespace detail_extract {

inline void decode_predefined_entities(std::string& s) {
  static constexpr std::pair<std::string_view, char> table[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    bool matched = false;
    if (s[i] == '&')
      for (const auto& [entity, ch] : table)
        if (std::string_view(s).substr(i, entity.size()) == entity) {
          out.push_back(ch);
          i += entity.size();
          matched = true;
          break;
        }
    if (!matched) out.push_back(s[i++]);
  }
  s = std::move(out);
}

inline bool is_tag_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '_' || c == ':' || c == '.';
}

/// Scans markup for href/src attribute values (attribute names matched
/// case-insensitively), in document order, duplicates kept.
inline std::vector<std::string> scan_links(std::string_view s, bool& tag_seen) {
  std::vector<std::string> links;
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto skip_to = [&](char terminator) {
    while (i < n && s[i] != terminator) ++i;
    if (i < n) ++i;
  };
  while (i < n) {
    if (s[i] != '<') {
      ++i;
      continue;
    }
    if (i + 1 >= n) break;
    const char next = s[i + 1];
    if (next == '!') {
      if (s.substr(i, 4) == "<!--") {
        auto end = s.find("-->", i + 4);
        i = end == std::string_view::npos ? n : end + 3;
      } else {
        ++i;
        skip_to('>');
      }
      continue;
    }
    if (next == '?') {
      ++i;
      skip_to('>');
      continue;
    }
    if (next == '/') {
      tag_seen = true;
      ++i;
      skip_to('>');
      continue;
    }
    if (!is_tag_name_char(next)) {
      ++i;  // a literal '<' in text
      continue;
    }
    tag_seen = true;
    i += 1;
    while (i < n && is_tag_name_char(s[i])) ++i;
    // attribute scan
    while (i < n && s[i] != '>') {
      while (i < n && (detail::is_ascii_space(s[i]) || s[i] == '/')) ++i;
      if (i >= n || s[i] == '>') break;
      std::size_t name_start = i;
      while (i < n && s[i] != '=' && s[i] != '>' && !detail::is_ascii_space(s[i])) ++i;
      std::string_view attr = s.substr(name_start, i - name_start);
      while (i < n && detail::is_ascii_space(s[i])) ++i;
      std::string value;
      bool has_value = false;
      if (i < n && s[i] == '=') {
        ++i;
        while (i < n && detail::is_ascii_space(s[i])) ++i;
        if (i < n && (s[i] == '"' || s[i] == '\'')) {
          const char quote = s[i++];
          std::size_t start = i;
          while (i < n && s[i] != quote) ++i;
          value.assign(s.substr(start, i - start));
          if (i < n) ++i;
        } else {
          std::size_t start = i;
          while (i < n && !detail::is_ascii_space(s[i]) && s[i] != '>') ++i;
          value.assign(s.substr(start, i - start));
        }
        has_value = true;
      }
      if (has_value && (detail::iequals(attr, "href") || detail::iequals(attr, "src"))) {
        decode_predefined_entities(value);
        links.push_back(std::move(value));
      }
    }
    if (i < n) ++i;  // '>'
  }
  return links;
}

}  // namespace detail_extract

/// Counts are computed as for plain text over the raw content; the body
/// keeps the full markup and the href/src link targets.
inline text_payload extract_tagged_text(std::string_view bytes) {
  std::string content = detail_extract::decode_checked(bytes);
  bool tag_seen = false;
  auto links = detail_extract::scan_links(content, tag_seen);
  if (!tag_seen) throw not_tagged();
  text_payload payload;
  payload.nb_char = detail::scan_utf8(content).count;
  payload.nb_lines = detail_extract::count_lines(content);
  payload.body = tagged_text{std::move(content), std::move(links)};
  return payload;
}

// ---------------------------------------------------------------------------
// relational views

/// integer when every value is sign+digits, else real when every value is
/// a plain decimal number, else date when every value is YYYY-MM-DD,
/// else text. An empty list is text.
inline domain infer_domain(const std::vector<std::string>& values) {
  if (values.empty()) return domain::text;

  auto all = [&values](auto&& pred) {
    for (const auto& v : values)
      if (!pred(std::string_view(v))) return false;
    return true;
  };
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto is_integer = [&digits](std::string_view s) {
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
    return digits(s);
  };
  auto is_real = [&digits](std::string_view s) {
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return digits(s);
    auto whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return false;
    return (whole.empty() || digits(whole)) && (frac.empty() || digits(frac));
  };
  auto is_date = [&digits](std::string_view s) {
    return s.size() == 10 && s[4] == '-' && s[7] == '-' && digits(s.substr(0, 4)) &&
           digits(s.substr(5, 2)) && digits(s.substr(8, 2));
  };

  if (all(is_integer)) return domain::integer;
  if (all(is_real)) return domain::real;
  if (all(is_date)) return domain::date;
  return domain::text;
}

namespace detail_extract {

/// RFC 4180 records: comma-separated, double-quote quoting with doubled
/// quotes as escapes; quoted cells may contain separators and newlines.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view s) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool cell_started = false;

  auto end_cell = [&] {
    record.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  auto end_record = [&] {
    end_cell();
    records.push_back(std::move(record));
    record.clear();
  };

  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    char c = s[i];
    if (c == '"' && !cell_started && cell.empty()) {
      ++i;
      while (i < n) {
        if (s[i] == '"') {
          if (i + 1 < n && s[i + 1] == '"') {
            cell.push_back('"');
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          cell.push_back(s[i++]);
        }
      }
      cell_started = true;
      continue;
    }
    if (c == ',') {
      end_cell();
      ++i;
      continue;
    }
    if (c == '\n' || c == '\r') {
      end_record();
      if (c == '\r' && i + 1 < n && s[i + 1] == '\n') ++i;
      ++i;
      continue;
    }
    cell.push_back(c);
    cell_started = true;
    ++i;
  }
  if (cell_started || !cell.empty() || !record.empty()) end_record();
  return records;
}

}  // namespace detail_extract

/// First row is the header; empty cells become absent values. Intension
/// mode keeps the attributes (with domains inferred from the data rows)
/// and drops the tuples.
inline relational_view extract_view(std::string_view bytes, view_mode mode,
                                    std::optional<std::string> query = std::nullopt) {
  auto records = detail_extract::parse_csv(bytes);
  if (records.empty()) throw no_header();

  const auto& header = records.front();
  relational_view view;
  view.query = std::move(query);

  std::set<std::string> seen;
  for (const auto& name : header)
    if (!seen.insert(name).second) throw duplicate_attribute(name);

  for (std::size_t row = 1; row < records.size(); ++row)
    if (records[row].size() != header.size()) throw ragged_row(row - 1);

  for (std::size_t col = 0; col < header.size(); ++col) {
    std::vector<std::string> non_empty;
    for (std::size_t row = 1; row < records.size(); ++row)
      if (!records[row][col].empty()) non_empty.push_back(records[row][col]);
    view.attributes.push_back({header[col], infer_domain(non_empty)});
  }

  if (mode == view_mode::full) {
    for (std::size_t row = 1; row < records.size(); ++row) {
      view_tuple tuple;
      for (std::size_t col = 0; col < header.size(); ++col) {
        auto& raw = records[row][col];
        tuple.push_back({header[col], raw.empty() ? std::nullopt
                                                  : std::optional<std::string>(std::move(raw))});
      }
      view.tuples.push_back(std::move(tuple));
    }
  }
  return view;
}

// ---------------------------------------------------------------------------
// images

namespace detail_extract {

inline std::uint32_t u32le(std::string_view s, std::size_t off) {
  return static_cast<std::uint8_t>(s[off]) | static_cast<std::uint8_t>(s[off + 1]) << 8 |
         static_cast<std::uint8_t>(s[off + 2]) << 16 |
         static_cast<std::uint32_t>(static_cast<std::uint8_t>(s[off + 3])) << 24;
}

inline std::uint16_t u16le(std::string_view s, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<std::uint8_t>(s[off]) |
                                    static_cast<std::uint8_t>(s[off + 1]) << 8);
}

inline std::int32_t i32le(std::string_view s, std::size_t off) {
  return static_cast<std::int32_t>(u32le(s, off));
}

inline std::uint32_t u32be(std::string_view s, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<std::uint8_t>(s[off])) << 24 |
         static_cast<std::uint8_t>(s[off + 1]) << 16 |
         static_cast<std::uint8_t>(s[off + 2]) << 8 | static_cast<std::uint8_t>(s[off + 3]);
}

/// Pixels-per-meter to dots-per-inch, rounded half away from zero;
/// 3937 ppm maps to 100 dpi.
inline std::optional<std::uint32_t> ppm_to_dpi(std::int64_t ppm) {
  if (ppm <= 0) return std::nullopt;
  const auto dpi = std::llround(static_cast<double>(ppm) * 0.0254);
  if (dpi <= 0) return std::nullopt;
  return static_cast<std::uint32_t>(dpi);
}

inline std::optional<std::uint32_t> nonzero(std::int64_t v) {
  if (v == 0) return std::nullopt;
  return static_cast<std::uint32_t>(v < 0 ? -v : v);
}

inline image_payload extract_bmp(std::string_view bytes) {
  // BITMAPFILEHEADER (14 bytes) + BITMAPINFOHEADER (40 bytes)
  if (bytes.size() < 54) throw truncated_header();
  if (u32le(bytes, 14) < 40) throw truncated_header();
  image_payload image;
  image.format = "Bitmap";
  const auto compression_code = u32le(bytes, 30);
  image.compression = compression_code == 0 ? "None" : std::to_string(compression_code);
  image.width_px = nonzero(i32le(bytes, 18));
  image.length_px = nonzero(i32le(bytes, 22));  // negative height means top-down
  image.resolution_dpi = ppm_to_dpi(i32le(bytes, 38));
  return image;
}

inline image_payload extract_png(std::string_view bytes) {
  // signature + IHDR (length, type, 13 data bytes, crc)
  if (bytes.size() < 33 || bytes.substr(12, 4) != "IHDR") throw truncated_header();
  image_payload image;
  image.format = "PNG";
  image.compression = "Deflate";
  image.width_px = nonzero(u32be(bytes, 16));
  image.length_px = nonzero(u32be(bytes, 20));
  std::size_t off = 8;
  while (off + 8 <= bytes.size()) {
    const std::uint64_t len = u32be(bytes, off);
    const std::string_view type = bytes.substr(off + 4, 4);
    if (off + 12 + len > bytes.size()) break;
    if (type == "pHYs" && len >= 9) {
      const std::uint32_t x_ppu = u32be(bytes, off + 8);
      const auto unit = static_cast<std::uint8_t>(bytes[off + 16]);
      if (unit == 1) image.resolution_dpi = ppm_to_dpi(x_ppu);
      break;
    }
    if (type == "IEND") break;
    off += 12 + len;
  }
  return image;
}

}  // namespace detail_extract

/// Header-only metadata from BMP (BITMAPINFOHEADER fields) or PNG
/// (IHDR, optional pHYs). Resolution is absent when the file does not
/// record a positive density.
inline image_payload extract_image(std::string_view bytes) {
  static constexpr std::string_view png_magic = "\x89PNG\r\n\x1a\n";
  if (bytes.size() >= 2 && bytes.substr(0, 2) == "BM") return detail_extract::extract_bmp(bytes);
  if (bytes.size() >= 8 && bytes.substr(0, 8) == png_magic)
    return detail_extract::extract_png(bytes);
  throw unsupported_image_format();
}

// ---------------------------------------------------------------------------
// temporal media

/// PCM WAV only: speed is the sample rate in Hz, duration is the data
/// chunk length over the byte rate, rounded to three decimals.
inline temporal_payload extract_temporal(std::string_view bytes, std::string descriptor = {}) {
  using namespace detail_extract;
  if (bytes.size() < 12) throw truncated_header();
  if (bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") throw missing_chunk("WAVE");

  std::optional<std::uint16_t> format_tag;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t sample_rate = 0, byte_rate = 0;
  std::optional<std::uint64_t> data_size;

  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(off, 4);
    const std::uint64_t size = u32le(bytes, off + 4);
    if (off + 8 + size > bytes.size()) throw truncated_header();
    if (id == "fmt ") {
      if (size < 16) throw truncated_header();
      format_tag = u16le(bytes, off + 8);
      channels = u16le(bytes, off + 10);
      sample_rate = u32le(bytes, off + 12);
      byte_rate = u32le(bytes, off + 16);
      bits = u16le(bytes, off + 22);
    } else if (id == "data") {
      data_size = size;
    }
    off += 8 + size + (size & 1);
  }

  if (!format_tag) throw missing_chunk("fmt ");
  if (!data_size) throw missing_chunk("data");
  if (*format_tag != 1) throw unsupported_codec();

  if (byte_rate == 0) byte_rate = sample_rate * channels * (bits / 8);

  temporal_payload payload;
  payload.speed = static_cast<double>(sample_rate);
  if (byte_rate != 0)
    payload.duration_secs =
        std::round(static_cast<double>(*data_size) / byte_rate * 1000.0) / 1000.0;
  else if (*data_size == 0)
    payload.duration_secs = 0.0;
  payload.media = sound_track{descriptor.empty() ? std::nullopt
                                                 : std::optional<std::string>(std::move(descriptor))};
  return payload;
}

// ---------------------------------------------------------------------------
// assembly

namespace detail_extract {

inline std::string type_label(source_type resolved, std::string_view location,
                              const subdocument_payload& payload) {
  switch (resolved) {
    case source_type::text: return "Text";
    case source_type::view: return "View";
    case source_type::image: return "Image";
    case source_type::tagged: {
      const std::string ext = detail::extension_of(location);
      if (ext == ".sgml") return "SGML";
      if (ext == ".html" || ext == ".htm") return "HTML";
      if (ext == ".xml") return "XML";
      return "Tagged";
    }
    case source_type::temporal: {
      const auto& temporal = std::get<temporal_payload>(payload);
      return std::holds_alternative<sound_track>(temporal.media) ? "Sound" : "Video";
    }
    default: return "Text";
  }
}

}  // namespace detail_extract

/// Dispatches on the resolved type and fills the common header fields.
/// A tagged source with no tags falls back to plain text.
inline subdocument build_subdocument(const source_spec& spec, std::string_view bytes) {
  source_type resolved = spec.declared_type == source_type::auto_detect
                             ? sniff_type(bytes, spec.location)
                             : spec.declared_type;
  const std::string base = detail::basename_of(spec.location);

  subdocument sub;
  sub.location = spec.location;
  sub.doc_name = base;
  sub.size_bytes = bytes.size();
  sub.language = spec.language;
  sub.keywords = spec.keywords;

  switch (resolved) {
    case source_type::text:
      sub.payload = extract_plain_text(bytes);
      break;
    case source_type::tagged:
      try {
        sub.payload = extract_tagged_text(bytes);
      } catch (const not_tagged&) {
        sub.payload = extract_plain_text(bytes);
        resolved = source_type::text;
      }
      break;
    case source_type::view:
      sub.payload = extract_view(bytes, spec.mode, spec.query);
      break;
    case source_type::image:
      sub.payload = extract_image(bytes);
      break;
    case source_type::temporal:
      if (spec.kind == temporal_kind::video) {
        temporal_payload video;
        video.duration_secs = spec.duration_secs;
        video.speed = spec.speed;
        video.media = video_track{base.empty() ? std::nullopt : std::optional<std::string>(base)};
        sub.payload = std::move(video);
      } else {
        sub.payload = extract_temporal(bytes, base);
      }
      break;
    case source_type::auto_detect:
      throw unrecognized_source(spec.location);  // unreachable: resolved above
  }

  sub.doc_type = detail_extract::type_label(resolved, spec.location, sub.payload);
  return sub;
}

}  // namespace mlfd
