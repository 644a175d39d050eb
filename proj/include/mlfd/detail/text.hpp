#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mlfd::detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(ascii_lower(c));
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  return true;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

/// Replaces every CRLF pair with a lone LF.
inline std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n') continue;
    out.push_back(s[i]);
  }
  return out;
}

struct utf8_scan {
  bool ok = true;
  std::size_t count = 0;         // Unicode scalar values seen
  std::size_t error_offset = 0;  // byte offset of the first bad sequence
};

/// Validates UTF-8 and counts scalar values. Rejects overlong forms,
/// surrogates, and code points above U+10FFFF.
inline utf8_scan scan_utf8(std::string_view s) {
  utf8_scan r;
  std::size_t i = 0;
  const auto n = s.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp, min_cp;
    if (b0 < 0x80) {
      ++i;
      ++r.count;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2; cp = b0 & 0x1F; min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3; cp = b0 & 0x0F; min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4; cp = b0 & 0x07; min_cp = 0x10000;
    } else {
      r.ok = false; r.error_offset = i; return r;
    }
    if (i + len > n) { r.ok = false; r.error_offset = i; return r; }
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) { r.ok = false; r.error_offset = i; return r; }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      r.ok = false; r.error_offset = i; return r;
    }
    i += len;
    ++r.count;
  }
  return r;
}

inline std::string format_fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// Integral values print without a decimal point; everything else with
/// up to three decimals, trailing zeros trimmed.
inline std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  std::string s = format_fixed3(v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

/// Last path (or URL path) component; query and fragment are stripped
/// from URLs first. Falls back to the whole string when the component
/// would be empty.
inline std::string basename_of(std::string_view location) {
  std::string_view s = location;
  if (s.find("://") != std::string_view::npos) {
    if (auto q = s.find_first_of("?#"); q != std::string_view::npos) s = s.substr(0, q);
  }
  if (auto slash = s.find_last_of('/'); slash != std::string_view::npos) s = s.substr(slash + 1);
  if (s.empty()) s = location;
  return std::string(s);
}

/// Lowercased extension of the last path component, dot included ("" if none).
inline std::string extension_of(std::string_view location) {
  const std::string base = basename_of(location);
  if (auto dot = base.find_last_of('.'); dot != std::string::npos && dot + 1 < base.size())
    return to_lower(std::string_view(base).substr(dot));
  return {};
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

}  // namespace mlfd::detail
