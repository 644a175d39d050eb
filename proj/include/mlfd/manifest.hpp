#pragma once

/// Integration manifests: a sectioned key-value text file describing one
/// complex object and its sources.
///
///   # comment
///   [object]
///   name = Sample image
///   date = 2001-06-15
///   source = Local
///
///   [subdocument]
///   location = scissors.bmp        (required)
///   type = auto                    (text|tagged|view|image|temporal)
///   language = English
///   keywords = scissors, black, white
///   view_mode = full               (full|intension)
///   query = SELECT ...
///   kind = video                   (sound|video, temporal sources only)
///   duration = 12.5                (seconds, kind = video only)
///   speed = 25                     (kind = video only)
///
/// Unknown keys, repeated keys and malformed values are errors.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlfd/detail/text.hpp"
#include "mlfd/extract.hpp"

namespace mlfd {

struct manifest_error : error {
  std::size_t line;
  std::string detail;
  manifest_error(std::size_t line_, std::string detail_)
      : error("manifest error at line " + std::to_string(line_) + ": " + detail_),
        line(line_), detail(std::move(detail_)) {}
};

struct manifest {
  std::string object_name;
  std::string date;  // YYYY-MM-DD
  std::string source;
  std::vector<source_spec> subdocuments;
};

namespace detail_manifest {

inline bool iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

inline std::optional<double> parse_decimal(std::string_view s) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

inline std::vector<std::string> parse_keywords(std::string_view value) {
  if (detail::trim(value).empty()) return {};
  std::vector<std::string> keywords;
  for (const auto& part : detail::split(value, ','))
    keywords.emplace_back(detail::trim(part));
  return keywords;
}

}  // namespace detail_manifest

inline manifest parse_manifest(std::string_view text) {
  manifest m;
  bool object_seen = false;

  enum class section { none, object, subdocument };
  section current = section::none;
  std::vector<std::string> section_keys;

  const auto lines = detail::split(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = detail::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line == "[object]") {
        if (object_seen) throw manifest_error(line_no, "more than one [object] section");
        object_seen = true;
        current = section::object;
      } else if (line == "[subdocument]") {
        current = section::subdocument;
        m.subdocuments.emplace_back();
      } else {
        throw manifest_error(line_no, "unknown section " + std::string(line));
      }
      section_keys.clear();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw manifest_error(line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw manifest_error(line_no, "empty key");
    if (current == section::none)
      throw manifest_error(line_no, "entry before any section");
    for (const auto& seen : section_keys)
      if (seen == key) throw manifest_error(line_no, "key '" + key + "' repeated");
    section_keys.push_back(key);

    if (current == section::object) {
      if (key == "name") m.object_name = value;
      else if (key == "date") {
        if (!detail_manifest::iso_date(value))
          throw manifest_error(line_no, "date must be YYYY-MM-DD");
        m.date = value;
      } else if (key == "source") m.source = value;
      else throw manifest_error(line_no, "unknown [object] key '" + key + "'");
      continue;
    }

    source_spec& spec = m.subdocuments.back();
    if (key == "location") {
      if (value.empty()) throw manifest_error(line_no, "location must not be empty");
      spec.location = value;
    } else if (key == "type") {
      if (value == "auto") spec.declared_type = source_type::auto_detect;
      else if (value == "text") spec.declared_type = source_type::text;
      else if (value == "tagged") spec.declared_type = source_type::tagged;
      else if (value == "view") spec.declared_type = source_type::view;
      else if (value == "image") spec.declared_type = source_type::image;
      else if (value == "temporal") spec.declared_type = source_type::temporal;
      else throw manifest_error(line_no, "unknown type '" + value + "'");
    } else if (key == "language") {
      spec.language = value;
    } else if (key == "keywords") {
      spec.keywords = detail_manifest::parse_keywords(value);
    } else if (key == "view_mode") {
      if (value == "full") spec.mode = view_mode::full;
      else if (value == "intension") spec.mode = view_mode::intension;
      else throw manifest_error(line_no, "view_mode must be full or intension");
    } else if (key == "query") {
      spec.query = value;
    } else if (key == "kind") {
      if (value == "sound") spec.kind = temporal_kind::sound;
      else if (value == "video") spec.kind = temporal_kind::video;
      else throw manifest_error(line_no, "kind must be sound or video");
    } else if (key == "duration") {
      auto v = detail_manifest::parse_decimal(value);
      if (!v || *v < 0) throw manifest_error(line_no, "duration must be a non-negative number");
      spec.duration_secs = v;
    } else if (key == "speed") {
      auto v = detail_manifest::parse_decimal(value);
      if (!v || *v <= 0) throw manifest_error(line_no, "speed must be a positive number");
      spec.speed = v;
    } else {
      throw manifest_error(line_no, "unknown [subdocument] key '" + key + "'");
    }
  }

  if (!object_seen) throw manifest_error(lines.size(), "missing [object] section");
  if (m.object_name.empty()) throw manifest_error(lines.size(), "[object] requires name");
  if (m.date.empty()) throw manifest_error(lines.size(), "[object] requires date");
  if (m.source.empty()) throw manifest_error(lines.size(), "[object] requires source");
  if (m.subdocuments.empty())
    throw manifest_error(lines.size(), "at least one [subdocument] section is required");

  for (const auto& spec : m.subdocuments) {
    if (spec.location.empty())
      throw manifest_error(lines.size(), "every [subdocument] requires location");
    if (spec.kind && spec.declared_type != source_type::temporal)
      throw manifest_error(lines.size(), "kind requires type = temporal");
    if ((spec.duration_secs || spec.speed) && spec.kind != temporal_kind::video)
      throw manifest_error(lines.size(), "duration and speed require kind = video");
  }
  return m;
}

}  // namespace mlfd
