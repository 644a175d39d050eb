#pragma once

/// Domain types for complex objects: a named, dated, sourced container of
/// heterogeneous subdocuments (texts, relational views, images, temporal
/// media), plus the translation into a value-binding tree whose element
/// names follow the document type.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mlfd/binding.hpp"
#include "mlfd/detail/text.hpp"
#include "mlfd/dtd.hpp"

namespace mlfd {

// ---------------------------------------------------------------------------
// payloads

struct plain_text {
  std::string content;
};

struct tagged_text {
  std::string content;
  std::vector<std::string> links;
};

struct text_payload {
  std::uint64_t nb_char = 0;
  std::uint64_t nb_lines = 0;
  std::variant<plain_text, tagged_text> body;
};

enum class domain { integer, real, date, text, blob };

inline std::string_view domain_name(domain d) {
  switch (d) {
    case domain::integer: return "integer";
    case domain::real: return "real";
    case domain::date: return "date";
    case domain::text: return "text";
    case domain::blob: return "blob";
  }
  return "text";
}

struct view_attribute {
  std::string name;
  domain value_domain = domain::text;
};

struct tuple_cell {
  std::string att_name_ref;
  std::optional<std::string> value;  // blob values travel base-64 encoded
};

using view_tuple = std::vector<tuple_cell>;

struct relational_view {
  std::optional<std::string> query;
  std::vector<view_attribute> attributes;
  std::vector<view_tuple> tuples;
};

struct image_payload {
  std::optional<std::string> compression;
  std::optional<std::string> format;
  std::optional<std::uint32_t> resolution_dpi;
  std::optional<std::uint32_t> length_px;  // height
  std::optional<std::uint32_t> width_px;
};

struct sound_track {
  std::optional<std::string> descriptor;
};

struct video_track {
  std::optional<std::string> descriptor;
};

struct temporal_payload {
  std::optional<double> duration_secs;
  std::optional<double> speed;  // Hz for sound, frames per second for video
  std::variant<sound_track, video_track> media;
};

using subdocument_payload =
    std::variant<text_payload, relational_view, image_payload, temporal_payload>;

// ---------------------------------------------------------------------------
// the complex object

struct subdocument {
  std::string doc_name;
  std::string doc_type;  // display label: "Text", "SGML", "Image", ...
  std::uint64_t size_bytes = 0;
  std::string location;
  std::optional<std::string> language;
  std::vector<std::string> keywords;
  subdocument_payload payload;
};

struct complex_object {
  std::string name;
  std::string date;  // ISO 8601 calendar date, emitted verbatim
  std::string source;
  std::vector<subdocument> subdocuments;
};

// ---------------------------------------------------------------------------
// invariants

struct invariant_violation : error {
  std::string path;
  std::string description;
  invariant_violation(std::string path_, std::string description_)
      : error("invariant violation at " + path_ + ": " + description_),
        path(std::move(path_)), description(std::move(description_)) {}
};

struct reference_violation {
  std::size_t tuple_index;
  std::string att_name_ref;
  friend bool operator==(const reference_violation&, const reference_violation&) = default;
};

/// One entry per tuple cell whose reference names no declared attribute.
inline std::vector<reference_violation> check_referential_integrity(const relational_view& view) {
  std::set<std::string> names;
  for (const auto& a : view.attributes) names.insert(a.name);
  std::vector<reference_violation> out;
  for (std::size_t t = 0; t < view.tuples.size(); ++t)
    for (const auto& cell : view.tuples[t])
      if (!names.count(cell.att_name_ref)) out.push_back({t, cell.att_name_ref});
  return out;
}

struct invariant_issue {
  std::string path;
  std::string description;
};

namespace detail_model {

inline void check_view(const relational_view& view, const std::string& path,
                       std::vector<invariant_issue>& out) {
  if (view.attributes.empty()) out.push_back({path + ".attributes", "must not be empty"});
  std::set<std::string> names;
  for (std::size_t i = 0; i < view.attributes.size(); ++i)
    if (!names.insert(view.attributes[i].name).second)
      out.push_back({path + ".attributes[" + std::to_string(i) + "]",
                     "duplicate attribute name '" + view.attributes[i].name + "'"});
  for (const auto& rv : check_referential_integrity(view))
    out.push_back({path + ".tuples[" + std::to_string(rv.tuple_index) + "]",
                   "reference '" + rv.att_name_ref + "' names no attribute"});
  for (std::size_t t = 0; t < view.tuples.size(); ++t) {
    const auto& tuple = view.tuples[t];
    const std::string tpath = path + ".tuples[" + std::to_string(t) + "]";
    if (tuple.empty()) out.push_back({tpath, "tuple must not be empty"});
    // cells must follow attribute declaration order, each attribute at most once
    std::size_t next_attr = 0;
    for (const auto& cell : tuple) {
      std::size_t k = next_attr;
      while (k < view.attributes.size() && view.attributes[k].name != cell.att_name_ref) ++k;
      if (k == view.attributes.size()) {
        if (names.count(cell.att_name_ref))
          out.push_back({tpath, "reference '" + cell.att_name_ref +
                                    "' repeats or breaks attribute order"});
        // unknown references were already reported above
      } else {
        next_attr = k + 1;
      }
    }
  }
}

inline void check_payload(const subdocument_payload& payload, const std::string& path,
                          std::vector<invariant_issue>& out) {
  if (const auto* text = std::get_if<text_payload>(&payload)) {
    if (const auto* tagged = std::get_if<tagged_text>(&text->body)) {
      for (std::size_t i = 0; i < tagged->links.size(); ++i)
        if (tagged->links[i].empty())
          out.push_back({path + ".links[" + std::to_string(i) + "]", "link must not be empty"});
    }
  } else if (const auto* view = std::get_if<relational_view>(&payload)) {
    check_view(*view, path, out);
  } else if (const auto* image = std::get_if<image_payload>(&payload)) {
    if (image->length_px && *image->length_px == 0)
      out.push_back({path + ".length", "pixel count must be at least 1"});
    if (image->width_px && *image->width_px == 0)
      out.push_back({path + ".width", "pixel count must be at least 1"});
    if (image->resolution_dpi && *image->resolution_dpi == 0)
      out.push_back({path + ".resolution", "must be positive"});
  } else if (const auto* temporal = std::get_if<temporal_payload>(&payload)) {
    if (temporal->duration_secs && *temporal->duration_secs < 0)
      out.push_back({path + ".duration", "must be non-negative"});
    if (temporal->speed && *temporal->speed <= 0)
      out.push_back({path + ".speed", "must be positive"});
  }
}

}  // namespace detail_model

inline std::vector<invariant_issue> check_invariants(const complex_object& obj) {
  std::vector<invariant_issue> out;
  if (obj.name.empty()) out.push_back({"name", "must not be empty"});
  if (obj.source.empty()) out.push_back({"source", "must not be empty"});
  if (obj.subdocuments.empty()) out.push_back({"subdocuments", "at least one is required"});
  for (std::size_t i = 0; i < obj.subdocuments.size(); ++i) {
    const auto& sub = obj.subdocuments[i];
    const std::string path = "subdocuments[" + std::to_string(i) + "]";
    if (sub.doc_name.empty()) out.push_back({path + ".doc_name", "must not be empty"});
    if (sub.doc_type.empty()) out.push_back({path + ".doc_type", "must not be empty"});
    if (sub.location.empty()) out.push_back({path + ".location", "must not be empty"});
    std::set<std::string> seen;
    for (std::size_t k = 0; k < sub.keywords.size(); ++k) {
      const std::string kpath = path + ".keywords[" + std::to_string(k) + "]";
      if (sub.keywords[k].empty())
        out.push_back({kpath, "keyword must not be empty"});
      else if (!seen.insert(sub.keywords[k]).second)
        out.push_back({kpath, "duplicate keyword '" + sub.keywords[k] + "'"});
    }
    detail_model::check_payload(sub.payload, path, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// translation to a binding tree

namespace detail_model {

inline value_binding size_atom(std::uint64_t bytes) {
  return value_binding::atom("SIZE", std::to_string(bytes) + " Bytes");
}

inline value_binding bind_text(const text_payload& text) {
  std::vector<value_binding> children;
  children.push_back(value_binding::atom("NB_CHAR", std::to_string(text.nb_char)));
  children.push_back(value_binding::atom("NB_LINES", std::to_string(text.nb_lines)));
  if (const auto* plain = std::get_if<plain_text>(&text.body)) {
    children.push_back(value_binding::atom("PLAIN_TEXT", plain->content));
  } else {
    const auto& tagged = std::get<tagged_text>(text.body);
    std::vector<value_binding> tt;
    tt.push_back(value_binding::atom("CONTENT", tagged.content));
    for (const auto& link : tagged.links) tt.push_back(value_binding::atom("LINK", link));
    children.push_back(value_binding::node("TAGGED_TEXT", std::move(tt)));
  }
  return value_binding::node("TEXT", std::move(children));
}

inline value_binding bind_view(const relational_view& view) {
  std::vector<value_binding> children;
  if (view.query) children.push_back(value_binding::atom("QUERY", *view.query));
  for (const auto& attr : view.attributes) {
    std::vector<value_binding> a;
    a.push_back(value_binding::atom("ATT_NAME", attr.name));
    a.push_back(value_binding::atom("DOMAIN", std::string(domain_name(attr.value_domain))));
    children.push_back(value_binding::node("ATTRIBUTE", std::move(a)));
  }
  for (const auto& tuple : view.tuples) {
    std::vector<value_binding> t;
    for (const auto& cell : tuple) {
      t.push_back(value_binding::atom("ATT_NAME_REF", cell.att_name_ref));
      t.push_back(value_binding::atom("VALUE", cell.value));
    }
    children.push_back(value_binding::node("TUPLE", std::move(t)));
  }
  return value_binding::node("RELATIONAL_VIEW", std::move(children));
}

inline value_binding bind_image(const image_payload& image) {
  auto opt_num = [](const std::optional<std::uint32_t>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return std::to_string(*v);
  };
  std::vector<value_binding> children;
  children.push_back(value_binding::atom("COMPRESSION", image.compression));
  children.push_back(value_binding::atom("FORMAT", image.format));
  children.push_back(value_binding::atom(
      "RESOLUTION",
      image.resolution_dpi ? std::optional<std::string>(std::to_string(*image.resolution_dpi) +
                                                        " dpi")
                           : std::nullopt));
  children.push_back(value_binding::atom("LENGTH", opt_num(image.length_px)));
  children.push_back(value_binding::atom("WIDTH", opt_num(image.width_px)));
  return value_binding::node("IMAGE", std::move(children));
}

inline value_binding bind_temporal(const temporal_payload& temporal) {
  std::vector<value_binding> children;
  children.push_back(value_binding::atom(
      "DURATION", temporal.duration_secs
                      ? std::optional<std::string>(detail::format_fixed3(*temporal.duration_secs))
                      : std::nullopt));
  children.push_back(value_binding::atom(
      "SPEED", temporal.speed ? std::optional<std::string>(detail::format_number(*temporal.speed))
                              : std::nullopt));
  if (const auto* sound = std::get_if<sound_track>(&temporal.media))
    children.push_back(value_binding::atom("SOUND", sound->descriptor));
  else
    children.push_back(
        value_binding::atom("VIDEO", std::get<video_track>(temporal.media).descriptor));
  return value_binding::node("TEMPORAL", std::move(children));
}

inline value_binding bind_subdocument(const subdocument& sub) {
  std::vector<value_binding> children;
  children.push_back(value_binding::atom("DOC_NAME", sub.doc_name));
  children.push_back(value_binding::atom("TYPE", sub.doc_type));
  children.push_back(size_atom(sub.size_bytes));
  children.push_back(value_binding::atom("LOCATION", sub.location));
  if (sub.language) children.push_back(value_binding::atom("LANGUAGE", *sub.language));
  for (const auto& kw : sub.keywords) children.push_back(value_binding::atom("KEYWORD", kw));
  std::visit(
      [&children](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, text_payload>)
          children.push_back(bind_text(payload));
        else if constexpr (std::is_same_v<T, relational_view>)
          children.push_back(bind_view(payload));
        else if constexpr (std::is_same_v<T, image_payload>)
          children.push_back(bind_image(payload));
        else
          children.push_back(bind_temporal(payload));
      },
      sub.payload);
  return value_binding::node("SUBDOCUMENT", std::move(children));
}

}  // namespace detail_model

/// Translates a complex object into the binding tree that drives emission.
/// Order is preserved everywhere: subdocuments, keywords, attributes, tuples.
/// Throws invariant_violation when the object is malformed.
inline value_binding to_binding(const complex_object& obj) {
  if (auto issues = check_invariants(obj); !issues.empty())
    throw invariant_violation(issues.front().path, issues.front().description);
  std::vector<value_binding> children;
  children.push_back(value_binding::atom("OBJ_NAME", obj.name));
  children.push_back(value_binding::atom("DATE", obj.date));
  children.push_back(value_binding::atom("SOURCE", obj.source));
  for (const auto& sub : obj.subdocuments)
    children.push_back(detail_model::bind_subdocument(sub));
  return value_binding::node("COMPLEX_OBJECT", std::move(children));
}

}  // namespace mlfd
