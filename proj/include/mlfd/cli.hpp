#pragma once

/// Command implementations behind the mlfd tool. Exit statuses:
///
///   integrate   0 success · 1 manifest or document-type error ·
///               2 source fetch/extract error · 3 emission error ·
///               4 self-validation failure (the written file is removed)
///   validate    0 conformant · 4 violations reported · 1 unreadable input
///   inspect     0 success · 1 unreadable or nonconforming input
///
/// Errors go to the diagnostic stream, one message per line; nothing is
/// written there on success.

#ifndef CPPHTTPLIB_REDIRECT_MAX_COUNT
#define CPPHTTPLIB_REDIRECT_MAX_COUNT 5
#endif

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>

#include <httplib.h>

#include "mlfd/canonical_dtd.hpp"
#include "mlfd/detail/text.hpp"
#include "mlfd/dtd.hpp"
#include "mlfd/emit.hpp"
#include "mlfd/extract.hpp"
#include "mlfd/manifest.hpp"
#include "mlfd/model.hpp"
#include "mlfd/validate.hpp"

namespace mlfd {

struct fetch_error : error {
  std::string location;
  fetch_error(std::string location_, const std::string& detail)
      : error("cannot fetch " + location_ + ": " + detail), location(std::move(location_)) {}
};

namespace detail_cli {

inline bool is_url(std::string_view location) {
  return location.starts_with("http://") || location.starts_with("https://");
}

inline int fetch_timeout_secs() {
  if (const char* env = std::getenv("MLFD_TIMEOUT_SECS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 30;
}

/// GET with bounded timeout and at most CPPHTTPLIB_REDIRECT_MAX_COUNT
/// redirects; no authentication.
inline std::string fetch_url(const std::string& url) {
  const auto scheme_end = url.find("://") + 3;
  auto path_start = url.find('/', scheme_end);
  if (path_start == std::string::npos) path_start = url.size();
  const std::string base = url.substr(0, path_start);
  const std::string target = path_start == url.size() ? "/" : url.substr(path_start);

  httplib::Client client(base);
  const int timeout = fetch_timeout_secs();
  client.set_connection_timeout(timeout, 0);
  client.set_read_timeout(timeout, 0);
  client.set_follow_location(true);

  auto res = client.Get(target);
  if (!res) throw fetch_error(url, httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw fetch_error(url, "server returned status " + std::to_string(res->status));
  return res->body;
}

/// Relative file locations resolve against the manifest's directory;
/// the LOCATION element keeps the text as written.
inline std::string read_source(const std::string& location, const std::string& manifest_dir) {
  if (is_url(location)) return fetch_url(location);
  std::filesystem::path path(location);
  if (path.is_relative() && !manifest_dir.empty())
    path = std::filesystem::path(manifest_dir) / path;
  auto bytes = detail::read_file(path.string());
  if (!bytes) throw fetch_error(location, "cannot read file " + path.string());
  return std::move(*bytes);
}

inline const xml_element* find_child(const xml_element& el, std::string_view name) {
  for (const auto& child : el.children)
    if (child.name == name) return &child;
  return nullptr;
}

inline const dtd_table& canonical_table() {
  static const dtd_table table = load_dtd(canonical_dtd_text);
  return table;
}

}  // namespace detail_cli

inline int run_integrate(const std::string& manifest_path, const std::string& dtd_path,
                         const std::string& out_path, std::ostream& diag = std::cerr) {
  manifest m;
  try {
    auto text = detail::read_file(manifest_path);
    if (!text) {
      diag << "cannot read manifest " << manifest_path << "\n";
      return 1;
    }
    m = parse_manifest(*text);
  } catch (const manifest_error& e) {
    diag << e.what() << "\n";
    return 1;
  }

  dtd_table table;
  try {
    auto text = detail::read_file(dtd_path);
    if (!text) {
      diag << "cannot read document type " << dtd_path << "\n";
      return 1;
    }
    table = load_dtd(*text);
  } catch (const dtd_error& e) {
    diag << e.what() << "\n";
    return 1;
  }

  const std::string manifest_dir = std::filesystem::path(manifest_path).parent_path().string();
  complex_object obj;
  obj.name = m.object_name;
  obj.date = m.date;
  obj.source = m.source;
  try {
    for (const auto& spec : m.subdocuments) {
      const std::string bytes = detail_cli::read_source(spec.location, manifest_dir);
      obj.subdocuments.push_back(build_subdocument(spec, bytes));
    }
  } catch (const fetch_error& e) {
    diag << e.what() << "\n";
    return 2;
  } catch (const extract_error& e) {
    diag << e.what() << "\n";
    return 2;
  }

  std::string document;
  try {
    const value_binding binding = to_binding(obj);
    document = emit(table, binding, std::filesystem::path(dtd_path).filename().string());
  } catch (const invariant_violation& e) {
    diag << e.what() << "\n";
    return 3;
  } catch (const emit_error& e) {
    diag << e.what() << "\n";
    return 3;
  }

  {
    std::ofstream out(out_path, std::ios::binary);
    out << document;
    if (!out) {
      diag << "cannot write " << out_path << "\n";
      return 3;
    }
  }

  validation_report report;
  try {
    const xml_element tree = parse_document(document);
    report = validate(tree, table);
    if (report.clean()) report = validate_semantics(tree);
  } catch (const not_well_formed& e) {
    report.violations.push_back({table.root, violation_code::unknown_element, e.what()});
  }
  if (!report.clean()) {
    diag << render_report(report);
    std::error_code ec;
    std::filesystem::remove(out_path, ec);
    return 4;
  }
  return 0;
}

inline int run_validate(const std::string& doc_path, const std::string& dtd_path,
                        std::ostream& out = std::cout, std::ostream& diag = std::cerr) {
  const auto doc_text = detail::read_file(doc_path);
  if (!doc_text) {
    diag << "cannot read document " << doc_path << "\n";
    return 1;
  }
  dtd_table table;
  try {
    auto text = detail::read_file(dtd_path);
    if (!text) {
      diag << "cannot read document type " << dtd_path << "\n";
      return 1;
    }
    table = load_dtd(*text);
  } catch (const dtd_error& e) {
    diag << e.what() << "\n";
    return 1;
  }

  xml_element tree;
  try {
    tree = parse_document(*doc_text);
  } catch (const not_well_formed& e) {
    diag << e.what() << "\n";
    return 1;
  }

  validation_report report = validate(tree, table);
  if (report.clean()) report = validate_semantics(tree);
  out << render_report(report);
  return report.clean() ? 0 : 4;
}

inline int run_inspect(const std::string& doc_path, std::ostream& out = std::cout,
                       std::ostream& diag = std::cerr) {
  const auto doc_text = detail::read_file(doc_path);
  if (!doc_text) {
    diag << "cannot read document " << doc_path << "\n";
    return 1;
  }
  xml_element tree;
  try {
    tree = parse_document(*doc_text);
  } catch (const not_well_formed& e) {
    diag << e.what() << "\n";
    return 1;
  }

  const dtd_table& table = detail_cli::canonical_table();
  validation_report report = validate(tree, table);
  if (report.clean()) report = validate_semantics(tree);
  if (!report.clean()) {
    diag << "document does not conform to the complex-object type\n";
    diag << render_report(report);
    return 1;
  }

  for (const auto& sub : tree.children) {
    if (sub.name != "SUBDOCUMENT") continue;
    const auto* name = detail_cli::find_child(sub, "DOC_NAME");
    const auto* type = detail_cli::find_child(sub, "TYPE");
    const auto* size = detail_cli::find_child(sub, "SIZE");
    std::size_t keywords = 0;
    for (const auto& child : sub.children)
      if (child.name == "KEYWORD") ++keywords;

    std::string payload = "unknown";
    if (const auto* text = detail_cli::find_child(sub, "TEXT"))
      payload = detail_cli::find_child(*text, "TAGGED_TEXT") ? "tagged-text" : "plain-text";
    else if (detail_cli::find_child(sub, "RELATIONAL_VIEW"))
      payload = "view";
    else if (detail_cli::find_child(sub, "IMAGE"))
      payload = "image";
    else if (const auto* temporal = detail_cli::find_child(sub, "TEMPORAL"))
      payload = detail_cli::find_child(*temporal, "SOUND") ? "sound" : "video";

    out << (name ? name->text : "") << "  " << (type ? type->text : "") << "  "
        << (size ? size->text : "") << "  " << keywords
        << (keywords == 1 ? " keyword" : " keywords") << "  " << payload << "\n";
  }
  return 0;
}

}  // namespace mlfd
