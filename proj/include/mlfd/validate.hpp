#pragma once

/// Conformance checking of XML documents against a dtd_table: a minimal
/// well-formedness parse into an element tree, deterministic content-model
/// matching with single-name lookahead, and the attribute-reference check
/// for relational views. Matching keeps going after a mismatch so one run
/// reports every violation.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mlfd/detail/text.hpp"
#include "mlfd/dtd.hpp"

namespace mlfd {

// ---------------------------------------------------------------------------
// document tree

struct not_well_formed : error {
  std::size_t line;
  std::string detail;
  not_well_formed(std::size_t line_, std::string detail_)
      : error("document is not well-formed at line " + std::to_string(line_) + ": " + detail_),
        line(line_), detail(std::move(detail_)) {}
};

struct xml_element {
  std::string name;
  std::vector<xml_element> children;
  std::string text;  // concatenated character data directly inside
};

namespace detail_xml {

struct cursor {
  std::string_view src;
  std::size_t pos = 0;
  std::size_t line = 1;

  bool eof() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }
  bool looking_at(std::string_view t) const { return src.substr(pos, t.size()) == t; }

  char advance() {
    char c = src[pos++];
    if (c == '\n') ++line;
    return c;
  }

  bool consume(std::string_view t) {
    if (!looking_at(t)) return false;
    for (std::size_t i = 0; i < t.size(); ++i) advance();
    return true;
  }

  void skip_ws() {
    while (!eof() && detail::is_ascii_space(peek())) advance();
  }

  [[noreturn]] void fail(std::string detail) const { throw not_well_formed(line, std::move(detail)); }

  void skip_until(std::string_view terminator, std::string_view what) {
    while (!eof()) {
      if (looking_at(terminator)) {
        consume(terminator);
        return;
      }
      advance();
    }
    fail("unterminated " + std::string(what));
  }
};

inline std::string parse_name(cursor& cur) {
  std::string name;
  while (!cur.eof()) {
    char c = cur.peek();
    if (detail::is_ascii_space(c) || c == '>' || c == '/' || c == '=') break;
    if (c == '<') cur.fail("'<' inside a tag");
    name.push_back(cur.advance());
  }
  if (name.empty()) cur.fail("element name");
  return name;
}

inline void decode_entity(cursor& cur, std::string& out) {
  // cur sits just past '&'
  std::string entity;
  while (!cur.eof() && cur.peek() != ';' && entity.size() <= 6) entity.push_back(cur.advance());
  if (cur.eof() || cur.peek() != ';') cur.fail("';' terminating entity reference");
  cur.advance();
  if (entity == "amp") out += '&';
  else if (entity == "lt") out += '<';
  else if (entity == "gt") out += '>';
  else if (entity == "quot") out += '"';
  else if (entity == "apos") out += '\'';
  else cur.fail("known entity reference, got '&" + entity + ";'");
}

inline void skip_attributes(cursor& cur) {
  while (true) {
    cur.skip_ws();
    if (cur.eof()) cur.fail("'>' closing a start tag");
    char c = cur.peek();
    if (c == '>' || c == '/') return;
    parse_name(cur);  // attribute name, discarded
    cur.skip_ws();
    if (!cur.consume("=")) cur.fail("'=' in attribute");
    cur.skip_ws();
    if (cur.eof() || (cur.peek() != '"' && cur.peek() != '\'')) cur.fail("quoted attribute value");
    const char quote = cur.advance();
    while (!cur.eof() && cur.peek() != quote) cur.advance();
    if (cur.eof()) cur.fail("closing attribute quote");
    cur.advance();
  }
}

inline xml_element parse_element(cursor& cur);

inline void parse_content(cursor& cur, xml_element& el) {
  while (true) {
    if (cur.eof()) cur.fail("'</" + el.name + ">'");
    if (cur.peek() != '<') {
      if (cur.peek() == '&') {
        cur.advance();
        decode_entity(cur, el.text);
      } else {
        el.text.push_back(cur.advance());
      }
      continue;
    }
    if (cur.consume("<![CDATA[")) {
      while (!cur.looking_at("]]>")) {
        if (cur.eof()) cur.fail("']]>' terminating CDATA section");
        el.text.push_back(cur.advance());
      }
      cur.consume("]]>");
      continue;
    }
    if (cur.consume("<!--")) {
      cur.skip_until("-->", "comment");
      continue;
    }
    if (cur.consume("<?")) {
      cur.skip_until("?>", "processing instruction");
      continue;
    }
    if (cur.looking_at("</")) {
      cur.consume("</");
      std::string name = parse_name(cur);
      if (name != el.name)
        cur.fail("'</" + el.name + ">', got '</" + name + ">'");
      cur.skip_ws();
      if (!cur.consume(">")) cur.fail("'>' closing end tag");
      return;
    }
    el.children.push_back(parse_element(cur));
  }
}

inline xml_element parse_element(cursor& cur) {
  if (!cur.consume("<")) cur.fail("'<' starting an element");
  xml_element el;
  el.name = parse_name(cur);
  skip_attributes(cur);
  if (cur.consume("/>")) return el;
  if (!cur.consume(">")) cur.fail("'>' closing a start tag");
  parse_content(cur, el);
  return el;
}

}  // namespace detail_xml

/// Minimal well-formedness parse. Prolog, doctype line, comments and
/// processing instructions are skipped; predefined entities and CDATA
/// sections are decoded; attributes are checked for shape and discarded.
inline xml_element parse_document(std::string_view text) {
  detail_xml::cursor cur{text};
  cur.consume("\xEF\xBB\xBF");
  while (true) {
    cur.skip_ws();
    if (cur.eof()) cur.fail("a document element");
    if (cur.consume("<?")) {
      cur.skip_until("?>", "processing instruction");
      continue;
    }
    if (cur.consume("<!--")) {
      cur.skip_until("-->", "comment");
      continue;
    }
    if (cur.consume("<!DOCTYPE")) {
      cur.skip_until(">", "doctype declaration");
      continue;
    }
    break;
  }
  xml_element root = detail_xml::parse_element(cur);
  while (true) {
    cur.skip_ws();
    if (cur.eof()) break;
    if (cur.consume("<!--")) {
      cur.skip_until("-->", "comment");
      continue;
    }
    if (cur.consume("<?")) {
      cur.skip_until("?>", "processing instruction");
      continue;
    }
    cur.fail("end of document after the root element");
  }
  return root;
}

// ---------------------------------------------------------------------------
// validation report

enum class violation_code {
  unknown_element,
  unexpected_child,
  missing_child,
  text_in_composite,
  child_in_atomic,
  trailing_children,
};

inline std::string_view violation_code_name(violation_code c) {
  switch (c) {
    case violation_code::unknown_element: return "UnknownElement";
    case violation_code::unexpected_child: return "UnexpectedChild";
    case violation_code::missing_child: return "MissingChild";
    case violation_code::text_in_composite: return "TextInComposite";
    case violation_code::child_in_atomic: return "ChildInAtomic";
    case violation_code::trailing_children: return "TrailingChildren";
  }
  return "UnknownElement";
}

struct violation {
  std::string path;
  violation_code code;
  std::string detail;
  friend bool operator==(const violation&, const violation&) = default;
};

struct validation_report {
  std::vector<violation> violations;
  bool clean() const { return violations.empty(); }
};

/// One violation per line: PATH <TAB> CODE <TAB> DETAIL.
inline std::string render_report(const validation_report& report) {
  std::string out;
  for (const auto& v : report.violations) {
    out += v.path;
    out += '\t';
    out += violation_code_name(v.code);
    out += '\t';
    out += v.detail;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// content-model matching

namespace detail_validate {

struct match_ctx {
  const std::vector<std::string>& names;
  std::size_t pos = 0;
  std::vector<violation>* out;
  const std::string* path;

  const std::string* head() const { return pos < names.size() ? &names[pos] : nullptr; }

  void report(violation_code code, std::string detail) {
    out->push_back({*path, code, std::move(detail)});
  }
};

inline std::string expected_label(const content_model& m) {
  if (m.kind == content_model::node_kind::ref) return m.name;
  std::string label = "one of ";
  bool first = true;
  for (const auto& n : first_set(m)) {
    if (!first) label += " | ";
    label += n;
    first = false;
  }
  return label;
}

inline void match_node(const content_model& m, match_ctx& ctx);

inline void match_sequence_pass(const std::vector<content_model>& body, match_ctx& ctx) {
  std::size_t i = 0;
  while (i < body.size()) {
    const auto& child = body[i];
    const auto firsts = first_set(child);
    const auto* head = ctx.head();
    if (head && firsts.count(*head)) {
      match_node(child, ctx);
      ++i;
      continue;
    }
    if (nullable(child)) {
      ++i;
      continue;
    }
    if (head) {
      bool useful_later = false;
      for (std::size_t j = i + 1; j < body.size() && !useful_later; ++j)
        useful_later = first_set(body[j]).count(*head) != 0;
      if (!useful_later) {
        ctx.report(violation_code::unexpected_child, "unexpected element " + *head);
        ++ctx.pos;
        continue;  // retry the same item against the next child
      }
    }
    ctx.report(violation_code::missing_child, "expected " + expected_label(child));
    ++i;
  }
}

inline void match_node(const content_model& m, match_ctx& ctx) {
  using nk = content_model::node_kind;
  const std::size_t min = allows_zero(m.card) ? 0 : 1;
  const std::size_t max = allows_many(m.card) ? SIZE_MAX : 1;

  switch (m.kind) {
    case nk::text:
      return;  // atomic models carry no child elements
    case nk::ref: {
      std::size_t reps = 0;
      while (reps < max && ctx.head() && *ctx.head() == m.name) {
        ++ctx.pos;
        ++reps;
      }
      if (reps < min) ctx.report(violation_code::missing_child, "expected " + m.name);
      return;
    }
    case nk::sequence: {
      const auto firsts = first_set(m);
      std::size_t reps = 0;
      while (reps < max) {
        if (reps >= min && !(ctx.head() && firsts.count(*ctx.head()))) break;
        const std::size_t before = ctx.pos;
        match_sequence_pass(m.children, ctx);
        ++reps;
        if (ctx.pos == before) break;
      }
      return;
    }
    case nk::choice: {
      std::size_t reps = 0;
      while (reps < max) {
        const content_model* selected = nullptr;
        const auto* head = ctx.head();
        if (head)
          for (const auto& alt : m.children)
            if (first_set(alt).count(*head)) {
              selected = &alt;
              break;
            }
        if (!selected) {
          if (reps < min)
            ctx.report(violation_code::missing_child, "expected " + expected_label(m));
          return;
        }
        const std::size_t before = ctx.pos;
        match_node(*selected, ctx);
        ++reps;
        if (ctx.pos == before) return;
      }
      return;
    }
  }
}

}  // namespace detail_validate

/// Matches a child-name sequence against a content model. Violations carry
/// `path` (the parent element). Empty result means the sequence conforms.
inline validation_report match_content(const content_model& model,
                                       const std::vector<std::string>& child_names,
                                       const std::string& path = {}) {
  validation_report report;
  detail_validate::match_ctx ctx{child_names, 0, &report.violations, &path};
  detail_validate::match_node(model, ctx);
  if (ctx.pos < child_names.size()) {
    const auto left = child_names.size() - ctx.pos;
    report.violations.push_back({path, violation_code::trailing_children,
                                 "unexpected trailing children starting with " +
                                     child_names[ctx.pos] + " (" + std::to_string(left) +
                                     " left)"});
  }
  return report;
}

// ---------------------------------------------------------------------------
// document validation

namespace detail_validate {

inline bool whitespace_only(std::string_view s) {
  for (char c : s)
    if (!detail::is_ascii_space(c)) return false;
  return true;
}

inline std::string child_path(const std::string& parent, const xml_element& parent_el,
                              std::size_t child_index) {
  std::size_t same_name = 0;
  for (std::size_t i = 0; i < child_index; ++i)
    if (parent_el.children[i].name == parent_el.children[child_index].name) ++same_name;
  return parent + "/" + parent_el.children[child_index].name + "[" + std::to_string(same_name) +
         "]";
}

inline void validate_element(const xml_element& el, const std::string& path,
                             const dtd_table& table, std::vector<violation>& out) {
  const content_model* model = table.find(el.name);
  if (!model) {
    out.push_back({path, violation_code::unknown_element,
                   "element " + el.name + " is not declared"});
    return;
  }

  if (model->is_text()) {
    for (std::size_t i = 0; i < el.children.size(); ++i)
      out.push_back({child_path(path, el, i), violation_code::child_in_atomic,
                     "element inside atomic " + el.name});
    return;
  }

  if (!whitespace_only(el.text))
    out.push_back({path, violation_code::text_in_composite,
                   "character data inside composite " + el.name});

  std::vector<std::string> declared_names;
  declared_names.reserve(el.children.size());
  for (const auto& child : el.children)
    if (table.find(child.name)) declared_names.push_back(child.name);

  auto matched = match_content(*model, declared_names, path);
  out.insert(out.end(), matched.violations.begin(), matched.violations.end());

  for (std::size_t i = 0; i < el.children.size(); ++i) {
    const auto& child = el.children[i];
    const std::string cpath = child_path(path, el, i);
    if (!table.find(child.name)) {
      out.push_back({cpath, violation_code::unknown_element,
                     "element " + child.name + " is not declared"});
      continue;
    }
    validate_element(child, cpath, table, out);
  }
}

}  // namespace detail_validate

/// Checks `tree` against `table`; collects every violation instead of
/// stopping at the first. Whitespace-only character data inside composite
/// elements is tolerated (the emitter indents).
inline validation_report validate(const xml_element& tree, const dtd_table& table) {
  validation_report report;
  if (tree.name != table.root)
    report.violations.push_back({tree.name, violation_code::unexpected_child,
                                 "document element is " + tree.name + ", expected " + table.root});
  detail_validate::validate_element(tree, tree.name, table, report.violations);
  return report;
}

/// Attribute-reference check: inside every RELATIONAL_VIEW, each
/// TUPLE/ATT_NAME_REF value must equal some ATTRIBUTE/ATT_NAME value.
inline validation_report validate_semantics(const xml_element& tree) {
  validation_report report;

  struct walker {
    std::vector<violation>& out;

    void visit(const xml_element& el, const std::string& path) {
      if (el.name == "RELATIONAL_VIEW") check_view(el, path);
      for (std::size_t i = 0; i < el.children.size(); ++i)
        visit(el.children[i], detail_validate::child_path(path, el, i));
    }

    void check_view(const xml_element& view, const std::string& path) {
      std::set<std::string> attribute_names;
      for (const auto& child : view.children)
        if (child.name == "ATTRIBUTE")
          for (const auto& field : child.children)
            if (field.name == "ATT_NAME") attribute_names.insert(field.text);
      for (std::size_t i = 0; i < view.children.size(); ++i) {
        const auto& child = view.children[i];
        if (child.name != "TUPLE") continue;
        const std::string tpath = detail_validate::child_path(path, view, i);
        for (std::size_t k = 0; k < child.children.size(); ++k) {
          const auto& field = child.children[k];
          if (field.name != "ATT_NAME_REF") continue;
          if (!attribute_names.count(field.text))
            out.push_back({detail_validate::child_path(tpath, child, k),
                           violation_code::unknown_element,
                           "reference '" + field.text + "' names no attribute"});
        }
      }
    }
  };

  walker w{report.violations};
  w.visit(tree, tree.name);
  return report;
}

}  // namespace mlfd
