#pragma once

/// Serializes a value binding into an XML document by walking the document
/// type with an explicit frame stack. Popping an Open frame for an atomic
/// element writes one line; for a composite element it writes the start tag,
/// pushes a Close frame, then pushes the matched sub-element frames in
/// reverse so they pop in declaration order. Cardinalities expand against
/// the binding: one frame per bound repetition, none for an omitted optional
/// element, and only the selected alternative at a choice point.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mlfd/binding.hpp"
#include "mlfd/dtd.hpp"

namespace mlfd {

// ---------------------------------------------------------------------------
// errors

struct emit_error : error {
  std::string path;
  emit_error(std::string path_, const std::string& message)
      : error(message + " (at " + path_ + ")"), path(std::move(path_)) {}
};

struct missing_required : emit_error {
  missing_required(std::string path_, const std::string& element)
      : emit_error(std::move(path_), "no value supplied for required element " + element) {}
};

struct cardinality_violation : emit_error {
  std::string expected;
  std::string got;
  cardinality_violation(std::string path_, std::string expected_, std::string got_)
      : emit_error(std::move(path_), "expected " + expected_ + ", got " + got_),
        expected(std::move(expected_)), got(std::move(got_)) {}
};

struct choice_violation : emit_error {
  choice_violation(std::string path_, const std::string& detail)
      : emit_error(std::move(path_), "choice point " + detail) {}
};

struct unknown_element : emit_error {
  std::string name;
  unknown_element(std::string path_, std::string name_)
      : emit_error(std::move(path_), "element " + name_ + " is not declared"),
        name(std::move(name_)) {}
};

// ---------------------------------------------------------------------------
// text handling

/// Entity-escapes &, < and >. Applied to every value except CONTENT.
inline std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Wraps raw text in a CDATA section, splitting any embedded "]]>".
inline std::string wrap_cdata(std::string_view s) {
  std::string out = "<![CDATA[";
  std::size_t pos = 0;
  while (true) {
    auto hit = s.find("]]>", pos);
    if (hit == std::string_view::npos) break;
    out.append(s, pos, hit - pos);
    out += "]]]]><![CDATA[>";
    pos = hit + 3;
  }
  out.append(s, pos, s.size() - pos);
  out += "]]>";
  return out;
}

// ---------------------------------------------------------------------------
// binding-to-model matching

namespace detail_emit {

struct match_ctx {
  const std::vector<value_binding>& kids;
  std::size_t pos = 0;
  const std::string& path;

  const value_binding* head() const { return pos < kids.size() ? &kids[pos] : nullptr; }
};

inline bool head_in(const match_ctx& ctx, const std::set<std::string>& names) {
  const auto* h = ctx.head();
  return h && names.count(h->element) != 0;
}

inline void match_node(const content_model& m, match_ctx& ctx);

inline void match_ref(const content_model& m, match_ctx& ctx) {
  std::size_t reps = 0;
  const std::size_t max = allows_many(m.card) ? SIZE_MAX : 1;
  while (reps < max && ctx.head() && ctx.head()->element == m.name) {
    ++ctx.pos;
    ++reps;
  }
  const std::size_t min = allows_zero(m.card) ? 0 : 1;
  if (reps < min) {
    const auto* h = ctx.head();
    throw cardinality_violation(ctx.path, "element " + m.name,
                                h ? "element " + h->element : "end of children");
  }
}

inline void match_sequence_body(const std::vector<content_model>& body, match_ctx& ctx) {
  for (const auto& child : body) match_node(child, ctx);
}

inline void match_node(const content_model& m, match_ctx& ctx) {
  using nk = content_model::node_kind;
  switch (m.kind) {
    case nk::text:
      throw emit_error(ctx.path, "text content model inside a group");
    case nk::ref:
      match_ref(m, ctx);
      return;
    case nk::sequence: {
      const auto firsts = first_set(m);
      std::size_t reps = 0;
      const std::size_t max = allows_many(m.card) ? SIZE_MAX : 1;
      const std::size_t min = allows_zero(m.card) ? 0 : 1;
      while (reps < max) {
        if (reps >= min && !head_in(ctx, firsts)) break;
        const std::size_t before = ctx.pos;
        match_sequence_body(m.children, ctx);
        ++reps;
        if (ctx.pos == before) break;  // nullable body, no progress
      }
      return;
    }
    case nk::choice: {
      const auto firsts = first_set(m);
      std::size_t reps = 0;
      const std::size_t max = allows_many(m.card) ? SIZE_MAX : 1;
      const std::size_t min = allows_zero(m.card) ? 0 : 1;
      while (true) {
        const content_model* selected = nullptr;
        for (const auto& alt : m.children)
          if (head_in(ctx, first_set(alt))) {
            selected = &alt;
            break;
          }
        if (!selected) {
          if (reps < min)
            throw choice_violation(ctx.path, "binds no alternative (one is required)");
          return;
        }
        if (reps >= max)
          throw choice_violation(ctx.path, "binds more than one alternative");
        const std::size_t before = ctx.pos;
        match_node(*selected, ctx);
        ++reps;
        if (ctx.pos == before) return;
      }
    }
  }
}

/// Matches a composite element's bound children against its content model.
/// On success the children were consumed left to right in full, so the
/// expansion order equals the binding order.
inline void match_children(const content_model& model, const std::vector<value_binding>& kids,
                           const std::string& path, const dtd_table& table) {
  for (const auto& kid : kids)
    if (!table.find(kid.element)) throw unknown_element(path, kid.element);
  match_ctx ctx{kids, 0, path};
  match_node(model, ctx);
  if (ctx.pos != kids.size())
    throw cardinality_violation(path, "end of content",
                                "element " + kids[ctx.pos].element + " and " +
                                    std::to_string(kids.size() - ctx.pos - 1) + " more");
}

struct frame {
  enum class kind { open, close };
  kind k;
  const value_binding* binding = nullptr;  // open
  std::string element;                     // close
  std::size_t depth = 0;
  std::string path;
};

inline void write_indent(std::string& out, std::size_t depth) {
  out.append(depth * 2, ' ');
}

inline void write_atom(std::string& out, const value_binding& b, const content_model& model,
                       std::size_t depth, const std::string& path) {
  if (!b.is_atom())
    throw emit_error(path, "composite children bound to atomic element " + b.element);
  if (!b.value && model.text_presence == presence::required)
    throw missing_required(path, b.element);
  write_indent(out, depth);
  out += '<';
  out += b.element;
  out += '>';
  if (b.value) out += b.element == "CONTENT" ? wrap_cdata(*b.value) : escape_text(*b.value);
  out += "</";
  out += b.element;
  out += ">\n";
}

}  // namespace detail_emit

/// Serializes `binding` against `table`. Deterministic: identical inputs
/// produce identical bytes. The doctype line names `dtd_system_id`.
inline std::string emit(const dtd_table& table, const value_binding& binding,
                        std::string_view dtd_system_id = "mlfd.dtd") {
  using detail_emit::frame;

  if (binding.element != table.root)
    throw emit_error(binding.element, "binding root does not match document type root " +
                                          table.root);

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!DOCTYPE " + table.root + " SYSTEM \"" + std::string(dtd_system_id) + "\">\n";

  std::vector<frame> stack;
  stack.push_back({frame::kind::open, &binding, {}, 0, binding.element});

  while (!stack.empty()) {
    frame f = std::move(stack.back());
    stack.pop_back();

    if (f.k == frame::kind::close) {
      detail_emit::write_indent(out, f.depth);
      out += "</" + f.element + ">\n";
      continue;
    }

    const value_binding& b = *f.binding;
    const content_model* model = table.find(b.element);
    if (!model) throw unknown_element(f.path, b.element);

    if (model->is_text()) {
      detail_emit::write_atom(out, b, *model, f.depth, f.path);
      continue;
    }

    if (b.is_atom())
      throw emit_error(f.path, "value bound to composite element " + b.element);

    detail_emit::match_children(*model, b.children, f.path, table);

    detail_emit::write_indent(out, f.depth);
    out += '<';
    out += b.element;
    out += ">\n";
    stack.push_back({frame::kind::close, nullptr, b.element, f.depth, {}});

    // per-name sibling indices for child paths
    std::map<std::string, std::size_t> counts;
    std::vector<frame> opens;
    opens.reserve(b.children.size());
    for (const auto& child : b.children) {
      const auto idx = counts[child.element]++;
      opens.push_back({frame::kind::open, &child, {}, f.depth + 1,
                       f.path + "/" + child.element + "[" + std::to_string(idx) + "]"});
    }
    for (auto it = opens.rbegin(); it != opens.rend(); ++it) stack.push_back(std::move(*it));
  }

  return out;
}

}  // namespace mlfd
