#pragma once

/// Element-declaration grammar for the complex-object document type.
///
/// Two declaration dialects are accepted for atomic elements:
///
///   <!ELEMENT NAME PCDATA #REQUIRED>    value must be supplied at emission
///   <!ELEMENT NAME PCDATA #IMPLIED>     a missing value emits an empty element
///   <!ELEMENT NAME (#PCDATA)>           standard form, treated as #IMPLIED
///
/// Composite elements use parenthesized groups: (a, b) sequences, (a | b)
/// choices, with ?, *, + cardinality suffixes on names and groups. Groups
/// nest one level deep at most. ATTLIST, ENTITY, NOTATION declarations,
/// EMPTY/ANY content and mixed content are rejected; comments, processing
/// instructions and a DOCTYPE line are skipped.

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlfd {

// ---------------------------------------------------------------------------
// errors

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct dtd_error : error {
  using error::error;
};

struct syntax_error : dtd_error {
  std::size_t line;
  std::size_t column;
  std::string expected;
  syntax_error(std::size_t line_, std::size_t column_, std::string expected_)
      : dtd_error("dtd syntax error at line " + std::to_string(line_) + ", column " +
                  std::to_string(column_) + ": expected " + expected_),
        line(line_), column(column_), expected(std::move(expected_)) {}
};

struct duplicate_declaration : dtd_error {
  std::string name;
  explicit duplicate_declaration(std::string name_)
      : dtd_error("element declared twice: " + name_), name(std::move(name_)) {}
};

struct empty_dtd : dtd_error {
  empty_dtd() : dtd_error("no element declarations found") {}
};

struct undeclared_reference : dtd_error {
  std::vector<std::string> names;
  explicit undeclared_reference(std::vector<std::string> names_)
      : dtd_error("content models reference undeclared elements"), names(std::move(names_)) {}
};

struct nondeterministic_dtd : dtd_error {
  std::vector<std::string> issues;
  explicit nondeterministic_dtd(std::vector<std::string> issues_)
      : dtd_error("content models are not deterministic: " +
                  (issues_.empty() ? std::string() : issues_.front())),
        issues(std::move(issues_)) {}
};

// ---------------------------------------------------------------------------
// content models

enum class cardinality { exactly_one, optional, zero_or_more, one_or_more };

enum class presence { required, implied };

/// Token standing for character data in first sets.
inline constexpr std::string_view text_token = "#PCDATA";

struct content_model {
  enum class node_kind { text, ref, sequence, choice };

  node_kind kind = node_kind::text;
  presence text_presence = presence::implied;   // text
  std::string name;                             // ref
  std::vector<content_model> children;          // sequence | choice
  cardinality card = cardinality::exactly_one;  // ref | sequence | choice

  bool is_text() const { return kind == node_kind::text; }

  static content_model text(presence p) {
    content_model m;
    m.kind = node_kind::text;
    m.text_presence = p;
    return m;
  }
  static content_model ref(std::string name, cardinality c = cardinality::exactly_one) {
    content_model m;
    m.kind = node_kind::ref;
    m.name = std::move(name);
    m.card = c;
    return m;
  }
  static content_model sequence(std::vector<content_model> ch,
                                cardinality c = cardinality::exactly_one) {
    content_model m;
    m.kind = node_kind::sequence;
    m.children = std::move(ch);
    m.card = c;
    return m;
  }
  static content_model choice(std::vector<content_model> alts,
                              cardinality c = cardinality::exactly_one) {
    content_model m;
    m.kind = node_kind::choice;
    m.children = std::move(alts);
    m.card = c;
    return m;
  }

  friend bool operator==(const content_model& a, const content_model& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case node_kind::text: return a.text_presence == b.text_presence;
      case node_kind::ref: return a.name == b.name && a.card == b.card;
      default: return a.card == b.card && a.children == b.children;
    }
  }
};

struct dtd_table {
  std::string root;
  std::map<std::string, content_model> declarations;
  std::vector<std::string> declaration_order;

  const content_model* find(std::string_view name) const {
    auto it = declarations.find(std::string(name));
    return it == declarations.end() ? nullptr : &it->second;
  }

  friend bool operator==(const dtd_table& a, const dtd_table& b) {
    return a.root == b.root && a.declaration_order == b.declaration_order &&
           a.declarations == b.declarations;
  }
};

// ---------------------------------------------------------------------------
// cardinality helpers

inline bool allows_zero(cardinality c) {
  return c == cardinality::optional || c == cardinality::zero_or_more;
}

inline bool allows_many(cardinality c) {
  return c == cardinality::zero_or_more || c == cardinality::one_or_more;
}

inline std::string_view cardinality_suffix(cardinality c) {
  switch (c) {
    case cardinality::optional: return "?";
    case cardinality::zero_or_more: return "*";
    case cardinality::one_or_more: return "+";
    default: return "";
  }
}

/// Cardinality of `inner` repeated under `outer`, e.g. (a?)+ covers any count.
inline cardinality merge_cardinality(cardinality inner, cardinality outer) {
  const bool zero = allows_zero(inner) || allows_zero(outer);
  const bool many = allows_many(inner) || allows_many(outer);
  if (zero && many) return cardinality::zero_or_more;
  if (zero) return cardinality::optional;
  if (many) return cardinality::one_or_more;
  return cardinality::exactly_one;
}

// ---------------------------------------------------------------------------
// first sets

/// True when `model` matches the empty child sequence.
inline bool nullable(const content_model& model) {
  if (allows_zero(model.card) && !model.is_text()) return true;
  switch (model.kind) {
    case content_model::node_kind::text:
      return true;
    case content_model::node_kind::ref:
      return false;
    case content_model::node_kind::sequence: {
      for (const auto& c : model.children)
        if (!nullable(c)) return false;
      return true;
    }
    case content_model::node_kind::choice: {
      for (const auto& c : model.children)
        if (nullable(c)) return true;
      return false;
    }
  }
  return false;
}

inline void collect_first(const content_model& model, std::set<std::string>& out) {
  switch (model.kind) {
    case content_model::node_kind::text:
      out.emplace(text_token);
      break;
    case content_model::node_kind::ref:
      out.insert(model.name);
      break;
    case content_model::node_kind::sequence:
      for (const auto& c : model.children) {
        collect_first(c, out);
        if (!nullable(c)) break;
      }
      break;
    case content_model::node_kind::choice:
      for (const auto& c : model.children) collect_first(c, out);
      break;
  }
}

/// Element names (or the text token) that can begin a match of `model`.
inline std::set<std::string> first_set(const content_model& model, const dtd_table&) {
  std::set<std::string> out;
  collect_first(model, out);
  return out;
}

inline std::set<std::string> first_set(const content_model& model) {
  std::set<std::string> out;
  collect_first(model, out);
  return out;
}

// ---------------------------------------------------------------------------
// parser

namespace detail_dtd {

struct cursor {
  std::string_view src;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  bool eof() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    return c;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
      advance();
  }

  bool consume(std::string_view token) {
    if (src.substr(pos, token.size()) != token) return false;
    for (std::size_t i = 0; i < token.size(); ++i) advance();
    return true;
  }

  [[noreturn]] void fail(std::string expected) const {
    throw syntax_error(line, column, std::move(expected));
  }

  void skip_until(std::string_view terminator, std::string_view what) {
    while (!eof()) {
      if (src.substr(pos, terminator.size()) == terminator) {
        for (std::size_t i = 0; i < terminator.size(); ++i) advance();
        return;
      }
      advance();
    }
    fail(std::string(what));
  }
};

inline bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':';
}

inline bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

inline std::string parse_name(cursor& cur) {
  cur.skip_ws();
  if (cur.eof() || !is_name_start(cur.peek())) cur.fail("element name");
  std::string name;
  while (!cur.eof() && is_name_char(cur.peek())) name.push_back(cur.advance());
  return name;
}

inline cardinality parse_suffix(cursor& cur) {
  if (cur.eof()) return cardinality::exactly_one;
  switch (cur.peek()) {
    case '?': cur.advance(); return cardinality::optional;
    case '*': cur.advance(); return cardinality::zero_or_more;
    case '+': cur.advance(); return cardinality::one_or_more;
    default: return cardinality::exactly_one;
  }
}

/// Collapses one-child groups into the child, merging cardinalities.
inline content_model finish_group(content_model::node_kind kind,
                                  std::vector<content_model> items, cardinality card) {
  if (items.size() == 1) {
    content_model child = std::move(items.front());
    child.card = merge_cardinality(child.card, card);
    return child;
  }
  return kind == content_model::node_kind::choice
             ? content_model::choice(std::move(items), card)
             : content_model::sequence(std::move(items), card);
}

// depth 1 is the outermost group of a declaration; only depth 1 may nest.
inline content_model parse_group(cursor& cur, int depth);

inline content_model parse_item(cursor& cur, int depth) {
  cur.skip_ws();
  if (cur.eof()) cur.fail("content particle");
  if (cur.peek() == '(') {
    if (depth >= 2) cur.fail("element name (groups nest at most one level)");
    return parse_group(cur, depth + 1);
  }
  std::string name = parse_name(cur);
  cardinality card = parse_suffix(cur);
  return content_model::ref(std::move(name), card);
}

inline content_model parse_group(cursor& cur, int depth) {
  cur.skip_ws();
  if (!cur.consume("(")) cur.fail("'('");
  cur.skip_ws();
  if (cur.consume("#PCDATA")) {
    cur.skip_ws();
    if (!cur.consume(")")) cur.fail("')' (mixed content is not supported)");
    parse_suffix(cur);  // a stray * on (#PCDATA)* is tolerated
    return content_model::text(presence::implied);
  }

  std::vector<content_model> items;
  items.push_back(parse_item(cur, depth));
  auto kind = content_model::node_kind::sequence;
  bool separator_seen = false;
  while (true) {
    cur.skip_ws();
    if (cur.eof()) cur.fail("',', '|' or ')'");
    const char c = cur.peek();
    if (c == ')') {
      cur.advance();
      break;
    }
    if (c != ',' && c != '|') cur.fail("',', '|' or ')'");
    const auto next_kind =
        c == '|' ? content_model::node_kind::choice : content_model::node_kind::sequence;
    if (separator_seen && next_kind != kind) cur.fail("a single separator kind per group");
    kind = next_kind;
    separator_seen = true;
    cur.advance();
    items.push_back(parse_item(cur, depth));
  }
  cardinality card = parse_suffix(cur);
  return finish_group(kind, std::move(items), card);
}

inline content_model parse_content_spec(cursor& cur) {
  cur.skip_ws();
  if (cur.eof()) cur.fail("content specification");
  if (cur.peek() == '(') return parse_group(cur, 1);
  if (cur.consume("PCDATA")) {
    cur.skip_ws();
    if (cur.consume("#REQUIRED")) return content_model::text(presence::required);
    if (cur.consume("#IMPLIED")) return content_model::text(presence::implied);
    cur.fail("#REQUIRED or #IMPLIED");
  }
  if (cur.consume("EMPTY") || cur.consume("ANY"))
    cur.fail("PCDATA or a group (EMPTY/ANY content is not supported)");
  cur.fail("PCDATA or '('");
}

}  // namespace detail_dtd

inline dtd_table parse_dtd(std::string_view text) {
  detail_dtd::cursor cur{text};
  dtd_table table;

  while (true) {
    cur.skip_ws();
    if (cur.eof()) break;
    if (cur.consume("<!--")) {
      cur.skip_until("-->", "'-->'");
      continue;
    }
    if (cur.consume("<?")) {
      cur.skip_until("?>", "'?>'");
      continue;
    }
    if (cur.consume("<!DOCTYPE")) {
      cur.skip_until(">", "'>'");
      continue;
    }
    if (!cur.consume("<!ELEMENT")) cur.fail("'<!ELEMENT'");

    std::string name = detail_dtd::parse_name(cur);
    content_model model = detail_dtd::parse_content_spec(cur);
    cur.skip_ws();
    if (!cur.consume(">")) cur.fail("'>'");

    if (table.declarations.count(name)) throw duplicate_declaration(name);
    if (table.declaration_order.empty()) table.root = name;
    table.declaration_order.push_back(name);
    table.declarations.emplace(std::move(name), std::move(model));
  }

  if (table.declaration_order.empty()) throw empty_dtd();
  return table;
}

// ---------------------------------------------------------------------------
// structural queries

namespace detail_dtd {

inline void collect_refs(const content_model& m, std::vector<std::string>& out) {
  if (m.kind == content_model::node_kind::ref) {
    out.push_back(m.name);
    return;
  }
  for (const auto& c : m.children) collect_refs(c, out);
}

}  // namespace detail_dtd

/// Every referenced element name without a declaration, deduplicated,
/// in declaration-order traversal.
inline std::vector<std::string> link_check(const dtd_table& table) {
  std::vector<std::string> missing;
  std::set<std::string> seen;
  for (const auto& name : table.declaration_order) {
    std::vector<std::string> refs;
    detail_dtd::collect_refs(table.declarations.at(name), refs);
    for (auto& r : refs)
      if (!table.declarations.count(r) && seen.insert(r).second) missing.push_back(r);
  }
  return missing;
}

namespace detail_dtd {

inline bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

inline void check_node_deterministic(const content_model& m, const std::string& element,
                                     std::vector<std::string>& issues) {
  using nk = content_model::node_kind;
  if (m.kind == nk::choice) {
    for (std::size_t i = 0; i < m.children.size(); ++i)
      for (std::size_t j = i + 1; j < m.children.size(); ++j)
        if (!disjoint(first_set(m.children[i]), first_set(m.children[j])))
          issues.push_back(element + ": choice alternatives share first-set names");
  }
  if (m.kind == nk::sequence) {
    // A child with a flexible count must not look like what follows it,
    // or single-lookahead matching cannot tell where the child ends.
    for (std::size_t i = 0; i < m.children.size(); ++i) {
      const auto& c = m.children[i];
      if (!nullable(c) && !allows_many(c.card)) continue;
      std::set<std::string> rest;
      for (std::size_t j = i + 1; j < m.children.size(); ++j) {
        auto f = first_set(m.children[j]);
        rest.insert(f.begin(), f.end());
        if (!nullable(m.children[j])) break;
      }
      if (!disjoint(first_set(c), rest))
        issues.push_back(element + ": repeatable or optional child overlaps its successor");
    }
  }
  if ((m.kind == nk::sequence || m.kind == nk::choice) && allows_many(m.card) && nullable(m)) {
    // An unbounded group that can match nothing never makes progress.
    issues.push_back(element + ": unbounded group is nullable");
  }
  for (const auto& c : m.children) check_node_deterministic(c, element, issues);
}

}  // namespace detail_dtd

/// Diagnoses content models that single-lookahead matching cannot handle.
inline std::vector<std::string> check_deterministic(const dtd_table& table) {
  std::vector<std::string> issues;
  for (const auto& name : table.declaration_order)
    detail_dtd::check_node_deterministic(table.declarations.at(name), name, issues);
  return issues;
}

// ---------------------------------------------------------------------------
// rendering

namespace detail_dtd {

inline void render_node(const content_model& m, std::string& out) {
  using nk = content_model::node_kind;
  switch (m.kind) {
    case nk::text:
      break;  // handled at declaration level
    case nk::ref:
      out += m.name;
      out += cardinality_suffix(m.card);
      break;
    case nk::sequence:
    case nk::choice: {
      const char* sep = m.kind == nk::choice ? " | " : ", ";
      out += '(';
      for (std::size_t i = 0; i < m.children.size(); ++i) {
        if (i) out += sep;
        render_node(m.children[i], out);
      }
      out += ')';
      out += cardinality_suffix(m.card);
      break;
    }
  }
}

}  // namespace detail_dtd

/// Canonical printer: one declaration per line, in declaration order.
/// parse_dtd(render_dtd(t)) reproduces `t` exactly.
inline std::string render_dtd(const dtd_table& table) {
  std::string out;
  for (const auto& name : table.declaration_order) {
    const auto& model = table.declarations.at(name);
    out += "<!ELEMENT ";
    out += name;
    out += ' ';
    if (model.is_text()) {
      out += model.text_presence == presence::required ? "PCDATA #REQUIRED" : "PCDATA #IMPLIED";
    } else if (model.kind == content_model::node_kind::ref) {
      out += '(';
      detail_dtd::render_node(model, out);
      out += ')';
    } else {
      detail_dtd::render_node(model, out);
    }
    out += ">\n";
  }
  return out;
}

/// Parse plus integrity gate: declarations must resolve and be deterministic.
inline dtd_table load_dtd(std::string_view text) {
  dtd_table table = parse_dtd(text);
  if (auto missing = link_check(table); !missing.empty()) throw undeclared_reference(missing);
  if (auto issues = check_deterministic(table); !issues.empty())
    throw nondeterministic_dtd(issues);
  return table;
}

}  // namespace mlfd
