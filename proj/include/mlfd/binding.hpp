#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mlfd {

/// Concrete values keyed by element name, aligned to a content-model tree.
/// Atomic elements carry a value (absent means "no value supplied");
/// composite elements carry ordered children. Repeated children are
/// contiguous and each choice point binds exactly one alternative.
struct value_binding {
  enum class payload_kind { value, children };

  std::string element;
  payload_kind kind = payload_kind::value;
  std::optional<std::string> value;
  std::vector<value_binding> children;

  bool is_atom() const { return kind == payload_kind::value; }

  static value_binding atom(std::string element, std::optional<std::string> v) {
    value_binding b;
    b.element = std::move(element);
    b.kind = payload_kind::value;
    b.value = std::move(v);
    return b;
  }

  static value_binding node(std::string element, std::vector<value_binding> ch = {}) {
    value_binding b;
    b.element = std::move(element);
    b.kind = payload_kind::children;
    b.children = std::move(ch);
    return b;
  }
};

}  // namespace mlfd
