#pragma once

// Minimal read-only element tree built with expat. Namespace prefixes are
// kept as written; callers match on local names. Each node remembers the
// byte range it occupies in the source so payloads can be lifted verbatim.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oai::detail {

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  /// Concatenated character data of this element (direct children only).
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::string_view local_name() const noexcept;
  const XmlNode* child(std::string_view local) const noexcept;
  std::optional<std::string_view> attribute(std::string_view local) const noexcept;
};

/// Throws ParseError on malformed input or a DOCTYPE declaration.
XmlNode parse_xml(std::string_view document);

/// True when fragment is exactly one well-formed element (plus whitespace).
bool is_single_element(std::string_view fragment);

inline std::string_view local_part(std::string_view qname) noexcept {
  const auto colon = qname.rfind(':');
  return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

}  // namespace oai::detail
